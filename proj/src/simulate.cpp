#include "votewire/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "votewire/special.hpp"
#include "votewire/text.hpp"

namespace votewire::simulate {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::string_view kClassLetters[] = {"A", "B", "C"};

TrafficClass TypeOf(std::size_t cls) { return static_cast<TrafficClass>(cls); }
std::size_t ClassIndexOf(TrafficClass c) { return static_cast<std::size_t>(c); }

std::string Numbered(std::string_view prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, n);
  return std::string(prefix) + buf;
}

std::uint64_t ToOctets(double v) { return v < 1.0 ? 1 : static_cast<std::uint64_t>(std::llround(v)); }

double Clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Stratified sample of n standard normals, shuffled.
std::vector<double> StratifiedNormals(Rng& rng, std::size_t n) {
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = stats::NormalQuantile((static_cast<double>(i) + rng.UniformOpen()) / static_cast<double>(n));
  }
  rng.Shuffle(z);
  return z;
}

// Stratified sample of n center sizes (1-based) from the weight profile.
std::vector<std::size_t> StratifiedSizes(Rng& rng, std::size_t n, const std::vector<double>& weights) {
  std::vector<double> cdf(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cdf.begin());
  const double total = cdf.back();
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + rng.Uniform()) / static_cast<double>(n) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    sizes[i] = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), weights.size() - 1) + 1;
  }
  rng.Shuffle(sizes);
  return sizes;
}

double DrawModel(Rng& rng, const TransmissionModel& m, double votes, double* offset_out = nullptr) {
  double y = m.intercept + rng.Normal(0.0, m.sigma);
  if (m.kind == ModelKind::kPerVote) {
    y += m.slope * votes;
    const double offset = m.line_offsets[rng.Categorical(m.offset_probs)];
    y += offset;
    if (offset_out) *offset_out = offset;
  }
  return y;
}

struct CellLine {
  double lift = 0.0;
  double slope = 0.0;
};

CellLine LowCellLine(std::uint64_t seed, std::int64_t cell, const LowPatternModel& m) {
  Rng rng(seed, "low-cell:" + std::to_string(cell));
  CellLine line;
  line.lift = rng.Uniform(m.lift_min, m.lift_max);
  line.slope = rng.Uniform(m.slope_min, m.slope_max);
  return line;
}

double LowPatternBytes(Rng& rng, std::uint64_t seed, double base, double votes, const LowPatternModel& m) {
  const auto cell = static_cast<std::int64_t>(std::floor(votes / m.cell_width));
  const auto line = LowCellLine(seed, cell, m);
  return base + line.lift + line.slope * (votes - static_cast<double>(cell) * m.cell_width) +
         rng.Normal(0.0, m.sigma);
}

std::uint64_t Packets(Rng& rng, std::uint64_t octets) { return octets / 120 + 1 + rng.UniformInt(0, 3); }

TrafficClass Plurality(const std::array<std::size_t, 3>& counts) {
  std::size_t best = 0;
  TrafficClass cls = TrafficClass::kUnclassified;
  for (std::size_t i = 0; i < 3; ++i) {
    if (counts[i] > best) {
      best = counts[i];
      cls = TypeOf(i);
    }
  }
  return cls;
}

struct PlannedCenter {
  std::string id;
  std::size_t cls = 0;
  std::size_t primary = 1;
  double z_abstention = 0.0;
  double z_no = 0.0;
};

}  // namespace

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed, std::string_view key) : state_(Mix(seed ^ Fnv1a(key))) {}

std::uint64_t Rng::NextU64() {
  state_ += kGamma;
  return Mix(state_);
}

double Rng::Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

double Rng::UniformOpen() {
  double u;
  do {
    u = Uniform();
  } while (u == 0.0);
  return u;
}

std::uint64_t Rng::UniformInt(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo;
  if (span == ~0ULL) return NextU64();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = ~0ULL - (~0ULL % range);
  std::uint64_t v;
  do {
    v = NextU64();
  } while (v >= limit);
  return lo + v % range;
}

double Rng::Normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double u1 = UniformOpen();
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::size_t Rng::Binomial(std::size_t n, double p) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) k += Bernoulli(p) ? 1 : 0;
  return k;
}

std::size_t Rng::Categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = Uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

std::string_view ToString(ModelKind k) { return k == ModelKind::kPerVote ? "per_vote" : "fixed_tally"; }

ScenarioConfig DefaultPack2004() {
  ScenarioConfig c;
  auto& a = c.classes[0];
  a.machines_profile = {207, 207, 207, 207, 21, 13, 13, 13, 13, 13, 13, 13, 13, 13, 13, 13, 13, 13};
  a.secondary_rate = 0.0887;
  a.registered_min = 460;
  a.registered_max = 800;
  a.abstention = {28.35, 5.45};
  a.no_share = {62.04, 14.65};
  a.incoming = {ModelKind::kPerVote, 47.11, 5606.0, 300.0, {0.0, 1200.0, 2400.0}, {0.8, 0.15, 0.05}};
  a.outgoing = {ModelKind::kPerVote, 1.28, 5498.0, 150.0, {0.0}, {1.0}};
  a.abstention_1998 = {35.69, 6.23};
  a.abstention_2000 = {42.43, 6.70};
  a.chavez_1998 = {58.36, 9.90};
  a.chavez_2000 = {64.11, 13.1};

  auto& b = c.classes[1];
  b.machines_profile = {38, 125, 204, 222, 181, 118, 64, 30, 12, 4, 1, 1, 1, 1, 1, 1, 1, 1};
  b.secondary_rate = 0.1016;
  b.registered_min = 480;
  b.registered_max = 790;
  b.abstention = {29.71, 6.34};
  b.no_share = {51.83, 19.25};
  b.incoming = {ModelKind::kFixedTally, 0.0, 3000.0, 150.0, {0.0}, {1.0}};
  b.outgoing = {ModelKind::kFixedTally, 0.0, 900.0, 40.0, {0.0}, {1.0}};
  b.abstention_1998 = {35.05, 7.83};
  b.abstention_2000 = {43.94, 8.25};
  b.chavez_1998 = {51.62, 13.84};
  b.chavez_2000 = {54.55, 18.53};

  auto& cc = c.classes[2];
  cc.machines_profile = {111, 244, 268, 197, 108, 48, 17, 5, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  cc.secondary_rate = 0.0054;
  cc.registered_min = 450;
  cc.registered_max = 765;
  cc.abstention = {28.41, 6.16};
  cc.no_share = {62.30, 15.92};
  cc.incoming = {ModelKind::kPerVote, 53.25, 8461.0, 400.0, {0.0}, {1.0}};
  cc.outgoing = {ModelKind::kPerVote, 1.28, 6304.0, 200.0, {0.0}, {1.0}};
  cc.abstention_1998 = {38.32, 8.99};
  cc.abstention_2000 = {42.99, 8.63};
  cc.chavez_1998 = {51.46, 11.80};
  cc.chavez_2000 = {60.39, 13.38};
  return c;
}

namespace {

[[noreturn]] void Invalid(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::kInvalidConfig, field + ": " + reason);
}

void CheckProbability(double p, const std::string& field) {
  if (!(p >= 0.0 && p <= 1.0)) Invalid(field, "probability outside [0, 1]");
}

void CheckSigma(double s, const std::string& field) {
  if (!(s >= 0.0) || !std::isfinite(s)) Invalid(field, "standard deviation must be finite and >= 0");
}

void CheckModel(const TransmissionModel& m, const std::string& field) {
  CheckSigma(m.sigma, field + ".sigma");
  if (!std::isfinite(m.slope) || !std::isfinite(m.intercept)) Invalid(field, "non-finite coefficient");
  if (m.line_offsets.empty() || m.line_offsets.size() != m.offset_probs.size()) {
    Invalid(field + ".line_offsets", "needs one probability per offset");
  }
  double total = 0.0;
  for (double p : m.offset_probs) {
    CheckProbability(p, field + ".offset_probs");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) Invalid(field + ".offset_probs", "must sum to 1");
}

}  // namespace

void ValidateConfig(const ScenarioConfig& c) {
  if (!(c.scale > 0.0) || !std::isfinite(c.scale)) Invalid("scale", "must be > 0");
  std::size_t total_centers = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string name = "classes." + std::string(kClassLetters[i]);
    total_centers += c.n_centers[i];
    const auto& p = c.classes[i];
    if (p.machines_profile.empty() || p.machines_profile.size() > kMaxMachinesPerCenter) {
      Invalid(name + ".machines_profile", "needs 1..18 weights");
    }
    double w = 0.0;
    for (double x : p.machines_profile) {
      if (!(x >= 0.0)) Invalid(name + ".machines_profile", "negative weight");
      w += x;
    }
    if (!(w > 0.0)) Invalid(name + ".machines_profile", "weights sum to zero");
    CheckProbability(p.secondary_rate, name + ".secondary_rate");
    if (p.registered_min == 0 || p.registered_min > p.registered_max) {
      Invalid(name + ".registered_min", "range must be 1 <= min <= max");
    }
    for (const auto* m : {&p.abstention, &p.no_share, &p.abstention_1998, &p.abstention_2000, &p.chavez_1998,
                          &p.chavez_2000}) {
      CheckSigma(m->std, name + " std");
    }
    CheckModel(p.incoming, name + ".incoming");
    CheckModel(p.outgoing, name + ".outgoing");
  }
  if (total_centers == 0) Invalid("n_centers", "at least one center required");
  CheckProbability(c.subgroups.p_superior, "subgroups.p_superior");
  CheckProbability(c.low_pattern.share, "low_pattern.share");
  if (!(c.low_pattern.cell_width > 0.0)) Invalid("low_pattern.cell_width", "must be > 0");
  if (c.low_pattern.lift_min > c.low_pattern.lift_max) Invalid("low_pattern.lift_min", "exceeds lift_max");
  if (c.low_pattern.slope_min > c.low_pattern.slope_max) Invalid("low_pattern.slope_min", "exceeds slope_max");
  CheckSigma(c.low_pattern.sigma, "low_pattern.sigma");
  CheckSigma(c.no_machine_std, "no_machine_std");
  CheckSigma(c.abstention_machine_std, "abstention_machine_std");
  CheckSigma(c.null_share_2004.std, "null_share_2004.std");
  if (!(c.history.electorate_growth > 0.0)) Invalid("history.electorate_growth", "must be > 0");
  for (double rho : {c.history.abstention_rho, c.history.chavez_rho_1998, c.history.chavez_rho_2000}) {
    if (!(rho >= -1.0 && rho <= 1.0)) Invalid("history", "correlation outside [-1, 1]");
  }
  CheckSigma(c.history.null_share.std, "history.null_share.std");
  CheckSigma(c.history.others_share.std, "history.others_share.std");
  if (c.region.centers_per_municipality == 0) Invalid("region.centers_per_municipality", "must be > 0");
  if (c.region.municipalities_per_state == 0) Invalid("region.municipalities_per_state", "must be > 0");
  CheckProbability(c.region.blocking, "region.blocking");
  CheckProbability(c.retry_rate, "retry_rate");
}

ingest::NasMap DefaultNasMap() {
  ingest::NasMap nas;
  nas["10.1.0.1"] = Medium::kWire;
  nas["10.2.0.1"] = Medium::kCellular;
  return nas;
}

SyntheticDataset GenerateScenario(const ScenarioConfig& config) {
  ValidateConfig(config);
  SyntheticDataset d;
  d.poll_close = config.poll_close;
  d.nas = DefaultNasMap();

  // Centers with their class-level latent effects.
  std::vector<PlannedCenter> plan;
  std::array<std::size_t, 3> per_class{};
  for (std::size_t cls = 0; cls < 3; ++cls) {
    const auto configured = config.n_centers[cls];
    std::size_t n = static_cast<std::size_t>(std::llround(static_cast<double>(configured) * config.scale));
    if (configured > 0 && n == 0) n = 1;
    per_class[cls] = n;
    const std::string letter(kClassLetters[cls]);
    Rng size_rng(config.seed, "sizes:" + letter);
    Rng abst_rng(config.seed, "abstention:" + letter);
    Rng no_rng(config.seed, "no-share:" + letter);
    const auto sizes = StratifiedSizes(size_rng, n, config.classes[cls].machines_profile);
    const auto z_abst = StratifiedNormals(abst_rng, n);
    const auto z_no = StratifiedNormals(no_rng, n);
    for (std::size_t i = 0; i < n; ++i) {
      PlannedCenter p;
      p.id = Numbered("VC", plan.size() + 1, 5);
      p.cls = cls;
      p.primary = sizes[i];
      p.z_abstention = z_abst[i];
      p.z_no = z_no[i];
      plan.push_back(std::move(p));
    }
  }

  // Region layout: consecutive municipality blocks per class, a share of
  // centers scattered anywhere.
  const auto cpm = config.region.centers_per_municipality;
  std::array<std::size_t, 3> block_start{};
  std::array<std::size_t, 3> block_size{};
  std::size_t n_municipalities = 0;
  for (std::size_t cls = 0; cls < 3; ++cls) {
    block_start[cls] = n_municipalities;
    block_size[cls] = (per_class[cls] + cpm - 1) / cpm;
    n_municipalities += block_size[cls];
  }
  Rng layout(config.seed, "layout");
  std::array<std::size_t, 3> seen_in_class{};

  for (const auto& center : plan) {
    const auto& profile = config.classes[center.cls];
    Rng rng(config.seed, "center:" + center.id);

    std::size_t municipality = block_start[center.cls] + seen_in_class[center.cls]++ / cpm;
    if (!layout.Bernoulli(config.region.blocking)) municipality = layout.UniformInt(0, n_municipalities - 1);
    VotingCenter vc;
    vc.center_id = center.id;
    vc.municipality = Numbered("MUN", municipality + 1, 3);
    vc.state = Numbered("ST", municipality / config.region.municipalities_per_state + 1, 2);
    vc.parish = vc.municipality + Numbered("-P", layout.UniformInt(1, 4), 1);

    // Machine types: primary class plus capped secondary machines.
    const TrafficClass primary = TypeOf(center.cls);
    const TrafficClass secondary = primary == TrafficClass::kCellular ? TrafficClass::kHighWire : TrafficClass::kCellular;
    std::size_t cap = primary == TrafficClass::kCellular ? center.primary - 1 : center.primary;
    cap = std::min(cap, kMaxMachinesPerCenter - center.primary);
    const std::size_t n_secondary = std::min(rng.Binomial(center.primary, profile.secondary_rate), cap);
    std::vector<TrafficClass> types(center.primary, primary);
    types.insert(types.end(), n_secondary, secondary);
    rng.Shuffle(types);

    const double abst_center = profile.abstention.mean + profile.abstention.std * center.z_abstention;
    const double no_center_sd =
        std::sqrt(std::max(0.0, profile.no_share.std * profile.no_share.std - config.no_machine_std * config.no_machine_std));
    const double no_center = profile.no_share.mean + no_center_sd * center.z_no;

    std::array<std::size_t, 3> type_counts{};
    std::uint64_t registered_sum = 0;
    for (std::size_t j = 0; j < types.size(); ++j) {
      const TrafficClass type = types[j];
      ++type_counts[ClassIndexOf(type)];
      MachineTruth truth;
      truth.machine_id = center.id + Numbered("-M", j + 1, 2);
      truth.center_id = center.id;
      truth.traffic_class = type;
      vc.machine_ids.push_back(truth.machine_id);

      TallySheet t;
      t.machine_id = truth.machine_id;
      t.center_id = center.id;
      t.election = Election::kPRR2004;
      t.registered_voters = rng.UniformInt(profile.registered_min, profile.registered_max);
      registered_sum += t.registered_voters;
      const double abstention = Clamp(rng.Normal(abst_center, config.abstention_machine_std), 0.5, 95.0);
      t.total_votes = static_cast<std::uint64_t>(std::llround(static_cast<double>(t.registered_voters) * (1.0 - abstention / 100.0)));
      const double null_share = Clamp(rng.Normal(config.null_share_2004.mean, config.null_share_2004.std), 0.0, 10.0);
      t.null_votes = static_cast<std::uint64_t>(std::llround(static_cast<double>(t.total_votes) * null_share / 100.0));
      const std::uint64_t valid = t.total_votes - t.null_votes;
      const double no_share = Clamp(rng.Normal(no_center, config.no_machine_std), 0.0, 100.0);
      t.no_votes = static_cast<std::uint64_t>(std::llround(static_cast<double>(valid) * no_share / 100.0));
      t.yes_votes = valid - t.no_votes;
      truth.votes = t.yes_no_votes();
      const double votes = static_cast<double>(truth.votes);

      // Final-session octets from the machine's transmission regime.
      const auto& model = config.classes[ClassIndexOf(type)];
      double incoming = 0.0;
      double outgoing = 0.0;
      if (type == TrafficClass::kHighWire) {
        const bool superior = rng.Bernoulli(config.subgroups.p_superior);
        truth.subgroup = superior ? Subgroup::kG2 : Subgroup::kG1;
        incoming = DrawModel(rng, model.incoming, votes, &truth.line_offset);
        outgoing = DrawModel(rng, model.outgoing, votes);
        if (superior) {
          incoming += config.subgroups.g2_incoming_extra;
          outgoing += config.subgroups.g2_outgoing_extra;
        }
      } else if (type == TrafficClass::kLowWire) {
        truth.per_vote_pattern = rng.Bernoulli(config.low_pattern.share);
        incoming = truth.per_vote_pattern
                       ? LowPatternBytes(rng, config.seed, model.incoming.intercept, votes, config.low_pattern)
                       : DrawModel(rng, model.incoming, votes);
        outgoing = DrawModel(rng, model.outgoing, votes);
      } else {
        incoming = DrawModel(rng, model.incoming, votes);
        outgoing = DrawModel(rng, model.outgoing, votes);
      }

      const Medium medium = type == TrafficClass::kCellular ? Medium::kCellular : Medium::kWire;
      std::uint32_t call = 1;
      const Timestamp final_stop = config.poll_close + static_cast<Timestamp>(rng.UniformInt(300, 14400));
      if (rng.Bernoulli(config.retry_rate)) {
        TransmissionRecord retry;
        retry.machine_id = truth.machine_id;
        retry.center_id = center.id;
        retry.medium = medium;
        retry.session_stop = final_stop - static_cast<Timestamp>(rng.UniformInt(600, 3600));
        retry.session_start = retry.session_stop - static_cast<Timestamp>(rng.UniformInt(5, 60));
        retry.input_octets = rng.UniformInt(200, 800);
        retry.output_octets = rng.UniformInt(100, 400);
        retry.input_packets = Packets(rng, retry.input_octets);
        retry.output_packets = Packets(rng, retry.output_octets);
        retry.terminate_cause = TerminateCause::kError;
        retry.call_index = call++;
        d.records.push_back(std::move(retry));
      }
      TransmissionRecord r;
      r.machine_id = truth.machine_id;
      r.center_id = center.id;
      r.medium = medium;
      r.session_stop = final_stop;
      r.session_start = final_stop - static_cast<Timestamp>(rng.UniformInt(15, 180));
      r.output_octets = ToOctets(incoming);
      r.input_octets = ToOctets(outgoing);
      r.input_packets = Packets(rng, r.input_octets);
      r.output_packets = Packets(rng, r.output_octets);
      r.terminate_cause = rng.Bernoulli(0.15) ? TerminateCause::kServerRequest : TerminateCause::kMachineRequest;
      r.call_index = call;
      d.records.push_back(std::move(r));
      d.tallies.push_back(std::move(t));
      d.machines.push_back(std::move(truth));
    }

    // Center-level tallies of the two earlier elections.
    const auto& h = config.history;
    const std::uint64_t registered =
        static_cast<std::uint64_t>(std::llround(static_cast<double>(registered_sum) / h.electorate_growth));
    const Election elections[] = {Election::kE1998, Election::kE2000};
    for (auto e : elections) {
      const bool is_1998 = e == Election::kE1998;
      const Moments& abst_m = is_1998 ? profile.abstention_1998 : profile.abstention_2000;
      const Moments& chavez_m = is_1998 ? profile.chavez_1998 : profile.chavez_2000;
      const double rho_c = is_1998 ? h.chavez_rho_1998 : h.chavez_rho_2000;
      const double z_a = h.abstention_rho * center.z_abstention +
                         std::sqrt(1.0 - h.abstention_rho * h.abstention_rho) * rng.Normal();
      const double z_c = rho_c * center.z_no + std::sqrt(1.0 - rho_c * rho_c) * rng.Normal();
      TallySheet t;
      t.machine_id = center.id + (is_1998 ? "-E1998" : "-E2000");
      t.center_id = center.id;
      t.election = e;
      t.registered_voters = registered;
      const double abstention = Clamp(abst_m.mean + abst_m.std * z_a, 0.5, 95.0);
      t.total_votes = static_cast<std::uint64_t>(std::llround(static_cast<double>(registered) * (1.0 - abstention / 100.0)));
      const double null_share = Clamp(rng.Normal(h.null_share.mean, h.null_share.std), 0.0, 30.0);
      t.null_votes = static_cast<std::uint64_t>(std::llround(static_cast<double>(t.total_votes) * null_share / 100.0));
      const std::uint64_t valid = t.total_votes - t.null_votes;
      const double chavez = Clamp(chavez_m.mean + chavez_m.std * z_c, 0.0, 100.0);
      const auto chavez_votes = static_cast<std::uint64_t>(std::llround(static_cast<double>(valid) * chavez / 100.0));
      const double others = Clamp(rng.Normal(h.others_share.mean, h.others_share.std), 0.0, 20.0);
      const auto others_votes = std::min(valid - chavez_votes,
                                         static_cast<std::uint64_t>(std::llround(static_cast<double>(valid) * others / 100.0)));
      t.candidate_votes["chavez"] = chavez_votes;
      t.candidate_votes["others"] = others_votes;
      t.candidate_votes["opposition"] = valid - chavez_votes - others_votes;
      d.tallies.push_back(std::move(t));
    }

    CenterTruth ct;
    ct.center_id = center.id;
    ct.designed_class = primary;
    ct.center_class = Plurality(type_counts);
    d.centers.push_back(std::move(ct));
    d.registry.push_back(std::move(vc));
  }
  std::sort(d.machines.begin(), d.machines.end(),
            [](const MachineTruth& a, const MachineTruth& b) { return a.machine_id < b.machine_id; });
  return d;
}

std::string WriteRadiusDetail(std::span<const TransmissionRecord> records, const ingest::NasMap& nas) {
  auto nas_for = [&](Medium m) -> std::string {
    for (const auto& [ip, medium] : nas) {
      if (medium == m) return ip;
    }
    return "0.0.0.0";
  };
  const std::string wire_ip = nas_for(Medium::kWire);
  const std::string cell_ip = nas_for(Medium::kCellular);
  auto quoted = [](std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    out.push_back('"');
    return out;
  };

  std::string out;
  for (const auto& r : records) {
    out += text::FormatRfc3339(r.session_stop);
    out += '\n';
    auto attr = [&](std::string_view name, const std::string& value) {
      out += '\t';
      out += name;
      out += " = ";
      out += value;
      out += '\n';
    };
    attr("User-Name", quoted(r.machine_id));
    attr("Calling-Station-Id", quoted(r.center_id));
    attr("NAS-IP-Address", r.medium == Medium::kWire ? wire_ip : cell_ip);
    attr("Acct-Session-Id", quoted(r.machine_id + ":" + std::to_string(r.call_index)));
    attr("Acct-Session-Time", std::to_string(r.session_stop - r.session_start));
    attr("Acct-Input-Octets", std::to_string(r.input_octets & 0xffffffffULL));
    attr("Acct-Output-Octets", std::to_string(r.output_octets & 0xffffffffULL));
    if (r.input_octets >> 32) attr("Acct-Input-Gigawords", std::to_string(r.input_octets >> 32));
    if (r.output_octets >> 32) attr("Acct-Output-Gigawords", std::to_string(r.output_octets >> 32));
    attr("Acct-Input-Packets", std::to_string(r.input_packets));
    attr("Acct-Output-Packets", std::to_string(r.output_packets));
    attr("Acct-Terminate-Cause", std::string(ingest::RadiusTerminateCauseName(r.terminate_cause)));
    out += '\n';
  }
  return out;
}

std::string WriteTallyCsv(std::span<const TallySheet> tallies) {
  std::set<std::string> options;
  for (const auto& t : tallies) {
    for (const auto& [name, _] : t.candidate_votes) options.insert(name);
  }
  std::vector<std::string> header(std::begin(ingest::kTallyColumns), std::end(ingest::kTallyColumns));
  header.insert(header.end(), options.begin(), options.end());
  std::string out = text::CsvLine(header);
  for (const auto& t : tallies) {
    std::vector<std::string> row = {t.machine_id,
                                    t.center_id,
                                    std::to_string(t.registered_voters),
                                    std::to_string(t.yes_votes),
                                    std::to_string(t.no_votes),
                                    std::to_string(t.null_votes),
                                    std::to_string(t.total_votes),
                                    std::string(ToString(t.election))};
    for (const auto& name : options) {
      auto it = t.candidate_votes.find(name);
      row.push_back(it == t.candidate_votes.end() ? "" : std::to_string(it->second));
    }
    out += text::CsvLine(row);
  }
  return out;
}

std::string WriteRegistryCsv(std::span<const VotingCenter> centers) {
  std::string out = text::CsvLine({"center_id", "parish", "municipality", "state", "machine_ids"});
  for (const auto& c : centers) {
    std::string ids;
    for (const auto& m : c.machine_ids) {
      if (!ids.empty()) ids += ';';
      ids += m;
    }
    out += text::CsvLine({c.center_id, c.parish, c.municipality, c.state, ids});
  }
  return out;
}

std::string WriteNasMap(const ingest::NasMap& nas) {
  std::string out = text::CsvLine({"nas_ip", "medium"});
  for (const auto& [ip, medium] : nas) out += text::CsvLine({ip, std::string(ToString(medium))});
  return out;
}

CalibrationReport CalibrationRun(const CalibrationConfig& config, std::uint64_t file_size, std::size_t repetitions) {
  if (repetitions == 0) Invalid("repetitions", "must be >= 1");
  if (config.machines == 0) Invalid("machines", "must be >= 1");
  CheckSigma(config.sigma, "sigma");
  CalibrationReport report;
  report.file_size = file_size;
  report.repetitions = repetitions;

  double pooled_ss = 0.0;
  for (std::size_t m = 0; m < config.machines; ++m) {
    CalibrationRow row;
    row.machine_id = Numbered("CAL-", m + 1, 3);
    Rng rng(config.seed, "calibration:" + row.machine_id);
    double extra = 0.0;
    if (auto it = config.injected_overhead.find(row.machine_id); it != config.injected_overhead.end()) {
      extra = it->second;
    }
    double sum = 0.0;
    for (std::size_t r = 0; r < repetitions; ++r) {
      const double v = static_cast<double>(file_size) + config.base_overhead + extra + rng.Normal(0.0, config.sigma);
      row.octets.push_back(v <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(v)));
      sum += static_cast<double>(row.octets.back());
    }
    const double mean = sum / static_cast<double>(repetitions);
    for (auto o : row.octets) pooled_ss += (static_cast<double>(o) - mean) * (static_cast<double>(o) - mean);
    row.overhead = mean - static_cast<double>(file_size);
    report.rows.push_back(std::move(row));
  }

  std::vector<double> overheads;
  for (const auto& r : report.rows) overheads.push_back(r.overhead);
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  report.fleet_median = median(overheads);
  if (repetitions > 1) {
    report.sigma = std::sqrt(pooled_ss / static_cast<double>(config.machines * (repetitions - 1)));
  } else {
    std::vector<double> dev;
    for (double o : overheads) dev.push_back(std::fabs(o - report.fleet_median));
    report.sigma = 1.4826 * median(dev);
  }
  for (auto& r : report.rows) r.flagged = std::fabs(r.overhead - report.fleet_median) > 3.0 * report.sigma;
  return report;
}

PatternGroup GeneratePatternGroup(std::uint64_t seed, std::size_t n, double fraction, const LowPatternModel& model,
                                  Moments flat, std::uint64_t votes_min, std::uint64_t votes_max) {
  CheckProbability(fraction, "fraction");
  Rng rng(seed, "pattern-group");
  const auto n_pattern = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction));
  std::vector<bool> truth(n, false);
  std::fill(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(n_pattern), true);
  rng.Shuffle(truth);
  PatternGroup g;
  g.truth = truth;
  for (std::size_t i = 0; i < n; ++i) {
    classify::PatternPoint p;
    p.machine_id = Numbered("PG-", i + 1, 5);
    p.votes = static_cast<double>(rng.UniformInt(votes_min, votes_max));
    p.bytes = truth[i] ? LowPatternBytes(rng, seed, flat.mean, p.votes, model) : rng.Normal(flat.mean, flat.std);
    g.points.push_back(std::move(p));
  }
  return g;
}

}  // namespace votewire::simulate
