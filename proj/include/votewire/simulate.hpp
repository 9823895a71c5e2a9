#pragma once

// Synthetic country generator with ground truth, writers for the evidence
// file formats, and the known-file-size calibration experiment.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "votewire/classify.hpp"
#include "votewire/core.hpp"
#include "votewire/ingest.hpp"

namespace votewire::simulate {

// 64-bit FNV-1a.
std::uint64_t Fnv1a(std::string_view s);

// SplitMix64 (Steele, Lea, Flood): the state is a counter advanced by
// 0x9E3779B97F4A7C15 and each output is the finalizer
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z ^ (z >> 31).
// A keyed stream starts from seed ^ Fnv1a(key) pushed through the finalizer,
// so every (seed, key) pair gives its own sequence independent of call order
// elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  Rng(std::uint64_t seed, std::string_view key);

  std::uint64_t NextU64();
  // 53-bit uniform in [0, 1).
  double Uniform();
  // Uniform in (0, 1).
  double UniformOpen();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Inclusive range, rejection sampled.
  std::uint64_t UniformInt(std::uint64_t lo, std::uint64_t hi);
  // Box-Muller; the second variate of each pair is kept for the next call.
  double Normal();
  double Normal(double mean, double sd) { return mean + sd * Normal(); }
  bool Bernoulli(double p) { return Uniform() < p; }
  std::size_t Binomial(std::size_t n, double p);
  // Index drawn proportionally to non-negative weights.
  std::size_t Categorical(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[UniformInt(0, i - 1)]);
  }

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

enum class ModelKind { kPerVote, kFixedTally };

std::string_view ToString(ModelKind k);

// PerVote: octets = intercept + slope * votes + line offset + N(0, sigma).
// FixedTally: octets = intercept + N(0, sigma), slope ignored.
struct TransmissionModel {
  ModelKind kind = ModelKind::kPerVote;
  double slope = 0.0;
  double intercept = 0.0;
  double sigma = 0.0;
  std::vector<double> line_offsets{0.0};
  std::vector<double> offset_probs{1.0};
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// Low Traffic machines that still carry a per-vote pattern: votes are cut
// into cells of cell_width, and every cell k has one shared line
//   bytes = base + lift_k + slope_k * (votes - k * cell_width)
// with lift_k and slope_k drawn once per scenario.
struct LowPatternModel {
  double share = 0.275;
  double cell_width = 30.0;
  double lift_min = 700.0;
  double lift_max = 1300.0;
  double slope_min = 41.0;
  double slope_max = 46.0;
  double sigma = 100.0;
};

// One center class. The transmission models apply to every machine of the
// matching traffic type (A = HighWire, B = LowWire, C = Cellular), whatever
// its center. Low Traffic machines off the per-vote pattern use the B
// incoming model as their flat cloud.
struct ClassProfile {
  // Weights of 1..18 primary machines per center.
  std::vector<double> machines_profile;
  // Secondary machines per center ~ Binomial(primary, rate), capped so the
  // primary type keeps the plurality. Secondary type: A and B centers get
  // Cellular machines, C centers HighWire ones.
  double secondary_rate = 0.0;
  std::uint64_t registered_min = 450;
  std::uint64_t registered_max = 800;
  Moments abstention;  // per center, 2004
  Moments no_share;    // per machine, NO% of yes + no
  TransmissionModel incoming;  // output_octets
  TransmissionModel outgoing;  // input_octets
  Moments abstention_1998;
  Moments abstention_2000;
  Moments chavez_1998;  // % of valid votes
  Moments chavez_2000;
};

struct SubgroupModel {
  double p_superior = 0.33;
  double g2_incoming_extra = 10000.0;
  double g2_outgoing_extra = 500.0;
};

struct HistoryModel {
  // Registered voters in 2004 over 2000 (and 1998).
  double electorate_growth = 1.326;
  double abstention_rho = 0.6;  // center abstention vs 2004
  double chavez_rho_1998 = 0.6;  // center Chavez% vs 2004 NO%
  double chavez_rho_2000 = 0.85;
  Moments null_share{5.0, 2.0};    // % of ballots
  Moments others_share{3.0, 1.0};  // % of valid votes
};

struct RegionLayout {
  std::size_t centers_per_municipality = 20;
  std::size_t municipalities_per_state = 8;
  // Probability that a center sits in a municipality of its own class block.
  double blocking = 0.9;
};

struct ScenarioConfig {
  std::uint64_t seed = 20040815;
  double scale = 1.0;  // multiplies n_centers
  Timestamp poll_close = 1092614400;  // 2004-08-16T00:00:00Z
  std::array<std::size_t, 3> n_centers{1876, 1573, 972};  // A, B, C
  std::array<ClassProfile, 3> classes;
  SubgroupModel subgroups;
  LowPatternModel low_pattern;
  double no_machine_std = 4.0;
  double abstention_machine_std = 1.5;
  Moments null_share_2004{0.4, 0.2};
  HistoryModel history;
  RegionLayout region;
  // Share of machines with a failed session before the final one.
  double retry_rate = 0.05;
};

// The default parameter pack ("default-2004").
ScenarioConfig DefaultPack2004();

// Throws InvalidConfig naming the field.
void ValidateConfig(const ScenarioConfig& config);

// JSON object with the ScenarioConfig field names; absent fields keep the
// default-2004 values, unknown fields are rejected.
ScenarioConfig ConfigFromJson(std::string_view json_text);
std::string ConfigToJson(const ScenarioConfig& config);

struct MachineTruth {
  std::string machine_id;
  std::string center_id;
  TrafficClass traffic_class = TrafficClass::kHighWire;
  std::optional<Subgroup> subgroup;  // HighWire only
  bool per_vote_pattern = false;     // LowWire only
  double line_offset = 0.0;          // HighWire retransmission line
  std::uint64_t votes = 0;
};

struct CenterTruth {
  std::string center_id;
  TrafficClass designed_class = TrafficClass::kHighWire;
  // Plurality of the true machine labels.
  TrafficClass center_class = TrafficClass::kHighWire;
};

struct SyntheticDataset {
  std::vector<TransmissionRecord> records;
  std::vector<TallySheet> tallies;  // PRR2004 per machine, then E1998/E2000 per center
  std::vector<VotingCenter> registry;
  ingest::NasMap nas;
  std::vector<MachineTruth> machines;  // sorted by machine id
  std::vector<CenterTruth> centers;    // sorted by center id
  Timestamp poll_close = 0;
};

// Deterministic for a fixed config: each center draws from its own
// (seed, center_id) stream, class-level latent effects from (seed, class).
SyntheticDataset GenerateScenario(const ScenarioConfig& config);

// 10.1.0.1 -> Wire, 10.2.0.1 -> Cellular.
ingest::NasMap DefaultNasMap();

// Detail log accepted by ingest::ParseRadiusDetail. Each record uses the
// lowest NAS address mapped to its medium; records whose medium has no NAS
// entry are written with "0.0.0.0".
std::string WriteRadiusDetail(std::span<const TransmissionRecord> records, const ingest::NasMap& nas = DefaultNasMap());
// Header plus one row per tally; candidate columns are the sorted union of
// option names.
std::string WriteTallyCsv(std::span<const TallySheet> tallies);
std::string WriteRegistryCsv(std::span<const VotingCenter> centers);
std::string WriteNasMap(const ingest::NasMap& nas);

struct CalibrationConfig {
  std::uint64_t seed = 20040815;
  std::size_t machines = 50;
  double base_overhead = 2500.0;  // protocol bytes on top of the file
  double sigma = 100.0;
  std::map<std::string, double> injected_overhead;  // machine id -> extra bytes
};

struct CalibrationRow {
  std::string machine_id;
  std::vector<std::uint64_t> octets;  // one per repetition
  double overhead = 0.0;              // mean(octets) - file_size
  bool flagged = false;
};

struct CalibrationReport {
  std::uint64_t file_size = 0;
  std::size_t repetitions = 0;
  double fleet_median = 0.0;
  // Pooled within-machine standard deviation of the repetitions (with a
  // single repetition: 1.4826 * MAD of the overheads).
  double sigma = 0.0;
  std::vector<CalibrationRow> rows;
};

// Every machine "sends" a file of file_size bytes `repetitions` times.
// Machines whose overhead is more than 3 sigma from the fleet median are
// flagged. Machine ids are CAL-001, CAL-002, ...
CalibrationReport CalibrationRun(const CalibrationConfig& config, std::uint64_t file_size,
                                 std::size_t repetitions);

struct PatternGroup {
  std::vector<classify::PatternPoint> points;
  std::vector<bool> truth;  // per-vote patterned
};

// n Low Traffic incoming-byte points, exactly round(n * fraction) of them
// on the cell lines of `model`, the rest in the flat cloud. Votes uniform in
// [votes_min, votes_max].
PatternGroup GeneratePatternGroup(std::uint64_t seed, std::size_t n, double fraction,
                                  const LowPatternModel& model = {}, Moments flat = {3000.0, 150.0},
                                  std::uint64_t votes_min = 300, std::uint64_t votes_max = 560);

}  // namespace votewire::simulate
