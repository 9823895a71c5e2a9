#include <set>

#include "json.hpp"
#include "votewire/simulate.hpp"
#include "votewire/text.hpp"

namespace votewire::simulate {

namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::kInvalidConfig, field + ": " + reason);
}

// Reads the known keys of one JSON object and rejects the rest.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) Invalid(path_, "expected an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) Invalid(Path(key), "unknown field");
    }
  }

  template <typename T>
  void Get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      Invalid(Path(key), e.what());
    }
  }

  const json* Child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string Path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void Read(const json& j, const std::string& path, Moments& m);
void Read(const json& j, const std::string& path, TransmissionModel& m);
void Read(const json& j, const std::string& path, ClassProfile& p);
void Read(const json& j, const std::string& path, SubgroupModel& s);
void Read(const json& j, const std::string& path, LowPatternModel& m);
void Read(const json& j, const std::string& path, HistoryModel& h);
void Read(const json& j, const std::string& path, RegionLayout& l);

void Read(const json& j, const std::string& path, Moments& m) {
  Reader r(j, path);
  r.Get("mean", m.mean);
  r.Get("std", m.std);
}

json Write(const Moments& m) { return {{"mean", m.mean}, {"std", m.std}}; }

void Read(const json& j, const std::string& path, TransmissionModel& m) {
  Reader r(j, path);
  if (const json* kind = r.Child("kind")) {
    if (*kind == "per_vote") {
      m.kind = ModelKind::kPerVote;
    } else if (*kind == "fixed_tally") {
      m.kind = ModelKind::kFixedTally;
    } else {
      Invalid(r.Path("kind"), "expected per_vote or fixed_tally");
    }
  }
  r.Get("slope", m.slope);
  r.Get("intercept", m.intercept);
  r.Get("sigma", m.sigma);
  r.Get("line_offsets", m.line_offsets);
  r.Get("offset_probs", m.offset_probs);
}

json Write(const TransmissionModel& m) {
  return {{"kind", std::string(ToString(m.kind))}, {"slope", m.slope},       {"intercept", m.intercept},
          {"sigma", m.sigma},                      {"line_offsets", m.line_offsets}, {"offset_probs", m.offset_probs}};
}

template <typename T>
void ReadChild(Reader& r, const char* key, T& out) {
  if (const json* c = r.Child(key)) Read(*c, r.Path(key), out);
}

void Read(const json& j, const std::string& path, ClassProfile& p) {
  Reader r(j, path);
  r.Get("machines_profile", p.machines_profile);
  r.Get("secondary_rate", p.secondary_rate);
  r.Get("registered_min", p.registered_min);
  r.Get("registered_max", p.registered_max);
  ReadChild(r, "abstention", p.abstention);
  ReadChild(r, "no_share", p.no_share);
  ReadChild(r, "incoming", p.incoming);
  ReadChild(r, "outgoing", p.outgoing);
  ReadChild(r, "abstention_1998", p.abstention_1998);
  ReadChild(r, "abstention_2000", p.abstention_2000);
  ReadChild(r, "chavez_1998", p.chavez_1998);
  ReadChild(r, "chavez_2000", p.chavez_2000);
}

json Write(const ClassProfile& p) {
  return {{"machines_profile", p.machines_profile},
          {"secondary_rate", p.secondary_rate},
          {"registered_min", p.registered_min},
          {"registered_max", p.registered_max},
          {"abstention", Write(p.abstention)},
          {"no_share", Write(p.no_share)},
          {"incoming", Write(p.incoming)},
          {"outgoing", Write(p.outgoing)},
          {"abstention_1998", Write(p.abstention_1998)},
          {"abstention_2000", Write(p.abstention_2000)},
          {"chavez_1998", Write(p.chavez_1998)},
          {"chavez_2000", Write(p.chavez_2000)}};
}

void Read(const json& j, const std::string& path, SubgroupModel& s) {
  Reader r(j, path);
  r.Get("p_superior", s.p_superior);
  r.Get("g2_incoming_extra", s.g2_incoming_extra);
  r.Get("g2_outgoing_extra", s.g2_outgoing_extra);
}

void Read(const json& j, const std::string& path, LowPatternModel& m) {
  Reader r(j, path);
  r.Get("share", m.share);
  r.Get("cell_width", m.cell_width);
  r.Get("lift_min", m.lift_min);
  r.Get("lift_max", m.lift_max);
  r.Get("slope_min", m.slope_min);
  r.Get("slope_max", m.slope_max);
  r.Get("sigma", m.sigma);
}

void Read(const json& j, const std::string& path, HistoryModel& h) {
  Reader r(j, path);
  r.Get("electorate_growth", h.electorate_growth);
  r.Get("abstention_rho", h.abstention_rho);
  r.Get("chavez_rho_1998", h.chavez_rho_1998);
  r.Get("chavez_rho_2000", h.chavez_rho_2000);
  ReadChild(r, "null_share", h.null_share);
  ReadChild(r, "others_share", h.others_share);
}

void Read(const json& j, const std::string& path, RegionLayout& l) {
  Reader r(j, path);
  r.Get("centers_per_municipality", l.centers_per_municipality);
  r.Get("municipalities_per_state", l.municipalities_per_state);
  r.Get("blocking", l.blocking);
}

}  // namespace

ScenarioConfig ConfigFromJson(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Invalid("config", e.what());
  }
  ScenarioConfig c = DefaultPack2004();
  {
    Reader r(j, "");
    r.Get("seed", c.seed);
    r.Get("scale", c.scale);
    if (const json* pc = r.Child("poll_close")) {
      std::optional<Timestamp> t;
      if (pc->is_string()) t = text::ParseTimestamp(pc->get<std::string>());
      if (pc->is_number_integer()) t = pc->get<Timestamp>();
      if (!t) Invalid("poll_close", "expected RFC 3339 text or epoch seconds");
      c.poll_close = *t;
    }
    if (const json* n = r.Child("n_centers")) {
      Reader nr(*n, "n_centers");
      nr.Get("A", c.n_centers[0]);
      nr.Get("B", c.n_centers[1]);
      nr.Get("C", c.n_centers[2]);
    }
    if (const json* cl = r.Child("classes")) {
      Reader cr(*cl, "classes");
      ReadChild(cr, "A", c.classes[0]);
      ReadChild(cr, "B", c.classes[1]);
      ReadChild(cr, "C", c.classes[2]);
    }
    ReadChild(r, "subgroups", c.subgroups);
    ReadChild(r, "low_pattern", c.low_pattern);
    r.Get("no_machine_std", c.no_machine_std);
    r.Get("abstention_machine_std", c.abstention_machine_std);
    ReadChild(r, "null_share_2004", c.null_share_2004);
    ReadChild(r, "history", c.history);
    ReadChild(r, "region", c.region);
    r.Get("retry_rate", c.retry_rate);
  }
  ValidateConfig(c);
  return c;
}

std::string ConfigToJson(const ScenarioConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["scale"] = c.scale;
  j["poll_close"] = text::FormatRfc3339(c.poll_close);
  j["n_centers"] = {{"A", c.n_centers[0]}, {"B", c.n_centers[1]}, {"C", c.n_centers[2]}};
  j["classes"] = {{"A", Write(c.classes[0])}, {"B", Write(c.classes[1])}, {"C", Write(c.classes[2])}};
  j["subgroups"] = {{"p_superior", c.subgroups.p_superior},
                    {"g2_incoming_extra", c.subgroups.g2_incoming_extra},
                    {"g2_outgoing_extra", c.subgroups.g2_outgoing_extra}};
  const auto& lp = c.low_pattern;
  j["low_pattern"] = {{"share", lp.share},         {"cell_width", lp.cell_width}, {"lift_min", lp.lift_min},
                      {"lift_max", lp.lift_max},   {"slope_min", lp.slope_min},   {"slope_max", lp.slope_max},
                      {"sigma", lp.sigma}};
  j["no_machine_std"] = c.no_machine_std;
  j["abstention_machine_std"] = c.abstention_machine_std;
  j["null_share_2004"] = Write(c.null_share_2004);
  const auto& h = c.history;
  j["history"] = {{"electorate_growth", h.electorate_growth}, {"abstention_rho", h.abstention_rho},
                  {"chavez_rho_1998", h.chavez_rho_1998},     {"chavez_rho_2000", h.chavez_rho_2000},
                  {"null_share", Write(h.null_share)},        {"others_share", Write(h.others_share)}};
  j["region"] = {{"centers_per_municipality", c.region.centers_per_municipality},
                 {"municipalities_per_state", c.region.municipalities_per_state},
                 {"blocking", c.region.blocking}};
  j["retry_rate"] = c.retry_rate;
  return j.dump(2) + "\n";
}

}  // namespace votewire::simulate
