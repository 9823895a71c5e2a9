#include "votewire/commands.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "votewire/ingest.hpp"
#include "votewire/simulate.hpp"
#include "votewire/text.hpp"

namespace votewire::commands {

namespace {

using ordered = nlohmann::ordered_json;

std::string Num(double v) { return text::FormatDouble(v); }

// JSON number, or null for NaN/infinity which JSON cannot carry.
ordered JsonNumber(double v) { return std::isfinite(v) ? ordered(v) : ordered(nullptr); }

ordered TestJson(const TestResult& r) {
  ordered j;
  j["test"] = r.test_name;
  j["statistic"] = std::isinf(r.statistic) ? ordered("inf") : JsonNumber(r.statistic);
  j["df"] = r.df.second ? ordered::array({r.df.first, *r.df.second}) : ordered(r.df.first);
  j["p"] = JsonNumber(r.p_value);
  j["degenerate"] = r.degenerate;
  return j;
}

ordered FitJson(const regression::RegressionFit& f) {
  ordered j;
  j["slope"] = JsonNumber(f.slope);
  j["intercept"] = JsonNumber(f.intercept);
  j["slope_se"] = JsonNumber(f.slope_se);
  j["intercept_se"] = JsonNumber(f.intercept_se);
  j["r_squared"] = JsonNumber(f.r_squared);
  j["n"] = f.n;
  j["residual_std"] = JsonNumber(f.residual_std);
  j["slope_percent_error"] = JsonNumber(f.slope_percent_error());
  return j;
}

std::string ClassLabel(TrafficClass c) { return std::string(ToString(c)); }

const char* const kSummaryHeader[] = {"Level", "Number", "Mean", "Std dev", "25%-Q", "Median", "75%-Q"};

std::vector<std::string> SummaryRow(const std::string& level, const DistributionSummary& s) {
  return {level,          std::to_string(s.n), Num(s.mean), s.std_defined ? Num(s.std_dev) : "",
          Num(s.q25), Num(s.median), Num(s.q75)};
}

std::string Params(const ordered& j) { return j.dump(); }

}  // namespace

dataset::Dataset LoadDataset(const fs::path& dir) {
  const auto path = dir / "dataset.jsonl";
  if (!fs::exists(path)) throw Error(ErrorCode::kIo, "no dataset.jsonl in " + dir.string());
  return dataset::FromJsonl(dataset::ReadFile(path));
}

Analysis Analyze(dataset::Dataset data) {
  Analysis a;
  a.data = std::move(data);
  a.machines = classify::ClassifyMachines(a.data.records);
  try {
    a.split = classify::AssignSubgroups(a.machines);
  } catch (const Error& e) {
    a.split_error = e.what();
  }
  a.centers = classify::ClassifyCenters(a.machines);
  return a;
}

std::map<std::string, TallySheet> CenterTallies(const std::vector<TallySheet>& tallies, Election election) {
  std::map<std::string, TallySheet> out;
  for (const auto& t : tallies) {
    if (t.election != election) continue;
    auto [it, fresh] = out.try_emplace(t.center_id);
    auto& c = it->second;
    if (fresh) {
      c.machine_id = t.center_id;
      c.center_id = t.center_id;
      c.election = election;
    }
    c.registered_voters += t.registered_voters;
    c.yes_votes += t.yes_votes;
    c.no_votes += t.no_votes;
    c.null_votes += t.null_votes;
    c.total_votes += t.total_votes;
    for (const auto& [name, v] : t.candidate_votes) c.candidate_votes[name] += v;
  }
  return out;
}

IngestSummary CmdIngest(const IngestOptions& o) {
  const auto nas = ingest::ParseNasMap(dataset::ReadFile(o.nas));
  const auto mode = o.strict ? ingest::ParseMode::kStrict : ingest::ParseMode::kLenient;
  auto detail = ingest::ParseRadiusDetail(dataset::ReadFile(o.detail), nas, mode);
  auto tallies = ingest::ParseTallyCsv(dataset::ReadFile(o.tallies));

  dataset::Dataset d;
  d.poll_close = o.poll_close;
  d.records = std::move(detail.records);
  d.tallies = std::move(tallies.tallies);
  if (o.registry) d.registry = ingest::ParseRegistryCsv(dataset::ReadFile(*o.registry));

  const auto check = ingest::CrossCheck(d.records, d.tallies, d.poll_close);
  ordered cc;
  cc["matched"] = check.matched;
  cc["log_only"] = check.log_only;
  cc["tally_only"] = check.tally_only;
  cc["time_anomalies"] = ordered::array();
  for (const auto& t : check.time_anomalies) {
    cc["time_anomalies"].push_back({{"machine_id", t.machine_id},
                                    {"session_start", text::FormatRfc3339(t.session_start)},
                                    {"poll_close", text::FormatRfc3339(t.poll_close)}});
  }
  cc["counter_anomalies"] = ordered::array();
  for (const auto& c : check.counter_anomalies) {
    cc["counter_anomalies"].push_back({{"machine_id", c.machine_id}, {"reason", c.reason}});
  }

  ordered diag;
  diag["mode"] = o.strict ? "strict" : "lenient";
  diag["sessions"] = d.records.size();
  diag["skipped_blocks"] = detail.skipped.size();
  diag["skipped"] = ordered::array();
  for (const auto& s : detail.skipped) diag["skipped"].push_back({{"line", s.line}, {"reason", s.reason}});
  diag["duplicates"] = ordered::array();
  for (const auto& s : detail.duplicates) diag["duplicates"].push_back({{"line", s.line}, {"reason", s.reason}});
  diag["tallies"] = d.tallies.size();
  diag["tally_anomalies"] = ordered::array();
  for (const auto& t : tallies.anomalies) {
    diag["tally_anomalies"].push_back({{"row", t.row}, {"machine_id", t.machine_id}, {"reason", t.reason}});
  }
  diag["centers"] = d.registry.size();

  IngestSummary summary{d.records.size(), detail.skipped.size(), detail.duplicates.size(), d.tallies.size(),
                        tallies.anomalies.size()};

  dataset::ArtifactWriter w(o.out);
  w.Write("dataset.jsonl", dataset::ToJsonl(d));
  w.Write("crosscheck.json", cc.dump(2) + "\n");
  w.Write("diagnostics.json", diag.dump(2) + "\n");
  ordered params;
  params["detail_sha256"] = dataset::Sha256Hex(dataset::ReadFile(o.detail));
  params["tallies_sha256"] = dataset::Sha256Hex(dataset::ReadFile(o.tallies));
  params["nas_sha256"] = dataset::Sha256Hex(dataset::ReadFile(o.nas));
  params["registry_sha256"] = o.registry ? ordered(dataset::Sha256Hex(dataset::ReadFile(*o.registry))) : ordered(nullptr);
  params["poll_close"] = text::FormatRfc3339(o.poll_close);
  params["strict"] = o.strict;
  w.Finish("ingest", Params(params));
  return summary;
}

void CmdClassify(const ClassifyOptions& o) {
  const Analysis a = Analyze(LoadDataset(o.in));
  dataset::ArtifactWriter w(o.out);

  std::string csv = text::CsvLine({"machine_id", "center_id", "medium", "class", "subgroup", "total_octets",
                                   "input_octets", "output_octets", "reason"});
  for (const auto& m : a.machines) {
    csv += text::CsvLine({m.machine_id, m.center_id, std::string(ToString(m.final_session.medium)),
                          ClassLabel(m.traffic_class), m.subgroup ? std::string(ToString(*m.subgroup)) : "",
                          std::to_string(m.total_octets), std::to_string(m.final_session.input_octets),
                          std::to_string(m.final_session.output_octets),
                          std::string(classify::ToString(m.reason))});
  }
  w.Write("classification.csv", csv);

  csv = text::CsvLine({"center_id", "class", "machines", "A", "B", "C", "U", "mixed_ab", "all_unclassified"});
  for (const auto& c : a.centers) {
    std::size_t n = 0;
    for (auto k : c.composition) n += k;
    csv += text::CsvLine({c.center_id, ClassLabel(c.center_class), std::to_string(n),
                          std::to_string(c.composition[0]), std::to_string(c.composition[1]),
                          std::to_string(c.composition[2]), std::to_string(c.composition[3]),
                          c.flags.mixed_ab ? "1" : "0", c.flags.all_unclassified ? "1" : "0"});
  }
  w.Write("centers.csv", csv);

  // Class composition: centers, machines housed per center class, machines per
  // own class, votes per center class.
  std::map<std::string, TrafficClass> center_class;
  for (const auto& c : a.centers) center_class[c.center_id] = c.center_class;
  classify::ClassCounts centers{}, housed{}, own{};
  std::array<std::uint64_t, 4> votes{};
  for (const auto& c : a.centers) ++centers[classify::ClassIndex(c.center_class)];
  for (const auto& m : a.machines) {
    ++own[classify::ClassIndex(m.traffic_class)];
    ++housed[classify::ClassIndex(center_class[m.center_id])];
  }
  std::set<std::string> classified_machines;
  for (const auto& m : a.machines) classified_machines.insert(m.machine_id);
  for (const auto& t : a.data.tallies) {
    if (t.election != Election::kPRR2004 || !classified_machines.count(t.machine_id)) continue;
    auto it = center_class.find(t.center_id);
    if (it != center_class.end()) votes[classify::ClassIndex(it->second)] += t.yes_no_votes();
  }
  auto row = [](const std::string& name, const auto& counts) {
    std::vector<std::string> r{name};
    std::uint64_t total = 0;
    for (auto v : counts) {
      r.push_back(std::to_string(v));
      total += v;
    }
    r.push_back(std::to_string(total));
    return r;
  };
  csv = text::CsvLine({"row", "A", "B", "C", "U", "Total"});
  csv += text::CsvLine(row("voting_centers", centers));
  csv += text::CsvLine(row("machines_in_centers", housed));
  csv += text::CsvLine(row("machines_in_class", own));
  csv += text::CsvLine(row("votes", votes));
  std::uint64_t total_votes = 0;
  for (auto v : votes) total_votes += v;
  std::vector<std::string> pct{"vote_percent"};
  for (auto v : votes) {
    pct.push_back(total_votes ? text::FormatFixed(100.0 * static_cast<double>(v) / static_cast<double>(total_votes), 2)
                              : "");
  }
  pct.push_back(total_votes ? "100.00" : "");
  csv += text::CsvLine(pct);
  w.Write("class_composition.csv", csv);

  // G1/G2 split and the mixed-center test.
  ordered sub;
  ordered prop;
  if (a.split) {
    sub["mean_g1"] = a.split->mean_g1;
    sub["mean_g2"] = a.split->mean_g2;
    sub["count_g1"] = a.split->count_g1;
    sub["count_g2"] = a.split->count_g2;
    sub["iterations"] = a.split->iterations;
    const auto counts = classify::HighCenterSubgroups(a.machines, a.centers);
    prop["centers"] = counts.size();
    if (!counts.empty()) {
      const auto outcome = classify::MixedCenterProportionsTest(counts, o.p_superior);
      prop["p_superior"] = o.p_superior;
      prop["observed"] = {{"mixed", outcome.observed[0]}, {"all_g1", outcome.observed[1]}, {"all_g2", outcome.observed[2]}};
      prop["expected"] = {{"mixed", outcome.expected[0]}, {"all_g1", outcome.expected[1]}, {"all_g2", outcome.expected[2]}};
      prop["test"] = TestJson(outcome.test);
    } else {
      prop["error"] = "no High Traffic centers with labelled machines";
    }
  } else {
    sub["error"] = a.split_error;
    prop["error"] = a.split_error;
  }
  w.Write("subgroups.json", sub.dump(2) + "\n");
  w.Write("proportions.json", prop.dump(2) + "\n");

  // Per-vote pattern among Low Traffic machines (votes vs incoming bytes).
  std::map<std::string, const TallySheet*> prr;
  for (const auto& t : a.data.tallies) {
    if (t.election == Election::kPRR2004) prr[t.machine_id] = &t;
  }
  std::vector<classify::PatternPoint> points;
  for (const auto& m : a.machines) {
    if (m.traffic_class != TrafficClass::kLowWire) continue;
    auto it = prr.find(m.machine_id);
    if (it == prr.end()) continue;
    points.push_back({m.machine_id, static_cast<double>(it->second->yes_no_votes()),
                      static_cast<double>(m.final_session.output_octets)});
  }
  ordered pat;
  pat["machines"] = points.size();
  csv = text::CsvLine({"machine_id", "votes", "bytes", "patterned"});
  try {
    const auto r = classify::PerVotePatternShare(points);
    pat["flagged"] = r.flagged;
    pat["fraction"] = r.fraction;
    for (std::size_t i = 0; i < points.size(); ++i) {
      csv += text::CsvLine({points[i].machine_id, Num(points[i].votes), Num(points[i].bytes), r.flags[i] ? "1" : "0"});
    }
  } catch (const Error& e) {
    pat["error"] = e.what();
  }
  w.Write("pattern.csv", csv);
  w.Write("pattern.json", pat.dump(2) + "\n");

  if (!a.data.registry.empty()) {
    const auto rows = classify::RegionalComposition(a.centers, a.data.registry);
    csv = text::CsvLine({"state", "municipality", "A", "B", "C", "U", "total", "plurality", "mixing_index"});
    for (const auto& r : rows) {
      csv += text::CsvLine({r.state, r.municipality, std::to_string(r.centers[0]), std::to_string(r.centers[1]),
                            std::to_string(r.centers[2]), std::to_string(r.centers[3]), std::to_string(r.total),
                            ClassLabel(r.plurality), text::FormatFixed(r.mixing_index, 4)});
    }
    w.Write("regional.csv", csv);
  }

  ordered params;
  params["dataset_sha256"] = dataset::Sha256Hex(dataset::ReadFile(o.in / "dataset.jsonl"));
  params["p_superior"] = o.p_superior;
  w.Finish("classify", Params(params));
}

void CmdRegress(const RegressOptions& o) {
  const Analysis a = Analyze(LoadDataset(o.in));
  std::vector<regression::Selector> selectors;
  for (const auto& g : o.groups) {
    auto s = regression::ParseSelector(g);
    if (!s) throw Error(ErrorCode::kUnknownOption, "unknown group selector '" + g + "'");
    selectors.push_back(*s);
  }
  dataset::ArtifactWriter w(o.out);
  for (const auto& sel : selectors) {
    for (auto dir : o.directions) {
      const auto g = regression::GroupRegression(a.machines, a.data.tallies, dir, sel);
      const std::string stem = regression::ToString(sel) + "_" + std::string(regression::ToString(dir));
      ordered j;
      j["group"] = regression::ToString(sel);
      j["direction"] = std::string(regression::ToString(dir));
      j["fit"] = FitJson(g.fit);
      w.Write("fit_" + stem + ".json", j.dump(2) + "\n");
      std::string csv = text::CsvLine({"votes", "bytes", "machine_id"});
      for (const auto& p : g.scatter) csv += text::CsvLine({std::to_string(p.votes), std::to_string(p.bytes), p.machine_id});
      w.Write("scatter_" + stem + ".csv", csv);
    }
  }
  ordered params;
  params["dataset_sha256"] = dataset::Sha256Hex(dataset::ReadFile(o.in / "dataset.jsonl"));
  params["groups"] = o.groups;
  params["directions"] = ordered::array();
  for (auto d : o.directions) params["directions"].push_back(std::string(regression::ToString(d)));
  w.Finish("regress", Params(params));
}

std::optional<Metric> ParseMetric(std::string_view s) {
  if (s == "no_machine") return Metric::kNoMachine;
  if (s == "abstention_center") return Metric::kAbstentionCenter;
  if (s == "chavez_center") return Metric::kChavezCenter;
  return std::nullopt;
}

std::string_view ToString(Metric m) {
  switch (m) {
    case Metric::kNoMachine: return "no_machine";
    case Metric::kAbstentionCenter: return "abstention_center";
    case Metric::kChavezCenter: return "chavez_center";
  }
  return "";
}

std::optional<GroupSpec> ParseGroupSpec(std::string_view s) {
  GroupSpec g;
  const auto at = s.find('@');
  const auto cls = ParseTrafficClass(s.substr(0, at));
  if (!cls) return std::nullopt;
  g.traffic_class = *cls;
  if (at != std::string_view::npos) {
    g.election = ParseElection(s.substr(at + 1));
    if (!g.election) return std::nullopt;
  }
  return g;
}

std::string ToString(const GroupSpec& g) {
  std::string s(votewire::ToString(g.traffic_class));
  if (g.election) s += "@" + std::string(votewire::ToString(*g.election));
  return s;
}

std::vector<stats::Sample> MetricSamples(const Analysis& a, Metric metric, const std::vector<GroupSpec>& groups,
                                         VoteBasis basis, std::size_t* excluded) {
  std::size_t skipped = 0;
  std::vector<stats::Sample> samples;
  std::map<std::string, TrafficClass> center_class;
  for (const auto& c : a.centers) center_class[c.center_id] = c.center_class;

  for (const auto& g : groups) {
    stats::Sample s;
    s.label = ToString(g);
    if (metric == Metric::kNoMachine) {
      if (g.election && *g.election != Election::kPRR2004) {
        throw Error(ErrorCode::kUnknownMetric, "no_machine is defined for PRR2004 only");
      }
      std::map<std::string, TrafficClass> machine_class;
      for (const auto& m : a.machines) machine_class[m.machine_id] = m.traffic_class;
      for (const auto& t : a.data.tallies) {
        if (t.election != Election::kPRR2004) continue;
        auto it = machine_class.find(t.machine_id);
        if (it == machine_class.end() || it->second != g.traffic_class) continue;
        try {
          s.values.push_back(NoPercentage(t));
        } catch (const Error&) {
          ++skipped;
        }
      }
    } else {
      const Election e = g.election.value_or(metric == Metric::kChavezCenter ? Election::kE2000 : Election::kPRR2004);
      for (const auto& [id, t] : CenterTallies(a.data.tallies, e)) {
        auto it = center_class.find(id);
        if (it == center_class.end() || it->second != g.traffic_class) continue;
        try {
          if (metric == Metric::kAbstentionCenter) {
            s.values.push_back(AbstentionPercentage(t));
          } else {
            s.values.push_back(CandidatePercentage(t, e == Election::kPRR2004 ? "no" : "chavez", basis));
          }
        } catch (const Error& err) {
          if (err.code() == ErrorCode::kUnknownOption) throw;
          ++skipped;
        }
      }
    }
    samples.push_back(std::move(s));
  }
  if (excluded) *excluded = skipped;
  return samples;
}

std::vector<BatteryEntry> RunBattery(const std::vector<stats::Sample>& samples, std::size_t bins) {
  std::vector<BatteryEntry> out;
  auto run = [&](std::string name, auto&& f) {
    BatteryEntry e;
    e.test = std::move(name);
    try {
      e.result = f();
    } catch (const Error& err) {
      e.error = err.what();
    }
    out.push_back(std::move(e));
  };
  run("anova_f", [&] { return stats::AnovaF(samples); });
  run("t_test", [&] {
    if (samples.size() < 2) throw Error(ErrorCode::kInsufficientData, "needs two groups");
    return stats::TTestTwoSample(samples[0].values, samples[1].values, true);
  });
  run("van_der_waerden", [&] { return stats::VanDerWaerden(samples); });
  run("chi_square_independence", [&] {
    if (samples.size() < 2) throw Error(ErrorCode::kInsufficientData, "needs two groups");
    return stats::ChiSquareIndependence(samples[0].values, samples[1].values, bins);
  });
  return out;
}

namespace {

ordered BatteryJson(const std::vector<BatteryEntry>& battery) {
  ordered arr = ordered::array();
  for (const auto& e : battery) {
    if (e.result) {
      ordered j = TestJson(*e.result);
      j["test"] = e.test;
      j["name"] = e.result->test_name;
      arr.push_back(j);
    } else {
      arr.push_back({{"test", e.test}, {"error", e.error}});
    }
  }
  return arr;
}

}  // namespace

void CmdCompare(const CompareOptions& o) {
  const auto metric = ParseMetric(o.metric);
  if (!metric) throw Error(ErrorCode::kUnknownMetric, "unknown metric '" + o.metric + "'");
  std::vector<GroupSpec> groups;
  for (const auto& g : o.groups) {
    auto spec = ParseGroupSpec(g);
    if (!spec) throw Error(ErrorCode::kUnknownOption, "unknown group '" + g + "'");
    groups.push_back(*spec);
  }
  const Analysis a = Analyze(LoadDataset(o.in));
  std::size_t excluded = 0;
  const auto samples = MetricSamples(a, *metric, groups, o.basis, &excluded);
  for (const auto& s : samples) {
    if (s.values.empty()) throw Error(ErrorCode::kEmptySelection, "group " + s.label + " has no values");
  }

  dataset::ArtifactWriter w(o.out);
  const std::string m(ToString(*metric));
  std::string csv = text::CsvLine(std::vector<std::string>(std::begin(kSummaryHeader), std::end(kSummaryHeader)));
  for (const auto& s : samples) csv += text::CsvLine(SummaryRow(s.label, stats::Summarize(s.values)));
  w.Write("summary_" + m + ".csv", csv);

  ordered tests;
  tests["metric"] = m;
  tests["basis"] = std::string(ToString(o.basis));
  tests["groups"] = o.groups;
  tests["excluded"] = excluded;
  tests["tests"] = BatteryJson(RunBattery(samples, o.bins));
  w.Write("tests_" + m + ".json", tests.dump(2) + "\n");

  if (samples.size() >= 2) {
    csv = text::CsvLine({"q", samples[0].label, samples[1].label});
    const auto qq = stats::QqPoints(samples[0].values, samples[1].values, o.qq_points);
    for (std::size_t i = 0; i < qq.size(); ++i) {
      csv += text::CsvLine({Num(static_cast<double>(i + 1) / static_cast<double>(o.qq_points + 1)), Num(qq[i].first),
                            Num(qq[i].second)});
    }
    w.Write("qq_" + m + ".csv", csv);
  }

  if (*metric == Metric::kAbstentionCenter) {
    // Per center abstention differences between consecutive elections
    // (earlier minus later), by 2004 center class.
    std::map<Election, std::map<std::string, TallySheet>> by_election;
    for (auto e : {Election::kE1998, Election::kE2000, Election::kPRR2004}) {
      by_election[e] = CenterTallies(a.data.tallies, e);
    }
    const std::pair<Election, Election> pairs[] = {{Election::kE1998, Election::kE2000},
                                                   {Election::kE2000, Election::kPRR2004}};
    csv = text::CsvLine({"Level", "Pair", "Number", "Mean", "Std dev"});
    ordered diff_tests = ordered::array();
    for (const auto& [from, to] : pairs) {
      const std::string pair_name = std::string(ToString(from)) + "-" + std::string(ToString(to));
      std::vector<stats::Sample> diffs;
      for (const auto& g : groups) {
        stats::Sample s;
        s.label = std::string(ToString(g.traffic_class));
        for (const auto& c : a.centers) {
          if (c.center_class != g.traffic_class) continue;
          auto f = by_election[from].find(c.center_id);
          auto t = by_election[to].find(c.center_id);
          if (f == by_election[from].end() || t == by_election[to].end()) continue;
          try {
            s.values.push_back(AbstentionPercentage(f->second) - AbstentionPercentage(t->second));
          } catch (const Error&) {
          }
        }
        if (s.values.empty()) continue;
        const auto sum = stats::Summarize(s.values);
        csv += text::CsvLine({s.label, pair_name, std::to_string(sum.n), Num(sum.mean),
                              sum.std_defined ? Num(sum.std_dev) : ""});
        diffs.push_back(std::move(s));
      }
      ordered entry;
      entry["pair"] = pair_name;
      try {
        entry["anova_f"] = TestJson(stats::AnovaF(diffs));
      } catch (const Error& e) {
        entry["anova_f"] = {{"error", e.what()}};
      }
      diff_tests.push_back(entry);
    }
    w.Write("abstention_differences.csv", csv);
    w.Write("abstention_differences.json", diff_tests.dump(2) + "\n");
  }

  ordered params;
  params["dataset_sha256"] = dataset::Sha256Hex(dataset::ReadFile(o.in / "dataset.jsonl"));
  params["metric"] = m;
  params["groups"] = o.groups;
  params["basis"] = std::string(ToString(o.basis));
  params["bins"] = o.bins;
  w.Finish("compare", Params(params));
}

void CmdSimulate(const SimulateOptions& o) {
  auto config = o.config ? simulate::ConfigFromJson(dataset::ReadFile(*o.config)) : simulate::DefaultPack2004();
  if (o.seed) config.seed = *o.seed;
  if (o.scale) config.scale = *o.scale;
  const auto d = simulate::GenerateScenario(config);

  dataset::ArtifactWriter w(o.out);
  w.Write("scenario.json", simulate::ConfigToJson(config));
  w.Write("detail.log", simulate::WriteRadiusDetail(d.records, d.nas));
  w.Write("tallies.csv", simulate::WriteTallyCsv(d.tallies));
  w.Write("registry.csv", simulate::WriteRegistryCsv(d.registry));
  w.Write("nas.csv", simulate::WriteNasMap(d.nas));
  std::string csv =
      text::CsvLine({"machine_id", "center_id", "class", "subgroup", "per_vote_pattern", "line_offset", "votes"});
  for (const auto& m : d.machines) {
    csv += text::CsvLine({m.machine_id, m.center_id, std::string(ToString(m.traffic_class)),
                          m.subgroup ? std::string(ToString(*m.subgroup)) : "", m.per_vote_pattern ? "1" : "0",
                          Num(m.line_offset), std::to_string(m.votes)});
  }
  w.Write("truth_machines.csv", csv);
  csv = text::CsvLine({"center_id", "designed_class", "class"});
  for (const auto& c : d.centers) {
    csv += text::CsvLine({c.center_id, std::string(ToString(c.designed_class)), std::string(ToString(c.center_class))});
  }
  w.Write("truth_centers.csv", csv);
  ordered params;
  params["seed"] = config.seed;
  params["scale"] = config.scale;
  params["config_sha256"] = dataset::Sha256Hex(simulate::ConfigToJson(config));
  w.Finish("simulate", Params(params));
}

}  // namespace votewire::commands
