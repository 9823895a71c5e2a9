#include <cmath>
#include <set>

#include "votewire/commands.hpp"
#include "votewire/ingest.hpp"
#include "votewire/svg.hpp"
#include "votewire/text.hpp"

namespace votewire::commands {

namespace {

std::string Fixed(double v, int d = 2) { return std::isfinite(v) ? text::FormatFixed(v, d) : "inf"; }

std::string PValue(double p) {
  if (p < 1e-4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", p);
    return buf;
  }
  return text::FormatFixed(p, 4);
}

std::string MdRow(const std::vector<std::string>& cells) {
  std::string s = "|";
  for (const auto& c : cells) s += " " + c + " |";
  return s + "\n";
}

std::string MdTable(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string s = MdRow(header);
  s += "|";
  for (std::size_t i = 0; i < header.size(); ++i) s += "---|";
  s += "\n";
  for (const auto& r : rows) s += MdRow(r);
  return s + "\n";
}

std::string SummaryTable(const std::vector<stats::Sample>& samples) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : samples) {
    if (s.values.empty()) {
      rows.push_back({s.label, "0", "", "", "", "", ""});
      continue;
    }
    const auto d = stats::Summarize(s.values);
    rows.push_back({s.label, std::to_string(d.n), Fixed(d.mean), d.std_defined ? Fixed(d.std_dev) : "",
                    Fixed(d.q25), Fixed(d.median), Fixed(d.q75)});
  }
  return MdTable({"Level", "Number", "Mean", "Std dev", "25%-Q", "Median", "75%-Q"}, rows);
}

std::string BatteryTable(const std::vector<BatteryEntry>& battery) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : battery) {
    if (!e.result) {
      rows.push_back({e.test, "", "", "", e.error});
      continue;
    }
    const auto& r = *e.result;
    std::string df = Fixed(r.df.first, 0);
    if (r.df.second) df += ", " + Fixed(*r.df.second, 0);
    rows.push_back({e.test, Fixed(r.statistic, 4), df, PValue(r.p_value), r.degenerate ? "degenerate" : ""});
  }
  return MdTable({"Test", "Statistic", "df", "p", "Note"}, rows);
}

std::vector<stats::Sample> NonEmpty(std::vector<stats::Sample> samples) {
  std::vector<stats::Sample> out;
  for (auto& s : samples) {
    if (!s.values.empty()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

void CmdReport(const ReportOptions& o) {
  const Analysis a = Analyze(LoadDataset(o.in));
  dataset::ArtifactWriter w(o.out);
  std::string md = "# votewire report\n\n";

  // Inputs and cross-check.
  const auto check = ingest::CrossCheck(a.data.records, a.data.tallies, a.data.poll_close);
  md += "## Inputs\n\n";
  md += MdTable({"Item", "Count"},
                {{"sessions", std::to_string(a.data.records.size())},
                 {"machines with sessions", std::to_string(a.machines.size())},
                 {"centers", std::to_string(a.centers.size())},
                 {"tally sheets", std::to_string(a.data.tallies.size())},
                 {"registry centers", std::to_string(a.data.registry.size())},
                 {"machines in logs and tallies", std::to_string(check.matched)}});

  // Centers, machines and votes by class.
  std::map<std::string, TrafficClass> center_class;
  for (const auto& c : a.centers) center_class[c.center_id] = c.center_class;
  classify::ClassCounts centers{}, housed{}, own{};
  std::array<std::uint64_t, 4> votes{};
  for (const auto& c : a.centers) ++centers[classify::ClassIndex(c.center_class)];
  std::set<std::string> known;
  for (const auto& m : a.machines) {
    ++own[classify::ClassIndex(m.traffic_class)];
    ++housed[classify::ClassIndex(center_class[m.center_id])];
    known.insert(m.machine_id);
  }
  for (const auto& t : a.data.tallies) {
    if (t.election != Election::kPRR2004 || !known.count(t.machine_id)) continue;
    auto it = center_class.find(t.center_id);
    if (it != center_class.end()) votes[classify::ClassIndex(it->second)] += t.yes_no_votes();
  }
  std::uint64_t vote_total = 0;
  for (auto v : votes) vote_total += v;
  auto count_row = [](const std::string& name, const auto& counts) {
    std::vector<std::string> r{name};
    std::uint64_t total = 0;
    for (auto v : counts) {
      r.push_back(std::to_string(v));
      total += v;
    }
    r.push_back(std::to_string(total));
    return r;
  };
  std::vector<std::string> pct{"% of votes"};
  for (auto v : votes) pct.push_back(vote_total ? Fixed(100.0 * static_cast<double>(v) / static_cast<double>(vote_total)) : "");
  pct.push_back(vote_total ? "100.00" : "");
  md += "## Machines and centers by traffic class\n\n";
  md += MdTable({"", "High (A)", "Low (B)", "Cellular (C)", "Unclassified", "Total"},
                {count_row("Voting centers", centers), count_row("Machines in centers", housed),
                 count_row("Machines in each class", own), count_row("Votes", votes), pct});

  // G1/G2 split and mixed centers.
  md += "## High Traffic subgroups\n\n";
  if (a.split) {
    md += MdTable({"Subgroup", "Machines", "Mean incoming bytes"},
                  {{"G1", std::to_string(a.split->count_g1), Fixed(a.split->mean_g1, 0)},
                   {"G2", std::to_string(a.split->count_g2), Fixed(a.split->mean_g2, 0)}});
    const auto counts = classify::HighCenterSubgroups(a.machines, a.centers);
    if (!counts.empty()) {
      const auto outcome = classify::MixedCenterProportionsTest(counts, 0.33);
      std::vector<std::vector<std::string>> rows;
      const char* names[] = {"mixed", "all G1", "all G2"};
      for (int i = 0; i < 3; ++i) {
        rows.push_back({names[i], std::to_string(outcome.observed[i]), Fixed(outcome.expected[i])});
      }
      md += MdTable({"Centers", "Observed", "Expected (p = 0.33)"}, rows);
      md += "Chi-square " + Fixed(outcome.test.statistic, 4) + ", df " + Fixed(outcome.test.df.first, 0) + ", p " +
            PValue(outcome.test.p_value) + (outcome.test.degenerate ? " (degenerate)" : "") + "\n\n";
    }
  } else {
    md += "Split not available: " + a.split_error + "\n\n";
  }

  // Regressions and scatter plots.
  md += "## Bytes against votes\n\n";
  std::vector<std::vector<std::string>> fit_rows;
  std::map<std::pair<std::string, regression::Direction>, regression::GroupFit> fits;
  for (const char* g : {"A", "A-G1", "A-G2", "B", "C"}) {
    for (auto dir : {regression::Direction::kIncoming, regression::Direction::kOutgoing}) {
      try {
        auto f = regression::GroupRegression(a.machines, a.data.tallies, dir, *regression::ParseSelector(g));
        fit_rows.push_back({g, std::string(regression::ToString(dir)), std::to_string(f.fit.n), Fixed(f.fit.slope),
                            Fixed(f.fit.slope_se), Fixed(f.fit.intercept, 0), Fixed(f.fit.r_squared, 4)});
        fits.emplace(std::make_pair(std::string(g), dir), std::move(f));
      } catch (const Error& e) {
        fit_rows.push_back({g, std::string(regression::ToString(dir)), "0", "", "", "", e.what()});
      }
    }
  }
  md += MdTable({"Group", "Direction", "n", "Slope", "Slope SE", "Intercept", "R^2"}, fit_rows);
  for (auto dir : {regression::Direction::kIncoming, regression::Direction::kOutgoing}) {
    std::vector<svg::Series> series;
    std::vector<svg::Line> lines;
    for (const char* g : {"A", "B", "C"}) {
      auto it = fits.find({g, dir});
      if (it == fits.end()) continue;
      svg::Series s{g, {}};
      for (const auto& p : it->second.scatter) {
        s.points.emplace_back(static_cast<double>(p.votes), static_cast<double>(p.bytes));
      }
      series.push_back(std::move(s));
    }
    for (const char* g : {"A-G1", "A-G2", "C"}) {
      auto it = fits.find({g, dir});
      if (it != fits.end()) lines.push_back({g, it->second.fit.intercept, it->second.fit.slope});
    }
    const std::string d(regression::ToString(dir));
    const std::string name = "scatter_" + d + ".svg";
    w.Write(name, svg::Scatter(d + " bytes against votes", "votes", "bytes", series, lines));
    md += "![" + d + "](" + name + ")\n\n";
  }

  // Per-vote pattern among Low Traffic machines.
  md += "## Low Traffic per-vote pattern\n\n";
  {
    std::map<std::string, std::uint64_t> prr;
    for (const auto& t : a.data.tallies) {
      if (t.election == Election::kPRR2004) prr[t.machine_id] = t.yes_no_votes();
    }
    std::vector<classify::PatternPoint> points;
    for (const auto& m : a.machines) {
      auto it = prr.find(m.machine_id);
      if (m.traffic_class != TrafficClass::kLowWire || it == prr.end()) continue;
      points.push_back({m.machine_id, static_cast<double>(it->second), static_cast<double>(m.final_session.output_octets)});
    }
    try {
      const auto r = classify::PerVotePatternShare(points);
      md += std::to_string(r.flagged) + " of " + std::to_string(points.size()) + " machines (" +
            Fixed(100.0 * r.fraction) + "%) lie on per-vote segment lines.\n\n";
    } catch (const Error& e) {
      md += std::string("Not computed: ") + e.what() + "\n\n";
    }
  }

  // NO% per machine.
  const std::vector<GroupSpec> abc{{TrafficClass::kHighWire, {}}, {TrafficClass::kLowWire, {}},
                                   {TrafficClass::kCellular, {}}};
  md += "## NO% per machine\n\n";
  std::size_t excluded = 0;
  const auto no = NonEmpty(MetricSamples(a, Metric::kNoMachine, abc, VoteBasis::kValidOnly, &excluded));
  md += SummaryTable(no);
  md += BatteryTable(RunBattery(no, o.bins));
  if (excluded) md += std::to_string(excluded) + " machines without ballots excluded.\n\n";
  {
    std::vector<svg::Box> boxes;
    for (const auto& s : no) boxes.push_back({s.label, stats::Summarize(s.values)});
    if (!boxes.empty()) {
      w.Write("box_no_machine.svg", svg::BoxPlot("NO% per machine", "NO%", boxes));
      md += "![NO% per machine](box_no_machine.svg)\n\n";
    }
    const stats::Sample* sa = nullptr;
    const stats::Sample* sc = nullptr;
    for (const auto& s : no) {
      if (s.label == "A") sa = &s;
      if (s.label == "C") sc = &s;
    }
    if (sa && sc) {
      w.Write("qq_no_A_C.svg", svg::QqPlot("NO% quantiles, A against C", "A", "C", stats::QqPoints(sa->values, sc->values, 99)));
      md += "![Q-Q](qq_no_A_C.svg)\n\n";
    }
  }

  // Abstention per center.
  md += "## Abstention per center\n\n";
  const auto abst = NonEmpty(MetricSamples(a, Metric::kAbstentionCenter, abc, VoteBasis::kValidOnly, &excluded));
  md += SummaryTable(abst);
  md += BatteryTable(RunBattery(abst, o.bins));
  {
    std::vector<svg::Series> means;
    std::vector<std::vector<std::string>> rows;
    const Election elections[] = {Election::kE1998, Election::kE2000, Election::kPRR2004};
    for (const auto& g : abc) {
      svg::Series s{std::string(ToString(g.traffic_class)), {}};
      std::vector<std::string> row{s.label};
      for (std::size_t i = 0; i < 3; ++i) {
        GroupSpec spec{g.traffic_class, elections[i]};
        const auto sample = MetricSamples(a, Metric::kAbstentionCenter, {spec}, VoteBasis::kValidOnly);
        if (sample[0].values.empty()) {
          row.push_back("");
          continue;
        }
        const double m = stats::Mean(sample[0].values);
        s.points.emplace_back(static_cast<double>(i), m);
        row.push_back(Fixed(m));
      }
      if (!s.points.empty()) means.push_back(std::move(s));
      rows.push_back(row);
    }
    md += "Mean abstention by election:\n\n";
    md += MdTable({"Class", "E1998", "E2000", "PRR2004"}, rows);
    if (!means.empty()) {
      w.Write("abstention_means.svg",
              svg::MeansChart("Mean abstention per center", "abstention %", {"E1998", "E2000", "PRR2004"}, means));
      md += "![abstention](abstention_means.svg)\n\n";
    }
  }

  // Candidate share per center in 2000.
  md += "## Chavez % per center (E2000)\n\n";
  const auto chavez = NonEmpty(MetricSamples(a, Metric::kChavezCenter, abc, VoteBasis::kValidOnly, &excluded));
  md += SummaryTable(chavez);
  md += BatteryTable(RunBattery(chavez, o.bins));

  // Anomalies.
  md += "## Anomalies\n\n";
  md += "- machines in logs without a 2004 tally: " + std::to_string(check.log_only.size()) + "\n";
  md += "- machines with a 2004 tally but no session: " + std::to_string(check.tally_only.size()) + "\n";
  md += "- final sessions started before poll close: " + std::to_string(check.time_anomalies.size()) + "\n";
  md += "- sessions with a zero octet counter: " + std::to_string(check.counter_anomalies.size()) + "\n";
  std::size_t mismatch = 0, over = 0;
  for (const auto& t : a.data.tallies) {
    mismatch += t.total_mismatch();
    over += t.over_registry();
  }
  md += "- tallies whose total disagrees with the option sums: " + std::to_string(mismatch) + "\n";
  md += "- tallies with more ballots than registered voters: " + std::to_string(over) + "\n\n";
  std::vector<std::vector<std::string>> anomaly_rows;
  for (const auto& id : check.log_only) anomaly_rows.push_back({id, "log only"});
  for (const auto& id : check.tally_only) anomaly_rows.push_back({id, "tally only"});
  for (const auto& t : check.time_anomalies) {
    anomaly_rows.push_back({t.machine_id, "session started " + text::FormatRfc3339(t.session_start)});
  }
  for (const auto& c : check.counter_anomalies) anomaly_rows.push_back({c.machine_id, c.reason});
  if (!anomaly_rows.empty()) md += MdTable({"Machine", "Anomaly"}, anomaly_rows);

  w.Write("report.md", md);
  std::string params = "{\"dataset_sha256\":\"" + dataset::Sha256Hex(dataset::ReadFile(o.in / "dataset.jsonl")) +
                       "\",\"bins\":" + std::to_string(o.bins) + "}";
  w.Finish("report", params);
}

}  // namespace votewire::commands
