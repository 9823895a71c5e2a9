#include <ostream>

#include "CLI11.hpp"
#include "votewire/commands.hpp"
#include "votewire/text.hpp"

namespace votewire::commands {

namespace {

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& part : text::Split(s, ',')) {
    const auto t = text::Trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"votewire: traffic and tally forensics for electronic voting machines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "votewire 1.0.0");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse detail logs, tallies and registry into a dataset");
  std::string ingest_in, detail, tallies, nas, registry, poll_close = "2004-08-16T00:00:00Z", ingest_out;
  bool strict = false;
  ingest->add_option("--in", ingest_in, "Directory holding detail.log, tallies.csv, nas.csv, registry.csv");
  ingest->add_option("--detail", detail, "RADIUS accounting detail file");
  ingest->add_option("--tallies", tallies, "Tally CSV");
  ingest->add_option("--nas", nas, "NAS address to medium map");
  ingest->add_option("--registry", registry, "Center registry CSV");
  ingest->add_option("--poll-close", poll_close, "Poll closing time (RFC 3339 or epoch)")->capture_default_str();
  ingest->add_flag("--strict", strict, "Fail on the first malformed block");
  ingest->add_option("--out", ingest_out, "Output directory")->required();

  // classify
  auto* classify = app.add_subcommand("classify", "Traffic classes, class composition, subgroups and patterns");
  ClassifyOptions co;
  std::string classify_in, classify_out;
  classify->add_option("--in", classify_in, "Ingest output directory")->required();
  classify->add_option("--out", classify_out, "Output directory")->required();
  classify->add_option("--p-superior", co.p_superior, "Probability of a G2 machine")->capture_default_str();

  // regress
  auto* regress = app.add_subcommand("regress", "Bytes-per-vote regressions");
  std::string regress_in, regress_out, regress_groups = "A-G1,B,C", directions = "incoming,outgoing";
  regress->add_option("--in", regress_in, "Ingest output directory")->required();
  regress->add_option("--out", regress_out, "Output directory")->required();
  regress->add_option("--groups", regress_groups, "Comma separated selectors (A, A-G1, A-G2, B, C)")->capture_default_str();
  regress->add_option("--directions", directions, "incoming, outgoing or both")->capture_default_str();

  // compare
  auto* compare = app.add_subcommand("compare", "Summaries and test battery for one metric");
  CompareOptions cmp;
  std::string compare_in, compare_out, compare_groups = "A,B,C", basis = "valid";
  compare->add_option("--in", compare_in, "Ingest output directory")->required();
  compare->add_option("--out", compare_out, "Output directory")->required();
  compare->add_option("--metric", cmp.metric, "no_machine, abstention_center or chavez_center")->capture_default_str();
  compare->add_option("--groups", compare_groups, "Comma separated groups, e.g. A,C or A@E1998,A@PRR2004")->capture_default_str();
  compare->add_option("--basis", basis, "valid or total")->capture_default_str();
  compare->add_option("--bins", cmp.bins, "Chi-square bins")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario with ground truth");
  std::string config, simulate_out;
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> scale;
  simulate->add_option("--config", config, "Scenario JSON (defaults to the built-in 2004 pack)");
  auto* seed_opt = simulate->add_option("--seed", seed, "Random seed")->capture_default_str();
  simulate->add_option("--scale", scale, "Multiplier on the number of centers");
  simulate->add_option("--out", simulate_out, "Output directory")->required();

  // report
  auto* report = app.add_subcommand("report", "Markdown report with SVG figures");
  ReportOptions ro;
  std::string report_in, report_out;
  report->add_option("--in", report_in, "Ingest output directory")->required();
  report->add_option("--out", report_out, "Output directory")->required();
  report->add_option("--bins", ro.bins, "Chi-square bins")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*ingest) {
      IngestOptions o;
      const fs::path base = ingest_in;
      auto pick = [&](const std::string& given, const char* name) {
        if (!given.empty()) return fs::path(given);
        if (ingest_in.empty()) throw CLI::RequiredError(std::string("--") + name);
        return base / (std::string(name) == "detail" ? "detail.log" : std::string(name) + ".csv");
      };
      o.detail = pick(detail, "detail");
      o.tallies = pick(tallies, "tallies");
      o.nas = pick(nas, "nas");
      if (!registry.empty()) {
        o.registry = registry;
      } else if (!ingest_in.empty() && fs::exists(base / "registry.csv")) {
        o.registry = base / "registry.csv";
      }
      const auto pc = text::ParseTimestamp(poll_close);
      if (!pc) throw CLI::ValidationError("--poll-close", "not a timestamp: " + poll_close);
      o.poll_close = *pc;
      o.strict = strict;
      o.out = ingest_out;
      const auto s = CmdIngest(o);
      out << "ingest: " << s.sessions << " sessions, " << s.tallies << " tallies, " << s.skipped
          << " skipped blocks, " << s.duplicates << " duplicates, " << s.tally_anomalies << " tally anomalies\n";
    } else if (*classify) {
      co.in = classify_in;
      co.out = classify_out;
      CmdClassify(co);
      out << "classify: wrote " << co.out.string() << "\n";
    } else if (*regress) {
      RegressOptions o;
      o.in = regress_in;
      o.out = regress_out;
      o.groups = SplitList(regress_groups);
      o.directions.clear();
      for (const auto& d : SplitList(directions)) {
        const auto dir = regression::ParseDirection(d);
        if (!dir) throw CLI::ValidationError("--directions", "unknown direction '" + d + "'");
        o.directions.push_back(*dir);
      }
      CmdRegress(o);
      out << "regress: wrote " << o.out.string() << "\n";
    } else if (*compare) {
      cmp.in = compare_in;
      cmp.out = compare_out;
      cmp.groups = SplitList(compare_groups);
      if (basis == "valid") {
        cmp.basis = VoteBasis::kValidOnly;
      } else if (basis == "total") {
        cmp.basis = VoteBasis::kTotalWithNulls;
      } else {
        throw CLI::ValidationError("--basis", "expected valid or total");
      }
      CmdCompare(cmp);
      out << "compare: wrote " << cmp.out.string() << "\n";
    } else if (*simulate) {
      SimulateOptions o;
      if (!config.empty()) o.config = config;
      // An explicit --seed overrides the config file; otherwise the file (or
      // the default pack) decides.
      if (seed_opt->count() > 0 || config.empty()) o.seed = seed;
      o.scale = scale;
      o.out = simulate_out;
      CmdSimulate(o);
      out << "simulate: wrote " << o.out.string() << "\n";
    } else if (*report) {
      ro.in = report_in;
      ro.out = report_out;
      CmdReport(ro);
      out << "report: wrote " << ro.out.string() << "\n";
    }
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kIo ? 3 : 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace votewire::commands
