#pragma once

// The votewire subcommands as library calls. Each reads its inputs, writes
// its artifacts plus manifest.json into an output directory and throws
// votewire::Error on failure; RunCli maps those to exit codes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "votewire/classify.hpp"
#include "votewire/dataset.hpp"
#include "votewire/regression.hpp"
#include "votewire/stats.hpp"

namespace votewire::commands {

namespace fs = std::filesystem;

inline constexpr std::uint64_t kDefaultSeed = 20040815;

// Classification of a loaded dataset shared by classify, regress, compare
// and report.
struct Analysis {
  dataset::Dataset data;
  std::vector<classify::MachineClassification> machines;  // by machine id
  std::vector<classify::CenterClassification> centers;    // by center id
  std::optional<classify::SubgroupSplit> split;
  std::string split_error;  // why the G1/G2 split was not possible
};

Analysis Analyze(dataset::Dataset data);

// Reads <dir>/dataset.jsonl. Throws kIo when it is missing.
dataset::Dataset LoadDataset(const fs::path& dir);

// Sums the machine tallies of each center for one election.
std::map<std::string, TallySheet> CenterTallies(const std::vector<TallySheet>& tallies, Election election);

struct IngestOptions {
  fs::path detail;
  fs::path tallies;
  fs::path nas;
  std::optional<fs::path> registry;
  Timestamp poll_close = 1092614400;
  bool strict = false;
  fs::path out;
};

struct IngestSummary {
  std::size_t sessions = 0;
  std::size_t skipped = 0;
  std::size_t duplicates = 0;
  std::size_t tallies = 0;
  std::size_t tally_anomalies = 0;
};

// Writes dataset.jsonl, crosscheck.json and diagnostics.json.
IngestSummary CmdIngest(const IngestOptions& options);

struct ClassifyOptions {
  fs::path in;
  fs::path out;
  double p_superior = 0.33;
};

// classification.csv, centers.csv, class_composition.csv, subgroups.json,
// proportions.json, pattern.csv, pattern.json and, with a registry,
// regional.csv.
void CmdClassify(const ClassifyOptions& options);

struct RegressOptions {
  fs::path in;
  fs::path out;
  std::vector<std::string> groups{"A-G1", "B", "C"};
  std::vector<regression::Direction> directions{regression::Direction::kIncoming,
                                                regression::Direction::kOutgoing};
};

// fit_<group>_<direction>.json and scatter_<group>_<direction>.csv.
void CmdRegress(const RegressOptions& options);

enum class Metric { kNoMachine, kAbstentionCenter, kChavezCenter };

std::optional<Metric> ParseMetric(std::string_view s);
std::string_view ToString(Metric m);

// "A", "B", "C" optionally followed by "@E1998", "@E2000" or "@PRR2004".
struct GroupSpec {
  TrafficClass traffic_class = TrafficClass::kHighWire;
  std::optional<Election> election;
};

std::optional<GroupSpec> ParseGroupSpec(std::string_view s);
std::string ToString(const GroupSpec& g);

struct CompareOptions {
  fs::path in;
  fs::path out;
  std::string metric = "no_machine";
  std::vector<std::string> groups{"A", "B", "C"};
  VoteBasis basis = VoteBasis::kValidOnly;
  std::size_t bins = 20;
  std::size_t qq_points = 99;
};

// One sample per group for the metric. Machines or centers the metric is
// undefined for (no ballots, empty registry) are counted in `excluded`.
std::vector<stats::Sample> MetricSamples(const Analysis& a, Metric metric, const std::vector<GroupSpec>& groups,
                                         VoteBasis basis, std::size_t* excluded = nullptr);

// The test battery on the samples: ANOVA, Van der Waerden (all groups),
// pooled t and chi-square independence (first two groups). A test that
// cannot run reports the reason instead of numbers.
struct BatteryEntry {
  std::string test;
  std::optional<TestResult> result;
  std::string error;
};

std::vector<BatteryEntry> RunBattery(const std::vector<stats::Sample>& samples, std::size_t bins);

// summary_<metric>.csv, tests_<metric>.json, qq_<metric>.csv; the
// abstention metric adds abstention_differences.csv and .json.
void CmdCompare(const CompareOptions& options);

struct SimulateOptions {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  fs::path out;
};

// detail.log, tallies.csv, registry.csv, nas.csv, scenario.json,
// truth_machines.csv and truth_centers.csv.
void CmdSimulate(const SimulateOptions& options);

struct ReportOptions {
  fs::path in;
  fs::path out;
  std::size_t bins = 20;
};

// report.md and the SVG figures.
void CmdReport(const ReportOptions& options);

// Whole command line; returns the process exit code (0 ok, 1 usage, 2 data
// error, 3 I/O).
int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace votewire::commands
