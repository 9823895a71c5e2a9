#pragma once

// Machine and center taxonomy by final-session traffic volume, the G1/G2
// split of High Traffic machines, the mixed-center proportions test, the
// per-vote pattern detector and regional composition tables.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "votewire/core.hpp"

namespace votewire::classify {

// Closed octet ranges (input + output) of the two wire classes.
struct TrafficThresholds {
  std::uint64_t high_min = 23000;
  std::uint64_t high_max = 63000;
  std::uint64_t low_min = 1500;
  std::uint64_t low_max = 7500;
};

enum class UnclassifiedReason { kNone, kBelowLow, kGap, kAboveHigh };

std::string_view ToString(UnclassifiedReason r);

constexpr std::size_t ClassIndex(TrafficClass c) { return static_cast<std::size_t>(c); }

using ClassCounts = std::array<std::size_t, 4>;  // indexed by ClassIndex

// The latest session by stop time; ties go to the higher call_index, then to
// the record later in input order. Throws kNoSessions on an empty span.
const TransmissionRecord& SelectFinalSession(std::span<const TransmissionRecord> sessions);

TrafficClass ClassifyMachine(const TransmissionRecord& final_session,
                             const TrafficThresholds& thresholds = {});
UnclassifiedReason WhyUnclassified(const TransmissionRecord& final_session,
                                   const TrafficThresholds& thresholds = {});

struct MachineClassification {
  std::string machine_id;
  std::string center_id;
  TransmissionRecord final_session;
  TrafficClass traffic_class = TrafficClass::kUnclassified;
  UnclassifiedReason reason = UnclassifiedReason::kNone;
  std::optional<Subgroup> subgroup;  // HighWire only
  std::uint64_t total_octets = 0;
};

// Groups sessions by machine, picks each final session and labels it.
// Output sorted by machine_id.
std::vector<MachineClassification> ClassifyMachines(std::span<const TransmissionRecord> records,
                                                    const TrafficThresholds& thresholds = {});

struct CenterFlags {
  bool mixed_ab = false;
  bool all_unclassified = false;

  bool operator==(const CenterFlags&) const = default;
};

struct CenterClassification {
  std::string center_id;
  TrafficClass center_class = TrafficClass::kUnclassified;
  ClassCounts composition{};
  CenterFlags flags;
};

// Plurality over the classified members (Unclassified machines only win when
// nothing else is present). Ties: wire over cellular, then High over Low.
CenterClassification ClassifyCenter(const std::string& center_id,
                                    std::span<const MachineClassification> members);

// One row per center_id seen among the machines, sorted by center_id.
std::vector<CenterClassification> ClassifyCenters(std::span<const MachineClassification> machines);

struct SubgroupPoint {
  std::string machine_id;
  double output_octets = 0.0;
};

struct SubgroupSplit {
  std::map<std::string, Subgroup> labels;
  double mean_g1 = 0.0;
  double mean_g2 = 0.0;
  std::size_t count_g1 = 0;
  std::size_t count_g2 = 0;
  int iterations = 0;
};

struct SubgroupConfig {
  double initial_g1 = 27000.0;
  double initial_g2 = 37000.0;
  double min_gap = 1000.0;  // below this the two clouds are one
  int max_iterations = 100;
};

// One-dimensional two-means on server->machine octets from fixed initial
// centers. Points at the exact midpoint go to G1. Throws kTooFewPoints for
// fewer than two machines and kDegenerate when a cluster empties or the
// final means are closer than min_gap.
SubgroupSplit SplitHighSubgroups(std::span<const SubgroupPoint> points, const SubgroupConfig& config = {});

// Runs SplitHighSubgroups on the HighWire machines and writes the labels
// back. Returns the split.
SubgroupSplit AssignSubgroups(std::vector<MachineClassification>& machines,
                              const SubgroupConfig& config = {});

struct CenterSubgroupCounts {
  std::string center_id;
  std::size_t g1 = 0;
  std::size_t g2 = 0;

  std::size_t machines() const { return g1 + g2; }
};

// Per-center G1/G2 counts of labeled HighWire machines inside centers whose
// class is HighWire. Sorted by center_id; centers without labels omitted.
std::vector<CenterSubgroupCounts> HighCenterSubgroups(std::span<const MachineClassification> machines,
                                                      std::span<const CenterClassification> centers);

enum class CenterMix { kMixed = 0, kAllG1 = 1, kAllG2 = 2 };

struct ProportionsOutcome {
  TestResult test;
  std::array<std::size_t, 3> observed{};  // mixed, all-G1, all-G2
  std::array<double, 3> expected{};
};

// Chi-square goodness of fit of the observed {mixed, all-G1, all-G2} center
// counts against a per-center Binomial(n, p_superior) model. Categories with
// zero expectation are dropped when also unobserved (degenerate flag set);
// observing one yields an infinite statistic and p = 0.
ProportionsOutcome MixedCenterProportionsTest(std::span<const CenterSubgroupCounts> centers,
                                              double p_superior);

struct PatternConfig {
  double slope_min = 41.0;
  double slope_max = 46.0;
  double slope_step = 0.5;
  double tolerance = 500.0;    // bytes, vertical distance to a line
  double vote_window = 30.0;   // half width of a segment neighbourhood, in votes
  std::size_t min_support = 3; // points on a segment line, anchor included
};

struct PatternPoint {
  std::string machine_id;
  double votes = 0.0;
  double bytes = 0.0;
};

struct PatternResult {
  double fraction = 0.0;
  std::size_t flagged = 0;
  std::vector<bool> flags;  // parallel to the input
};

// Two stages.
// Base: a global Hough vote compares the horizontal band of height
// 2 * tolerance holding the most points with the best line of slope in the
// grid (intercepts optimized exactly over the sorted residuals). When the
// band wins, its points form the horizontal cluster base and are never
// flagged.
// Segments: every other point anchors lines of each grid slope through
// itself; points outside the base within vote_window and tolerance support
// the line, whose intercept is then moved to the median residual of its
// supporters (least absolute residuals). The point is flagged when the best
// such line keeps it within tolerance with at least min_support supporters.
// Throws kTooFewPoints below ten machines.
PatternResult PerVotePatternShare(std::span<const PatternPoint> points, const PatternConfig& config = {});

struct MunicipalityRow {
  std::string state;
  std::string municipality;
  ClassCounts centers{};
  std::size_t total = 0;
  TrafficClass plurality = TrafficClass::kUnclassified;
  double mixing_index = 0.0;  // plurality share of the municipality's centers
};

// Center classes counted per municipality, sorted by (state, municipality).
// Throws kUnknownCenter when a center is missing from the registry.
std::vector<MunicipalityRow> RegionalComposition(std::span<const CenterClassification> centers,
                                                 std::span<const VotingCenter> registry);

}  // namespace votewire::classify
