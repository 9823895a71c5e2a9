#pragma once

// Shared domain types and the elementary electoral metrics.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "votewire/error.hpp"

namespace votewire {

using Timestamp = std::int64_t;  // seconds since the Unix epoch, UTC

enum class Medium { kWire, kCellular };

enum class TerminateCause { kServerRequest, kMachineRequest, kError, kOther };

// One RADIUS accounting session. "Input" and "output" follow the RADIUS
// convention: input octets travel machine -> server (the machine's Outgoing
// data), output octets server -> machine (Incoming data).
struct TransmissionRecord {
  std::string machine_id;
  std::string center_id;
  Medium medium = Medium::kWire;
  Timestamp session_start = 0;
  Timestamp session_stop = 0;
  std::uint64_t input_octets = 0;
  std::uint64_t output_octets = 0;
  std::uint64_t input_packets = 0;
  std::uint64_t output_packets = 0;
  TerminateCause terminate_cause = TerminateCause::kOther;
  std::uint32_t call_index = 0;

  std::uint64_t total_octets() const { return input_octets + output_octets; }

  bool operator==(const TransmissionRecord&) const = default;
};

enum class Election { kE1998, kE2000, kPRR2004 };

struct TallySheet {
  std::string machine_id;
  std::string center_id;
  std::uint64_t registered_voters = 0;
  std::uint64_t yes_votes = 0;
  std::uint64_t no_votes = 0;
  std::uint64_t null_votes = 0;
  std::uint64_t total_votes = 0;
  Election election = Election::kPRR2004;
  std::map<std::string, std::uint64_t> candidate_votes;

  // yes + no + every candidate option; excludes nulls.
  std::uint64_t valid_votes() const;
  // The per-machine 2004 vote count behind the class composition and the
  // bytes fits.
  std::uint64_t yes_no_votes() const { return yes_votes + no_votes; }
  // total_votes disagrees with the option sums plus nulls.
  bool total_mismatch() const;
  // More ballots than registered voters.
  bool over_registry() const;

  bool operator==(const TallySheet&) const = default;
};

struct VotingCenter {
  std::string center_id;
  std::string parish;
  std::string municipality;
  std::string state;
  std::vector<std::string> machine_ids;

  bool operator==(const VotingCenter&) const = default;
};

inline constexpr std::size_t kMaxMachinesPerCenter = 18;

// Throws kInvalidConfig when the center breaks the 1..18 machine bound or
// has an empty region field.
void ValidateCenter(const VotingCenter& center);

enum class TrafficClass { kHighWire, kLowWire, kCellular, kUnclassified };

inline constexpr TrafficClass kAllTrafficClasses[] = {
    TrafficClass::kHighWire, TrafficClass::kLowWire, TrafficClass::kCellular,
    TrafficClass::kUnclassified};

enum class Subgroup { kG1, kG2 };

struct DegreesOfFreedom {
  double first = 0.0;
  std::optional<double> second;

  bool operator==(const DegreesOfFreedom&) const = default;
};

struct TestResult {
  std::string test_name;
  double statistic = 0.0;
  DegreesOfFreedom df;
  double p_value = 1.0;
  // Set when the test ran on a reduced or degenerate design (dropped cells,
  // zero variance, infinite statistic).
  bool degenerate = false;
};

struct DistributionSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  bool std_defined = false;  // false for n == 1, std_dev reported as 0
  double min = 0.0;
  double max = 0.0;
  double range = 0.0;
  double q10 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q90 = 0.0;
};

enum class VoteBasis { kValidOnly, kTotalWithNulls };

// 100 * no / (yes + no). Throws kZeroBallots for machines without votes.
double NoPercentage(const TallySheet& tally);
double YesPercentage(const TallySheet& tally);

// 100 * (registered - total) / registered. Throws kZeroRegistry.
double AbstentionPercentage(const TallySheet& tally);

// Share of one option. "yes" and "no" address the referendum columns, any
// other name is looked up in candidate_votes (kUnknownOption if absent).
double CandidatePercentage(const TallySheet& tally, std::string_view option, VoteBasis basis);

// Names used in files and reports.
std::string_view ToString(Medium m);
std::string_view ToString(TerminateCause c);
std::string_view ToString(Election e);
std::string_view ToString(TrafficClass c);  // "A", "B", "C", "U"
std::string_view ToString(Subgroup g);      // "G1", "G2"
std::string_view ToString(VoteBasis b);     // "valid", "total"

std::optional<Medium> ParseMedium(std::string_view s);
std::optional<Election> ParseElection(std::string_view s);
std::optional<TrafficClass> ParseTrafficClass(std::string_view s);
std::optional<Subgroup> ParseSubgroup(std::string_view s);
std::optional<TerminateCause> ParseTerminateCauseName(std::string_view s);

}  // namespace votewire
