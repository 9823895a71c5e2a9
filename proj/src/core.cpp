#include "votewire/core.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace votewire {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroBallots: return "ZeroBallots";
    case ErrorCode::kZeroRegistry: return "ZeroRegistry";
    case ErrorCode::kUnknownOption: return "UnknownOption";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kNonNumericCell: return "NonNumericCell";
    case ErrorCode::kNoSessions: return "NoSessions";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kUnknownCenter: return "UnknownCenter";
    case ErrorCode::kDegenerateX: return "DegenerateX";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kQOutOfRange: return "QOutOfRange";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kDegenerateBinning: return "DegenerateBinning";
    case ErrorCode::kZeroExpected: return "ZeroExpected";
    case ErrorCode::kPOutOfRange: return "POutOfRange";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kUnknownMetric: return "UnknownMetric";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

std::uint64_t TallySheet::valid_votes() const {
  std::uint64_t sum = yes_votes + no_votes;
  for (const auto& [_, count] : candidate_votes) sum += count;
  return sum;
}

bool TallySheet::total_mismatch() const { return total_votes != valid_votes() + null_votes; }

bool TallySheet::over_registry() const { return total_votes > registered_voters; }

void ValidateCenter(const VotingCenter& center) {
  const auto n = center.machine_ids.size();
  if (n < 1 || n > kMaxMachinesPerCenter) {
    throw Error(ErrorCode::kInvalidConfig,
                "center " + center.center_id + " has " + std::to_string(n) + " machines");
  }
  if (center.parish.empty() || center.municipality.empty() || center.state.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "center " + center.center_id + " has an empty region field");
  }
}

double NoPercentage(const TallySheet& tally) {
  const std::uint64_t ballots = tally.yes_votes + tally.no_votes;
  if (ballots == 0) throw Error(ErrorCode::kZeroBallots, "machine " + tally.machine_id);
  return 100.0 * static_cast<double>(tally.no_votes) / static_cast<double>(ballots);
}

double YesPercentage(const TallySheet& tally) {
  const std::uint64_t ballots = tally.yes_votes + tally.no_votes;
  if (ballots == 0) throw Error(ErrorCode::kZeroBallots, "machine " + tally.machine_id);
  return 100.0 * static_cast<double>(tally.yes_votes) / static_cast<double>(ballots);
}

double AbstentionPercentage(const TallySheet& tally) {
  if (tally.registered_voters == 0) {
    throw Error(ErrorCode::kZeroRegistry, "machine " + tally.machine_id);
  }
  const double registered = static_cast<double>(tally.registered_voters);
  return 100.0 * (registered - static_cast<double>(tally.total_votes)) / registered;
}

double CandidatePercentage(const TallySheet& tally, std::string_view option, VoteBasis basis) {
  std::uint64_t count = 0;
  if (option == "yes") {
    count = tally.yes_votes;
  } else if (option == "no") {
    count = tally.no_votes;
  } else {
    auto it = tally.candidate_votes.find(std::string(option));
    if (it == tally.candidate_votes.end()) {
      throw Error(ErrorCode::kUnknownOption,
                  std::string(option) + " not on tally of " + tally.machine_id);
    }
    count = it->second;
  }
  std::uint64_t denominator = tally.valid_votes();
  if (basis == VoteBasis::kTotalWithNulls) denominator += tally.null_votes;
  if (denominator == 0) throw Error(ErrorCode::kZeroBallots, "machine " + tally.machine_id);
  return 100.0 * static_cast<double>(count) / static_cast<double>(denominator);
}

std::string_view ToString(Medium m) { return m == Medium::kWire ? "wire" : "cellular"; }

std::string_view ToString(TerminateCause c) {
  switch (c) {
    case TerminateCause::kServerRequest: return "ServerRequest";
    case TerminateCause::kMachineRequest: return "MachineRequest";
    case TerminateCause::kError: return "Error";
    case TerminateCause::kOther: return "Other";
  }
  return "Other";
}

std::string_view ToString(Election e) {
  switch (e) {
    case Election::kE1998: return "E1998";
    case Election::kE2000: return "E2000";
    case Election::kPRR2004: return "PRR2004";
  }
  return "PRR2004";
}

std::string_view ToString(TrafficClass c) {
  switch (c) {
    case TrafficClass::kHighWire: return "A";
    case TrafficClass::kLowWire: return "B";
    case TrafficClass::kCellular: return "C";
    case TrafficClass::kUnclassified: return "U";
  }
  return "U";
}

std::string_view ToString(Subgroup g) { return g == Subgroup::kG1 ? "G1" : "G2"; }

std::string_view ToString(VoteBasis b) { return b == VoteBasis::kValidOnly ? "valid" : "total"; }

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<Medium> ParseMedium(std::string_view s) {
  const std::string v = Lower(s);
  if (v == "wire") return Medium::kWire;
  if (v == "cellular" || v == "cell") return Medium::kCellular;
  return std::nullopt;
}

std::optional<Election> ParseElection(std::string_view s) {
  if (s == "E1998" || s == "1998") return Election::kE1998;
  if (s == "E2000" || s == "2000") return Election::kE2000;
  if (s == "PRR2004" || s == "2004") return Election::kPRR2004;
  return std::nullopt;
}

std::optional<TrafficClass> ParseTrafficClass(std::string_view s) {
  if (s == "A") return TrafficClass::kHighWire;
  if (s == "B") return TrafficClass::kLowWire;
  if (s == "C") return TrafficClass::kCellular;
  if (s == "U") return TrafficClass::kUnclassified;
  return std::nullopt;
}

std::optional<Subgroup> ParseSubgroup(std::string_view s) {
  if (s == "G1") return Subgroup::kG1;
  if (s == "G2") return Subgroup::kG2;
  return std::nullopt;
}

std::optional<TerminateCause> ParseTerminateCauseName(std::string_view s) {
  if (s == "ServerRequest") return TerminateCause::kServerRequest;
  if (s == "MachineRequest") return TerminateCause::kMachineRequest;
  if (s == "Error") return TerminateCause::kError;
  if (s == "Other") return TerminateCause::kOther;
  return std::nullopt;
}

}  // namespace votewire
