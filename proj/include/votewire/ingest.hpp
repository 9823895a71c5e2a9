#pragma once

// Readers for the three evidence files (RADIUS accounting detail logs, tally
// CSVs, center registry) and the log-vs-tally cross-check.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "votewire/core.hpp"

namespace votewire::ingest {

enum class ParseMode { kStrict, kLenient };

struct Diagnostic {
  std::size_t line = 0;
  std::string reason;

  bool operator==(const Diagnostic&) const = default;
};

// NAS-IP-Address -> transmission medium.
using NasMap = std::map<std::string, Medium, std::less<>>;

struct DetailParseResult {
  std::vector<TransmissionRecord> records;  // file order
  std::vector<Diagnostic> skipped;          // lenient mode only
  std::vector<Diagnostic> duplicates;       // (machine, call) seen twice; last kept
};

// Blank-line separated blocks: a timestamp header (epoch or RFC 3339, the
// session stop time) followed by indented `Attribute = Value` lines. The
// nine attributes below are required:
//   User-Name            -> machine_id
//   Calling-Station-Id   -> center_id
//   NAS-IP-Address       -> medium (through `nas`)
//   Acct-Session-Time    -> session_start = stop - time
//   Acct-Input-Octets, Acct-Output-Octets, Acct-Input-Packets,
//   Acct-Output-Packets, Acct-Terminate-Cause
// Optional: Acct-Session-Id "<machine>:<call>" for call_index (otherwise the
// per-machine ordinal in file order, from 1), Acct-Input-Gigawords and
// Acct-Output-Gigawords. Unknown attributes are ignored.
//
// Strict mode throws ParseError(kMalformedRecord) on the first bad block;
// lenient mode skips it and records the same diagnostic.
DetailParseResult ParseRadiusDetail(std::string_view data, const NasMap& nas, ParseMode mode);

// `nas_ip,medium` rows, optional header.
NasMap ParseNasMap(std::string_view data);

// RFC 2866 names for the Acct-Terminate-Cause attribute.
std::string_view RadiusTerminateCauseName(TerminateCause cause);
// Accepts RFC 2866 names and their integer codes; anything else is kOther.
TerminateCause ParseRadiusTerminateCause(std::string_view value);

struct TallyAnomaly {
  std::size_t row = 0;
  std::string machine_id;
  std::string reason;

  bool operator==(const TallyAnomaly&) const = default;
};

struct TallyParseResult {
  std::vector<TallySheet> tallies;
  std::vector<TallyAnomaly> anomalies;  // rows are kept, only flagged
};

inline constexpr std::string_view kTallyColumns[] = {
    "machine_id", "center_id", "registered", "yes", "no", "null", "total", "election_id"};

// Header row mandatory. Columns beyond kTallyColumns are candidate options;
// an empty option cell means the option was not on that ballot.
// Throws ParseError with kMissingColumn / kNonNumericCell / kMalformedRecord.
TallyParseResult ParseTallyCsv(std::string_view data);

// center_id,parish,municipality,state,machine_ids (';' separated).
std::vector<VotingCenter> ParseRegistryCsv(std::string_view data);

struct TimeAnomaly {
  std::string machine_id;
  Timestamp session_start = 0;
  Timestamp poll_close = 0;

  bool operator==(const TimeAnomaly&) const = default;
};

struct CounterAnomaly {
  std::string machine_id;
  std::string reason;

  bool operator==(const CounterAnomaly&) const = default;
};

struct CrossCheckReport {
  std::size_t matched = 0;
  std::vector<std::string> log_only;    // sorted
  std::vector<std::string> tally_only;  // sorted
  std::vector<TimeAnomaly> time_anomalies;
  std::vector<CounterAnomaly> counter_anomalies;
};

// Machine-id set differences between logs and PRR2004 tallies; final sessions that
// started strictly before poll close; sessions with a zero octet counter.
CrossCheckReport CrossCheck(std::span<const TransmissionRecord> records,
                            std::span<const TallySheet> tallies, Timestamp poll_close);

}  // namespace votewire::ingest
