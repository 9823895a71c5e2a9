#include "votewire/ingest.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <variant>

#include "votewire/classify.hpp"
#include "votewire/text.hpp"

namespace votewire::ingest {

namespace {

struct Line {
  std::size_t number = 0;
  std::string_view text;
};

struct Block {
  Line header;
  std::vector<Line> attributes;
};

std::vector<Block> SplitBlocks(std::string_view data, std::vector<Diagnostic>& stray) {
  std::vector<Block> blocks;
  std::optional<Block> current;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= data.size()) {
    auto end = data.find('\n', start);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    if (text::Trim(line).empty()) {
      if (current) blocks.push_back(std::move(*current));
      current.reset();
    } else if (line.front() == ' ' || line.front() == '\t') {
      if (current) {
        current->attributes.push_back({number, line});
      } else {
        stray.push_back({number, "attribute line outside a record"});
      }
    } else {
      if (current) blocks.push_back(std::move(*current));
      current = Block{{number, line}, {}};
    }
    if (end == data.size()) break;
    start = end + 1;
  }
  if (current) blocks.push_back(std::move(*current));
  return blocks;
}

std::string Unquote(std::string_view v) {
  v = text::Trim(v);
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') return std::string(v);
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] == '\\' && i + 2 < v.size()) ++i;
    out.push_back(v[i]);
  }
  return out;
}

constexpr std::string_view kRequired[] = {
    "User-Name",          "Calling-Station-Id", "NAS-IP-Address",
    "Acct-Session-Time",  "Acct-Input-Octets",  "Acct-Output-Octets",
    "Acct-Input-Packets", "Acct-Output-Packets", "Acct-Terminate-Cause"};

struct BlockFailure {
  std::size_t line;
  std::string reason;
};

struct ParsedBlock {
  TransmissionRecord record;
  bool has_call_index = false;
};

// Returns the record or the first problem found in the block.
std::variant<ParsedBlock, BlockFailure> ParseBlock(const Block& block, const NasMap& nas) {
  const auto stop = text::ParseTimestamp(block.header.text);
  if (!stop) return BlockFailure{block.header.number, "bad timestamp header"};

  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> attrs;
  for (const auto& line : block.attributes) {
    const auto eq = line.text.find('=');
    if (eq == std::string_view::npos) return BlockFailure{line.number, "expected 'Attribute = Value'"};
    const std::string name(text::Trim(line.text.substr(0, eq)));
    if (name.empty()) return BlockFailure{line.number, "empty attribute name"};
    if (attrs.count(name)) return BlockFailure{line.number, "duplicate attribute " + name};
    attrs[name] = {Unquote(line.text.substr(eq + 1)), line.number};
  }
  for (auto required : kRequired) {
    if (!attrs.count(required)) {
      return BlockFailure{block.header.number, "missing " + std::string(required)};
    }
  }

  auto counter = [&](std::string_view name) -> std::optional<std::uint64_t> {
    return text::ParseUnsigned(attrs.find(name)->second.first);
  };
  auto line_of = [&](std::string_view name) { return attrs.find(name)->second.second; };

  ParsedBlock out;
  TransmissionRecord& r = out.record;
  r.machine_id = attrs.find("User-Name")->second.first;
  r.center_id = attrs.find("Calling-Station-Id")->second.first;
  if (r.machine_id.empty()) return BlockFailure{line_of("User-Name"), "empty User-Name"};

  const auto& nas_ip = attrs.find("NAS-IP-Address")->second.first;
  auto medium = nas.find(nas_ip);
  if (medium == nas.end()) return BlockFailure{line_of("NAS-IP-Address"), "unmapped NAS " + nas_ip};
  r.medium = medium->second;

  const auto session_time = counter("Acct-Session-Time");
  if (!session_time) return BlockFailure{line_of("Acct-Session-Time"), "non-numeric Acct-Session-Time"};
  r.session_stop = *stop;
  r.session_start = *stop - static_cast<Timestamp>(*session_time);

  struct CounterField {
    std::string_view name;
    std::uint64_t* target;
    std::string_view gigawords;
  };
  const CounterField fields[] = {
      {"Acct-Input-Octets", &r.input_octets, "Acct-Input-Gigawords"},
      {"Acct-Output-Octets", &r.output_octets, "Acct-Output-Gigawords"},
      {"Acct-Input-Packets", &r.input_packets, {}},
      {"Acct-Output-Packets", &r.output_packets, {}},
  };
  for (const auto& f : fields) {
    const auto v = counter(f.name);
    if (!v) return BlockFailure{line_of(f.name), "non-numeric " + std::string(f.name)};
    *f.target = *v;
    if (!f.gigawords.empty()) {
      if (auto g = attrs.find(f.gigawords); g != attrs.end()) {
        const auto giga = text::ParseUnsigned(g->second.first);
        if (!giga) return BlockFailure{g->second.second, "non-numeric " + std::string(f.gigawords)};
        *f.target += *giga << 32;
      }
    }
  }
  r.terminate_cause = ParseRadiusTerminateCause(attrs.find("Acct-Terminate-Cause")->second.first);

  if (auto sid = attrs.find("Acct-Session-Id"); sid != attrs.end()) {
    const auto colon = sid->second.first.rfind(':');
    if (colon != std::string::npos) {
      const auto call = text::ParseUnsigned(std::string_view(sid->second.first).substr(colon + 1));
      if (!call || *call > 0xffffffffULL) {
        return BlockFailure{sid->second.second, "bad call index in Acct-Session-Id"};
      }
      r.call_index = static_cast<std::uint32_t>(*call);
      out.has_call_index = true;
    }
  }
  return out;
}

}  // namespace

DetailParseResult ParseRadiusDetail(std::string_view data, const NasMap& nas, ParseMode mode) {
  DetailParseResult result;
  std::vector<Diagnostic> stray;
  const auto blocks = SplitBlocks(data, stray);
  if (!stray.empty()) {
    if (mode == ParseMode::kStrict) {
      throw ParseError(ErrorCode::kMalformedRecord, stray.front().line, stray.front().reason);
    }
    result.skipped = stray;
  }

  struct Kept {
    TransmissionRecord record;
    std::size_t line;
  };
  std::vector<std::optional<Kept>> kept;
  std::map<std::string, std::uint32_t, std::less<>> ordinal;
  std::map<std::pair<std::string, std::uint32_t>, std::size_t> seen;

  for (const auto& block : blocks) {
    auto parsed = ParseBlock(block, nas);
    if (auto* failure = std::get_if<BlockFailure>(&parsed)) {
      if (mode == ParseMode::kStrict) {
        throw ParseError(ErrorCode::kMalformedRecord, failure->line, failure->reason);
      }
      result.skipped.push_back({failure->line, failure->reason});
      continue;
    }
    auto& ok = std::get<ParsedBlock>(parsed);
    auto& count = ordinal[ok.record.machine_id];
    ++count;
    if (!ok.has_call_index) ok.record.call_index = count;

    const auto key = std::make_pair(ok.record.machine_id, ok.record.call_index);
    if (auto it = seen.find(key); it != seen.end()) {
      auto& earlier = kept[it->second];
      result.duplicates.push_back(
          {block.header.number, "machine " + key.first + " call " + std::to_string(key.second) +
                                    " repeats the block at line " + std::to_string(earlier->line)});
      earlier.reset();
    }
    seen[key] = kept.size();
    kept.push_back(Kept{std::move(ok.record), block.header.number});
  }

  for (auto& k : kept) {
    if (k) result.records.push_back(std::move(k->record));
  }
  std::sort(result.skipped.begin(), result.skipped.end(),
            [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  return result;
}

NasMap ParseNasMap(std::string_view data) {
  NasMap map;
  for (const auto& row : text::ReadCsv(data)) {
    if (row.cells.size() != 2) {
      throw ParseError(ErrorCode::kMalformedRecord, row.line, "expected nas_ip,medium");
    }
    const auto ip = std::string(text::Trim(row.cells[0]));
    const auto medium_cell = text::Trim(row.cells[1]);
    if (ip == "nas_ip" && medium_cell == "medium") continue;
    const auto medium = ParseMedium(medium_cell);
    if (!medium) {
      throw ParseError(ErrorCode::kMalformedRecord, row.line, "unknown medium " + std::string(medium_cell));
    }
    map[ip] = *medium;
  }
  return map;
}

std::string_view RadiusTerminateCauseName(TerminateCause cause) {
  switch (cause) {
    case TerminateCause::kServerRequest: return "NAS-Request";
    case TerminateCause::kMachineRequest: return "User-Request";
    case TerminateCause::kError: return "NAS-Error";
    case TerminateCause::kOther: return "Callback";
  }
  return "Callback";
}

TerminateCause ParseRadiusTerminateCause(std::string_view value) {
  value = text::Trim(value);
  static const std::map<std::string_view, TerminateCause> kNames = {
      {"User-Request", TerminateCause::kMachineRequest},
      {"Lost-Carrier", TerminateCause::kError},
      {"Lost-Service", TerminateCause::kError},
      {"Idle-Timeout", TerminateCause::kServerRequest},
      {"Session-Timeout", TerminateCause::kServerRequest},
      {"Admin-Reset", TerminateCause::kServerRequest},
      {"Admin-Reboot", TerminateCause::kServerRequest},
      {"Port-Error", TerminateCause::kError},
      {"NAS-Error", TerminateCause::kError},
      {"NAS-Request", TerminateCause::kServerRequest},
      {"NAS-Reboot", TerminateCause::kServerRequest},
      {"Port-Unneeded", TerminateCause::kServerRequest},
      {"Port-Preempted", TerminateCause::kServerRequest},
      {"Port-Suspended", TerminateCause::kServerRequest},
      {"Service-Unavailable", TerminateCause::kError},
  };
  // RFC 2866 integer codes 1..15 in the order above; 16 (Callback) and
  // beyond fall through to kOther.
  static const std::string_view kByCode[] = {
      "User-Request", "Lost-Carrier", "Lost-Service", "Idle-Timeout", "Session-Timeout",
      "Admin-Reset",  "Admin-Reboot", "Port-Error",   "NAS-Error",    "NAS-Request",
      "NAS-Reboot",   "Port-Unneeded", "Port-Preempted", "Port-Suspended", "Service-Unavailable"};
  if (auto code = text::ParseUnsigned(value)) {
    if (*code >= 1 && *code <= std::size(kByCode)) return kNames.at(kByCode[*code - 1]);
    return TerminateCause::kOther;
  }
  if (auto it = kNames.find(value); it != kNames.end()) return it->second;
  return TerminateCause::kOther;
}

TallyParseResult ParseTallyCsv(std::string_view data) {
  TallyParseResult result;
  const auto rows = text::ReadCsv(data);
  if (rows.empty()) throw ParseError(ErrorCode::kMissingColumn, 1, "missing header row");

  const auto& header = rows.front();
  std::map<std::string, std::size_t, std::less<>> column;
  for (std::size_t i = 0; i < header.cells.size(); ++i) {
    column[std::string(text::Trim(header.cells[i]))] = i;
  }
  for (auto name : kTallyColumns) {
    if (!column.count(name)) {
      throw ParseError(ErrorCode::kMissingColumn, header.line, "missing column " + std::string(name));
    }
  }
  std::vector<std::pair<std::string, std::size_t>> options;
  for (std::size_t i = 0; i < header.cells.size(); ++i) {
    const std::string name(text::Trim(header.cells[i]));
    if (std::find(std::begin(kTallyColumns), std::end(kTallyColumns), name) == std::end(kTallyColumns)) {
      options.emplace_back(name, i);
    }
  }

  std::set<std::pair<std::string, Election>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.cells.size()) {
      throw ParseError(ErrorCode::kMalformedRecord, row.line,
                       "expected " + std::to_string(header.cells.size()) + " cells, got " +
                           std::to_string(row.cells.size()));
    }
    auto cell = [&](std::string_view name) -> const std::string& { return row.cells[column.find(name)->second]; };
    auto number = [&](std::string_view name) {
      const auto v = text::ParseUnsigned(cell(name));
      if (!v) {
        throw ParseError(ErrorCode::kNonNumericCell, row.line,
                         "column " + std::string(name) + " holds '" + cell(name) + "'");
      }
      return *v;
    };

    TallySheet t;
    t.machine_id = std::string(text::Trim(cell("machine_id")));
    t.center_id = std::string(text::Trim(cell("center_id")));
    t.registered_voters = number("registered");
    t.yes_votes = number("yes");
    t.no_votes = number("no");
    t.null_votes = number("null");
    t.total_votes = number("total");
    const auto election = ParseElection(text::Trim(cell("election_id")));
    if (!election) {
      throw ParseError(ErrorCode::kMalformedRecord, row.line, "unknown election_id '" + cell("election_id") + "'");
    }
    t.election = *election;
    for (const auto& [name, index] : options) {
      if (text::Trim(row.cells[index]).empty()) continue;
      const auto v = text::ParseUnsigned(row.cells[index]);
      if (!v) {
        throw ParseError(ErrorCode::kNonNumericCell, row.line,
                         "column " + name + " holds '" + row.cells[index] + "'");
      }
      t.candidate_votes[name] = *v;
    }

    if (t.total_mismatch()) {
      result.anomalies.push_back({row.line, t.machine_id, "total differs from option sums plus nulls"});
    }
    if (t.over_registry()) {
      result.anomalies.push_back({row.line, t.machine_id, "more ballots than registered voters"});
    }
    if (!seen.insert({t.machine_id, t.election}).second) {
      result.anomalies.push_back({row.line, t.machine_id, "machine repeated for the same election"});
    }
    result.tallies.push_back(std::move(t));
  }
  return result;
}

std::vector<VotingCenter> ParseRegistryCsv(std::string_view data) {
  const auto rows = text::ReadCsv(data);
  if (rows.empty()) throw ParseError(ErrorCode::kMissingColumn, 1, "missing header row");
  const auto& header = rows.front();
  std::map<std::string, std::size_t, std::less<>> column;
  for (std::size_t i = 0; i < header.cells.size(); ++i) {
    column[std::string(text::Trim(header.cells[i]))] = i;
  }
  constexpr std::string_view kColumns[] = {"center_id", "parish", "municipality", "state", "machine_ids"};
  for (auto name : kColumns) {
    if (!column.count(name)) {
      throw ParseError(ErrorCode::kMissingColumn, header.line, "missing column " + std::string(name));
    }
  }
  std::vector<VotingCenter> centers;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.cells.size()) {
      throw ParseError(ErrorCode::kMalformedRecord, row.line, "wrong number of cells");
    }
    auto cell = [&](std::string_view name) {
      return std::string(text::Trim(row.cells[column.find(name)->second]));
    };
    VotingCenter c;
    c.center_id = cell("center_id");
    c.parish = cell("parish");
    c.municipality = cell("municipality");
    c.state = cell("state");
    for (auto& id : text::Split(cell("machine_ids"), ';')) {
      auto trimmed = std::string(text::Trim(id));
      if (!trimmed.empty()) c.machine_ids.push_back(std::move(trimmed));
    }
    try {
      ValidateCenter(c);
    } catch (const Error& e) {
      throw ParseError(ErrorCode::kMalformedRecord, row.line, e.what());
    }
    centers.push_back(std::move(c));
  }
  return centers;
}

CrossCheckReport CrossCheck(std::span<const TransmissionRecord> records,
                            std::span<const TallySheet> tallies, Timestamp poll_close) {
  CrossCheckReport report;
  std::map<std::string, std::vector<TransmissionRecord>> by_machine;
  for (const auto& r : records) by_machine[r.machine_id].push_back(r);
  std::set<std::string> tally_ids;
  for (const auto& t : tallies) {
    if (t.election == Election::kPRR2004) tally_ids.insert(t.machine_id);
  }

  for (const auto& [id, sessions] : by_machine) {
    if (tally_ids.count(id)) {
      ++report.matched;
    } else {
      report.log_only.push_back(id);
    }
    const auto& final_session = classify::SelectFinalSession(sessions);
    if (final_session.session_start < poll_close) {
      report.time_anomalies.push_back({id, final_session.session_start, poll_close});
    }
    for (const auto& s : sessions) {
      const std::string call = " (call " + std::to_string(s.call_index) + ")";
      if (s.input_octets == 0 && s.output_octets == 0) {
        report.counter_anomalies.push_back({id, "zero octets in both directions" + call});
      } else if (s.input_octets == 0) {
        report.counter_anomalies.push_back({id, "zero input octets" + call});
      } else if (s.output_octets == 0) {
        report.counter_anomalies.push_back({id, "zero output octets" + call});
      }
    }
  }
  for (const auto& id : tally_ids) {
    if (!by_machine.count(id)) report.tally_only.push_back(id);
  }
  return report;
}

}  // namespace votewire::ingest
