#include "votewire/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "votewire/ingest.hpp"
#include "votewire/text.hpp"

namespace votewire::dataset {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

ordered SessionJson(const TransmissionRecord& r) {
  ordered j;
  j["kind"] = "session";
  j["machine_id"] = r.machine_id;
  j["center_id"] = r.center_id;
  j["medium"] = std::string(ToString(r.medium));
  j["session_start"] = text::FormatRfc3339(r.session_start);
  j["session_stop"] = text::FormatRfc3339(r.session_stop);
  j["input_octets"] = r.input_octets;
  j["output_octets"] = r.output_octets;
  j["input_packets"] = r.input_packets;
  j["output_packets"] = r.output_packets;
  j["terminate_cause"] = std::string(ToString(r.terminate_cause));
  j["call_index"] = r.call_index;
  return j;
}

ordered TallyJson(const TallySheet& t) {
  ordered j;
  j["kind"] = "tally";
  j["machine_id"] = t.machine_id;
  j["center_id"] = t.center_id;
  j["election"] = std::string(ToString(t.election));
  j["registered"] = t.registered_voters;
  j["yes"] = t.yes_votes;
  j["no"] = t.no_votes;
  j["null"] = t.null_votes;
  j["total"] = t.total_votes;
  j["candidates"] = ordered::object();
  for (const auto& [name, v] : t.candidate_votes) j["candidates"][name] = v;
  return j;
}

ordered CenterJson(const VotingCenter& c) {
  ordered j;
  j["kind"] = "center";
  j["center_id"] = c.center_id;
  j["parish"] = c.parish;
  j["municipality"] = c.municipality;
  j["state"] = c.state;
  j["machine_ids"] = c.machine_ids;
  return j;
}

Timestamp TimeField(const json& j, const char* key) {
  const auto t = text::ParseTimestamp(j.at(key).get<std::string>());
  if (!t) throw std::runtime_error(std::string("bad timestamp in ") + key);
  return *t;
}

template <typename T, typename F>
T Parsed(const std::optional<T>& v, F&& what) {
  if (!v) throw std::runtime_error(what());
  return *v;
}

}  // namespace

std::string ToJsonl(const Dataset& d) {
  std::string out;
  ordered meta;
  meta["kind"] = "meta";
  meta["poll_close"] = text::FormatRfc3339(d.poll_close);
  meta["sessions"] = d.records.size();
  meta["tallies"] = d.tallies.size();
  meta["centers"] = d.registry.size();
  out += meta.dump() + "\n";
  for (const auto& r : d.records) out += SessionJson(r).dump() + "\n";
  for (const auto& t : d.tallies) out += TallyJson(t).dump() + "\n";
  for (const auto& c : d.registry) out += CenterJson(c).dump() + "\n";
  return out;
}

Dataset FromJsonl(std::string_view text) {
  Dataset d;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool have_meta = false;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text::Trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "meta") {
        d.poll_close = TimeField(j, "poll_close");
        have_meta = true;
      } else if (kind == "session") {
        TransmissionRecord r;
        r.machine_id = j.at("machine_id").get<std::string>();
        r.center_id = j.at("center_id").get<std::string>();
        r.medium = Parsed(ParseMedium(j.at("medium").get<std::string>()), [] { return "bad medium"; });
        r.session_start = TimeField(j, "session_start");
        r.session_stop = TimeField(j, "session_stop");
        r.input_octets = j.at("input_octets").get<std::uint64_t>();
        r.output_octets = j.at("output_octets").get<std::uint64_t>();
        r.input_packets = j.at("input_packets").get<std::uint64_t>();
        r.output_packets = j.at("output_packets").get<std::uint64_t>();
        r.terminate_cause = Parsed(ParseTerminateCauseName(j.at("terminate_cause").get<std::string>()),
                                   [] { return "bad terminate_cause"; });
        r.call_index = j.at("call_index").get<std::uint32_t>();
        d.records.push_back(std::move(r));
      } else if (kind == "tally") {
        TallySheet t;
        t.machine_id = j.at("machine_id").get<std::string>();
        t.center_id = j.at("center_id").get<std::string>();
        t.election = Parsed(ParseElection(j.at("election").get<std::string>()), [] { return "bad election"; });
        t.registered_voters = j.at("registered").get<std::uint64_t>();
        t.yes_votes = j.at("yes").get<std::uint64_t>();
        t.no_votes = j.at("no").get<std::uint64_t>();
        t.null_votes = j.at("null").get<std::uint64_t>();
        t.total_votes = j.at("total").get<std::uint64_t>();
        for (const auto& [name, v] : j.at("candidates").items()) t.candidate_votes[name] = v.get<std::uint64_t>();
        d.tallies.push_back(std::move(t));
      } else if (kind == "center") {
        VotingCenter c;
        c.center_id = j.at("center_id").get<std::string>();
        c.parish = j.at("parish").get<std::string>();
        c.municipality = j.at("municipality").get<std::string>();
        c.state = j.at("state").get<std::string>();
        c.machine_ids = j.at("machine_ids").get<std::vector<std::string>>();
        d.registry.push_back(std::move(c));
      } else {
        throw std::runtime_error("unknown kind '" + kind + "'");
      }
    } catch (const std::exception& e) {
      throw ParseError(ErrorCode::kMalformedRecord, line_no, e.what());
    }
  }
  if (!have_meta) throw ParseError(ErrorCode::kMalformedRecord, 1, "dataset has no meta line");
  return d;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir_.string() + ": " + ec.message());
}

void ArtifactWriter::Write(const std::string& name, std::string_view content) {
  WriteFile(dir_ / name, content);
  artifacts_.push_back({name, Sha256Hex(content), content.size()});
}

std::string ArtifactWriter::ManifestJson(std::string_view command, const std::string& parameters_json) const {
  auto sorted = artifacts_;
  std::sort(sorted.begin(), sorted.end(), [](const Artifact& a, const Artifact& b) { return a.path < b.path; });
  ordered j;
  j["command"] = std::string(command);
  j["parameters"] = ordered::parse(parameters_json);
  j["artifacts"] = ordered::array();
  for (const auto& a : sorted) {
    ordered e;
    e["path"] = a.path;
    e["sha256"] = a.sha256;
    e["bytes"] = a.bytes;
    j["artifacts"].push_back(e);
  }
  return j.dump(2) + "\n";
}

void ArtifactWriter::Finish(std::string_view command, const std::string& parameters_json) {
  WriteFile(dir_ / "manifest.json", ManifestJson(command, parameters_json));
}

}  // namespace votewire::dataset
