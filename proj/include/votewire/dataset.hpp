#pragma once

// The normalized dataset written by `ingest` and read by every analysis
// command, plus the artifact writer that records content hashes.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "votewire/core.hpp"

namespace votewire::dataset {

struct Dataset {
  Timestamp poll_close = 0;
  std::vector<TransmissionRecord> records;
  std::vector<TallySheet> tallies;
  std::vector<VotingCenter> registry;
};

// One JSON object per line, tagged by "kind": a "meta" line first, then
// "session", "tally" and "center" lines in input order.
std::string ToJsonl(const Dataset& d);
// Throws ParseError(kMalformedRecord) with the offending line.
Dataset FromJsonl(std::string_view text);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

// Throws Error(kIo).
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

struct Artifact {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

// Writes files under one directory and finishes with manifest.json listing
// them, sorted by path. The manifest holds no timestamps, so identical
// inputs give identical manifests.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);

  void Write(const std::string& name, std::string_view content);
  const std::vector<Artifact>& artifacts() const { return artifacts_; }
  // `parameters_json` is a JSON object describing the resolved inputs.
  std::string ManifestJson(std::string_view command, const std::string& parameters_json) const;
  void Finish(std::string_view command, const std::string& parameters_json);

 private:
  std::filesystem::path dir_;
  std::vector<Artifact> artifacts_;
};

}  // namespace votewire::dataset
