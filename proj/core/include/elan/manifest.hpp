#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace elan {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);  // MissingFile

// Provenance record accompanying every command's outputs: which inputs (by
// content digest), which settings, and which tool version produced them.
// Contains no timestamps so reruns with identical inputs serialize
// identically.
struct RunManifest {
  std::string tool_version;
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path -> sha256
  std::map<std::string, double> thresholds;
  std::map<std::string, std::string> settings;

  void add_input(const std::filesystem::path& path);

  std::string to_json() const;  // stable field order, 2-space indent
  std::string digest() const;   // sha256 over to_json()
};

// Collects a command's output files and commits them atomically: every file
// is written to a temporary name in the target directory, then all are
// renamed into place only after every write succeeded. On failure the
// temporaries are removed and the directory is left as it was.
class OutputStage {
 public:
  void add(std::string filename, std::string content);
  bool empty() const { return files_.empty(); }

  // Creates dir if needed, then writes and renames. Returns the final paths.
  std::vector<std::filesystem::path> commit(
      const std::filesystem::path& dir) const;

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace elan
