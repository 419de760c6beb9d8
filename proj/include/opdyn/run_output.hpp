#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace opdyn {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "OPDYN_OUTPUT_DIR";

// $OPDYN_OUTPUT_DIR when set and non-empty, else the working directory.
std::filesystem::path default_output_dir();

// Files of one command run, named <name>_<UTC timestamp>[_k]<suffix> inside
// `dir`, plus a JSON manifest <stem>.json written by finish().
class RunOutput {
 public:
  RunOutput(std::string command, std::string name, std::filesystem::path dir);

  const std::string& stem() const { return stem_; }
  // Path for an output file; it is listed in the manifest.
  std::filesystem::path file(std::string_view suffix);

  void set_config(const nlohmann::json& resolved);
  void set_seed(std::uint64_t seed) { manifest_["seed"] = seed; }
  nlohmann::json& notes() { return manifest_["notes"]; }

  // Writes the manifest (listing only outputs that exist) and returns its path.
  std::filesystem::path finish();

 private:
  std::filesystem::path dir_;
  std::string stem_;
  std::vector<std::filesystem::path> outputs_;
  nlohmann::json manifest_;
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point clock_start_;
};

}  // namespace opdyn
