#include "opdyn/run_output.hpp"

#include <cstdlib>
#include <fstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "opdyn/config.hpp"
#include "opdyn/error.hpp"

namespace opdyn {

namespace {

std::string iso_utc(std::chrono::system_clock::time_point t) {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     std::chrono::time_point_cast<std::chrono::seconds>(t));
}

}  // namespace

std::filesystem::path default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  if (env != nullptr && *env != '\0') return env;
  return ".";
}

RunOutput::RunOutput(std::string command, std::string name, std::filesystem::path dir)
    : dir_(std::move(dir)),
      started_(std::chrono::system_clock::now()),
      clock_start_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(dir_);
  const std::string base = fmt::format(
      "{}_{:%Y%m%dT%H%M%SZ}", name, std::chrono::time_point_cast<std::chrono::seconds>(started_));
  stem_ = base;
  for (int k = 2; std::filesystem::exists(dir_ / (stem_ + ".json")); ++k) {
    stem_ = fmt::format("{}_{}", base, k);
  }
  manifest_["command"] = std::move(command);
  manifest_["software_version"] = std::string(kVersion);
  manifest_["started"] = iso_utc(started_);
  manifest_["notes"] = nlohmann::json::object();
}

std::filesystem::path RunOutput::file(std::string_view suffix) {
  outputs_.push_back(dir_ / (stem_ + std::string(suffix)));
  return outputs_.back();
}

void RunOutput::set_config(const nlohmann::json& resolved) {
  manifest_["config"] = resolved;
  manifest_["config_digest"] = config_digest(resolved);
}

std::filesystem::path RunOutput::finish() {
  const auto path = dir_ / (stem_ + ".json");
  nlohmann::json files = nlohmann::json::array();
  for (const auto& p : outputs_) {
    if (std::filesystem::exists(p)) files.push_back(p.string());
  }
  manifest_["outputs"] = files;
  manifest_["finished"] = iso_utc(std::chrono::system_clock::now());
  manifest_["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start_).count();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest " + path.string());
  out << manifest_.dump(2) << '\n';
  return path;
}

}  // namespace opdyn
