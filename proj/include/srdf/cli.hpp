#pragma once

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace srdf::cli {

inline constexpr const char* kToolName = "srdf-kit";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

const std::vector<std::string>& task_names();

struct RunOptions {
  std::string task;
  std::filesystem::path config;
  std::filesystem::path outDir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

/// Parsed YAML document plus the resolved command-line overrides.
struct RunConfig {
  std::string task;
  YAML::Node doc;
  std::filesystem::path baseDir;  // relative file references resolve here
  std::filesystem::path outDir;
  std::string format = "csv";     // csv: curves as CSV + summary.json; json: summary.json only
  std::uint64_t seed = 1;
  int threads = 1;
};

RunConfig load_run_config(const RunOptions& options);

struct RunResult {
  int exitCode = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> artifacts;
  nlohmann::json summary;
};

/// Executes one task and writes its artifacts. Never throws; failures are
/// reported through the exit code and message.
RunResult run(const RunOptions& options);
RunResult run(const RunConfig& config);

/// Problems with a summary document under the output contract; empty when valid.
std::vector<std::string> summary_problems(const nlohmann::json& summary);

}  // namespace srdf::cli
