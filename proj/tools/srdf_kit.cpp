#include "srdf/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  srdf::cli::RunOptions options;
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  int threads = 0;

  CLI::App app{"Sampling rate distortion toolkit"};
  app.set_version_flag("--version", std::string(srdf::cli::kToolVersion));
  app.add_option("task", options.task, "Task to run")->required()->check(CLI::IsMember(srdf::cli::task_names()));
  app.add_option("--config", config, "YAML configuration file")->required();
  app.add_option("--out", out, "Output directory");
  auto* seedOpt = app.add_option("--seed", seed, "Random seed (overrides the config)");
  auto* threadOpt = app.add_option("--threads", threads, "Worker threads (fallback: SRDF_KIT_THREADS)")
                        ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : srdf::cli::kExitValidation;
  }

  options.config = config;
  options.outDir = out;
  if (seedOpt->count() > 0) options.seed = seed;
  if (threadOpt->count() > 0) options.threads = threads;

  const srdf::cli::RunResult result = srdf::cli::run(options);
  if (result.exitCode != srdf::cli::kExitOk) {
    std::cerr << "srdf-kit: " << result.message << '\n';
    return result.exitCode;
  }
  for (const auto& path : result.artifacts) std::cout << path.string() << '\n';
  return 0;
}
