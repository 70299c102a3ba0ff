#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phi3/errors.hpp"
#include "phi3/experiment/config.hpp"

namespace phi3::experiment {

struct TaskSeed {
  std::string task;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  double wall_clock_seconds = 0.0;
  std::vector<TaskSeed> seeds;
  std::vector<std::string> outputs;  // file names relative to the output directory
  std::vector<std::string> warnings;
};

/// A module error re-raised with the task that hit it.
class TaskError : public Error {
 public:
  TaskError(std::string task, std::string kind, const std::string& message)
      : Error(task + ": " + message), task_(std::move(task)), kind_(std::move(kind)) {}
  const std::string& task() const noexcept { return task_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string task_;
  std::string kind_;
};

const char* code_version();

/// Runs the configured command, writes its CSV files into `out_dir` (the
/// config's output_path when empty) and then manifest.json. Task k of the
/// (L, N) grid draws from SeedSpec{seed, k}.
RunManifest run(const ExperimentConfig& config, const std::filesystem::path& out_dir = {});

/// JSON with fields config_hash, version, wall_clock_seconds, seeds, outputs, warnings.
std::string manifest_json(const RunManifest& m);

}  // namespace phi3::experiment
