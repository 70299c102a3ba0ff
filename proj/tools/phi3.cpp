#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "phi3/errors.hpp"
#include "phi3/experiment/config.hpp"
#include "phi3/experiment/run.hpp"

namespace {

int fail(const std::string& kind, const std::string& message, const std::string& task = {},
         const std::vector<std::string>& problems = {}) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (!task.empty()) j["task"] = task;
  if (!problems.empty()) j["problems"] = problems;
  std::cerr << j.dump() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace phi3::experiment;
  CLI::App app{"phi3 experiments: phi^3 Gibbs measures on the torus"};
  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  std::string command_help = "one of:";
  for (const auto& c : commands()) command_help += " " + c;
  app.add_option("command", command, command_help)->required()->check(CLI::IsMember(commands()));
  app.add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides output_path)");
  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = load_config(config_path);
    if (cfg.command.empty()) cfg.command = command;
    if (cfg.command != command) {
      return fail("ConfigError", "config declares command '" + cfg.command + "' but '" + command + "' was requested");
    }
    if (seed_opt->count() > 0) cfg.seed = seed;
    const auto m = run(cfg, out_dir);
    std::cout << manifest_json(m) << '\n';
    return 0;
  } catch (const phi3::ConfigError& e) {
    return fail("ConfigError", e.what(), {}, e.problems());
  } catch (const TaskError& e) {
    return fail(e.kind(), e.what(), e.task());
  } catch (const std::exception& e) {
    return fail("Error", e.what());
  }
}
