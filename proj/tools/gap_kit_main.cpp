#include "CLI11.hpp"

#include "gapkit/experiment.hpp"
#include "gapkit/types.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("GAPKIT_OUT"); env && *env) return env;
  return ".";
}

int execute(gapkit::ExperimentConfig config, const std::string& out_dir, bool emit_json,
            std::optional<unsigned> seed_override) {
  if (seed_override) config.seed = *seed_override;
  const auto result = gapkit::run_experiment(config);
  gapkit::write_result_files(result, out_dir, config.out_stem);
  if (emit_json) {
    std::cout << result.document << "\n";
  } else {
    std::cout << result.kind << ": " << (result.pass ? "pass" : "fail") << " (results in "
              << out_dir << "/" << config.out_stem << ".json)\n";
  }
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GAP feasibility experiments: generalized alternating projections with "
               "spectral rate predictions"};
  app.require_subcommand(1);

  std::string out_flag;
  bool emit_json = false;
  app.add_option("--out", out_flag, "Output directory (overrides GAPKIT_OUT)");
  app.add_flag("--json", emit_json, "Print the result document to standard output");

  std::string config_path;
  unsigned seed_value = 0;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file");
  run_cmd->add_option("config", config_path, "JSON experiment config")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed_value, "Override the config seed");

  std::string batch_path;
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "Verify closed-form spectra on a seeded batch");
  spectrum_cmd->add_option("--batch", batch_path, "JSON batch spec")->required();

  std::string sweep_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep for the optimality witness");
  sweep_cmd->add_option("config", sweep_path, "JSON sweep config")->required();

  int iters = 60;
  auto* counter_cmd =
      app.add_subcommand("counterexample", "Reproduce the cone/line non-identification example");
  counter_cmd->add_option("--iters", iters, "Number of iterations (>= 50)");

  CLI11_PARSE(app, argc, argv);
  const bool seed_set = seed_opt->count() > 0;
  const std::string out_dir = resolve_out_dir(out_flag);

  try {
    if (run_cmd->parsed()) {
      return execute(gapkit::load_config(config_path), out_dir, emit_json,
                     seed_set ? std::optional<unsigned>(seed_value) : std::nullopt);
    }
    if (spectrum_cmd->parsed()) {
      auto config = gapkit::load_config(batch_path);
      gapkit::require(config.kind() == "spectrum_check",
                      "spectrum: batch file must have kind 'spectrum_check'");
      return execute(std::move(config), out_dir, emit_json, std::nullopt);
    }
    if (sweep_cmd->parsed()) {
      auto config = gapkit::load_config(sweep_path);
      gapkit::require(config.kind() == "param_sweep",
                      "sweep: config file must have kind 'param_sweep'");
      return execute(std::move(config), out_dir, emit_json, std::nullopt);
    }
    if (counter_cmd->parsed()) {
      auto config = gapkit::builtin_config("counterexample");
      config.problem = gapkit::CounterexampleProblem{iters};
      return execute(std::move(config), out_dir, emit_json, std::nullopt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
