// Batch experiment driver: solve / coarsen / construct / verify pipelines on
// torus grids, with trajectory, measure, and report files as outputs.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "genesol/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"genesol: energy-variational solution laboratory"};
  app.require_subcommand(1);

  std::string config_path, file_path, traj_path, target = "measure";
  std::string out_path = "converted.jsonl";
  std::uint64_t seed = 0;
  bool seed_set = false, force = false;
  double tolerance_scale = 1.0;
  int block = 2;

  auto* run = app.add_subcommand("run", "execute a configured pipeline");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_flag("--force", force, "overwrite existing outputs");
  run->add_option("--tolerance-scale", tolerance_scale, "scale verify tolerances");

  auto* report = app.add_subcommand("report", "summarize a trajectory or report file");
  report->add_option("path", file_path, "trajectory or report file")->required();

  auto* verify = app.add_subcommand("verify", "re-verify a stored trajectory");
  verify->add_option("trajectory", traj_path, "trajectory file")->required();
  verify->add_option("config", config_path, "experiment config file")->required();
  verify->add_option("--tolerance-scale", tolerance_scale, "scale verify tolerances");

  auto* convert = app.add_subcommand("convert", "convert a trajectory");
  convert->add_option("trajectory", traj_path, "trajectory file")->required();
  convert->add_option("--to", target, "measure | varifold");
  convert->add_option("--block", block, "coarsening block");
  convert->add_option("--out", out_path, "output path");
  convert->add_flag("--force", force, "overwrite existing outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      genesol::ExperimentConfig config =
          genesol::ExperimentConfig::parse_file(config_path);
      genesol::RunOptions options;
      if (seed_set) options.seed_override = seed;
      options.force = force;
      options.tolerance_scale = tolerance_scale;
      return genesol::run_experiment(config, options);
    }
    if (report->parsed()) return genesol::report_files(file_path);
    if (verify->parsed()) {
      genesol::ExperimentConfig config =
          genesol::ExperimentConfig::parse_file(config_path);
      return genesol::verify_trajectory(traj_path, config, tolerance_scale);
    }
    if (convert->parsed())
      return genesol::convert_trajectory(traj_path, target, block, out_path, force);
  } catch (const genesol::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return genesol::kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return genesol::kExitPipeline;
  }
  return genesol::kExitParse;
}
