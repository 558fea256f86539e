#include <exception>
#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>

#include "slip/cli.hpp"

namespace {

std::optional<slip::Vec3> to_vec3(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return slip::Vec3(v[0], v[1], v[2]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMU integration models: simulate, dead-reckon, compare,"
               " evaluate"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a config file");

  const std::map<std::string, slip::Model> model_map{
      {"classical", slip::Model::kClassical},
      {"proposed", slip::Model::kProposed}};

  // simulate
  slip::cli::SimulateConfig sim_cfg;
  std::optional<double> sim_rate;
  std::optional<double> sim_gravity;
  auto* sim = app.add_subcommand("simulate",
                                 "Generate IMU samples and ground truth from "
                                 "a scenario file");
  sim->add_option("--scenario", sim_cfg.scenario, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--seed", sim_cfg.seed, "Noise seed");
  sim->add_option("--rate-hz", sim_rate, "Override the scenario IMU rate");
  sim->add_option("--gravity", sim_gravity, "Override gravity z component");
  sim->add_option("--out", sim_cfg.out_dir, "Output directory")->required();

  // integrate
  slip::cli::IntegrateConfig int_cfg;
  std::optional<std::string> int_truth;
  std::optional<double> int_gravity;
  std::vector<double> int_p0;
  std::vector<double> int_v0;
  auto* integ = app.add_subcommand("integrate",
                                   "Dead-reckon an IMU log at keyframe "
                                   "instants");
  integ->add_option("--imu", int_cfg.imu, "IMU log (EuRoC format)")
      ->required()
      ->check(CLI::ExistingFile);
  integ->add_option("--model", int_cfg.model, "Integration model")
      ->required()
      ->transform(CLI::CheckedTransformer(model_map, CLI::ignore_case));
  integ->add_option("--truth", int_truth, "Initial state source")
      ->check(CLI::ExistingFile);
  integ->add_option("--keyframe-hz", int_cfg.keyframe_hz, "Keyframe rate");
  integ->add_option("--gravity", int_gravity, "Override gravity z component");
  integ->add_option("--p0", int_p0, "Initial position (3 values)")
      ->expected(3);
  integ->add_option("--v0", int_v0, "Initial velocity (3 values)")
      ->expected(3);
  integ->add_option("--out", int_cfg.out_dir, "Output directory")->required();

  // compare
  slip::cli::CompareConfig cmp_cfg;
  std::optional<double> cmp_gravity;
  auto* cmp = app.add_subcommand("compare",
                                 "Run both models and report per-window "
                                 "RMSE against ground truth");
  cmp->add_option("--imu", cmp_cfg.imu, "IMU log (EuRoC format)")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--truth", cmp_cfg.truth, "Ground truth file")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--reset-every", cmp_cfg.reset_every,
                  "Seconds between ground-truth resets (0 = never)");
  cmp->add_option("--keyframe-hz", cmp_cfg.keyframe_hz, "Keyframe rate");
  cmp->add_option("--gravity", cmp_gravity, "Override gravity z component");
  cmp->add_option("--out", cmp_cfg.out_dir, "Output directory")->required();

  // evaluate
  slip::cli::EvaluateConfig eval_cfg;
  auto* eval = app.add_subcommand("evaluate",
                                  "Align an estimate to truth and report "
                                  "position errors");
  eval->add_option("--estimate", eval_cfg.estimate, "Estimated trajectory")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--truth", eval_cfg.truth, "Ground truth file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--out", eval_cfg.out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      sim_cfg.rate_hz = sim_rate;
      sim_cfg.gravity_z = sim_gravity;
      slip::cli::cmd_simulate(sim_cfg);
    } else if (integ->parsed()) {
      if (int_truth) int_cfg.truth = *int_truth;
      int_cfg.gravity_z = int_gravity;
      int_cfg.p0 = to_vec3(int_p0);
      int_cfg.v0 = to_vec3(int_v0);
      slip::cli::cmd_integrate(int_cfg);
    } else if (cmp->parsed()) {
      cmp_cfg.gravity_z = cmp_gravity;
      slip::cli::cmd_compare(cmp_cfg);
    } else if (eval->parsed()) {
      slip::cli::cmd_evaluate(eval_cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
