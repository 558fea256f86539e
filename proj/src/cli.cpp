#include "slip/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "slip/dataset_io.hpp"
#include "slip/preintegration.hpp"

namespace slip::cli {

namespace {

namespace fs = std::filesystem;

Vec3 gravity_from(const std::optional<double>& gravity_z) {
  return gravity_z ? Vec3(0.0, 0.0, *gravity_z) : standard_gravity();
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             ": " + ec.message());
  }
}

/// Index of the truth state nearest to (epoch_ns, t); nullopt when further
/// than tol_s away.
std::optional<std::size_t> nearest_state(const Trajectory& truth,
                                         std::int64_t epoch_ns, double t,
                                         double tol_s = 1e-3) {
  if (truth.states.empty()) return std::nullopt;
  const double target =
      t + static_cast<double>(epoch_ns - truth.epoch_ns) * 1e-9;
  std::size_t best = 0;
  double best_d = std::abs(truth.states[0].t - target);
  for (std::size_t i = 1; i < truth.states.size(); ++i) {
    const double d = std::abs(truth.states[i].t - target);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  if (best_d > tol_s) return std::nullopt;
  return best;
}

/// Chains preintegrated windows between consecutive keyframe indices,
/// starting from x0 (stamped at samples[keyframes.front()].t).
Trajectory integrate_keyframes(const ImuStream& imu,
                               std::span<const std::size_t> keyframes,
                               const NavState& x0, Model model,
                               const Vec3& g) {
  Trajectory est;
  est.epoch_ns = imu.epoch_ns;
  NavState x = x0;
  x.t = imu.samples[keyframes.front()].t;
  est.states.push_back(x);
  for (std::size_t m = 0; m + 1 < keyframes.size(); ++m) {
    const std::size_t ki = keyframes[m];
    const std::size_t kj = keyframes[m + 1];
    const std::span<const ImuSample> window(imu.samples.data() + ki, kj - ki);
    const PreintDelta d = preintegrate(window, imu.samples[kj].t, model);
    x = apply_delta(x, d, g);
    x.t = imu.samples[kj].t;
    est.states.push_back(x);
  }
  return est;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Trajectory read_truth_any(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open: " + path.string());
  }
  std::string first;
  std::getline(in, first);
  in.close();
  if (first.rfind("# slip-traj", 0) == 0) {
    return read_trajectory(path);
  }
  return read_groundtruth(path);
}

SimulateResult cmd_simulate(const SimulateConfig& cfg) {
  ScenarioSpec scenario = load_scenario(cfg.scenario);
  if (cfg.rate_hz) scenario.imu_rate_hz = *cfg.rate_hz;
  if (cfg.gravity_z) scenario.gravity = Vec3(0.0, 0.0, *cfg.gravity_z);
  scenario.validate();

  const SimResult sim = generate(scenario, cfg.seed);
  ensure_out_dir(cfg.out_dir);

  SimulateResult out;
  out.imu_path = cfg.out_dir / "imu.csv";
  out.truth_path = cfg.out_dir / "truth.csv";
  out.n_samples = sim.samples.samples.size();
  out.n_states = sim.truth.states.size();
  write_imu_log(out.imu_path, sim.samples);
  write_trajectory(out.truth_path, sim.truth);

  std::cout << "simulate: " << out.n_samples << " samples, " << out.n_states
            << " truth states -> " << cfg.out_dir.string() << "\n";
  return out;
}

IntegrateResult cmd_integrate(const IntegrateConfig& cfg) {
  const ImuStream imu = read_imu_log(cfg.imu);
  if (imu.samples.empty()) {
    throw std::runtime_error("integrate: IMU log is empty");
  }
  const Vec3 g = gravity_from(cfg.gravity_z);
  const auto keyframes = select_keyframes(imu.samples, cfg.keyframe_hz);

  NavState x0;
  if (cfg.truth) {
    const Trajectory truth = read_truth_any(*cfg.truth);
    const auto idx = nearest_state(truth, imu.epoch_ns,
                                   imu.samples[keyframes.front()].t);
    if (!idx) {
      throw std::runtime_error(
          "integrate: no ground-truth state within 1 ms of the first "
          "keyframe");
    }
    x0 = truth.states[*idx];
  } else {
    x0.p = cfg.p0.value_or(Vec3::Zero());
    x0.v = cfg.v0.value_or(Vec3::Zero());
  }

  const Trajectory est = integrate_keyframes(imu, keyframes, x0, cfg.model, g);
  ensure_out_dir(cfg.out_dir);

  IntegrateResult out;
  out.estimate_path =
      cfg.out_dir / (std::string("estimate_") + to_string(cfg.model) + ".csv");
  out.n_keyframes = keyframes.size();
  write_trajectory(out.estimate_path, est);

  std::cout << "integrate[" << to_string(cfg.model) << "]: " << imu.samples.size()
            << " samples, " << keyframes.size() << " keyframes -> "
            << out.estimate_path.string() << "\n";
  return out;
}

CompareResult cmd_compare(const CompareConfig& cfg) {
  const ImuStream imu = read_imu_log(cfg.imu);
  if (imu.samples.size() < 2) {
    throw std::runtime_error("compare: IMU log too short");
  }
  const Trajectory truth = read_truth_any(cfg.truth);
  const Vec3 g = gravity_from(cfg.gravity_z);

  // Window boundaries: sample indices nearest to the reset grid.
  std::vector<std::size_t> bounds;
  if (cfg.reset_every > 0.0) {
    bounds = select_keyframes(imu.samples, 1.0 / cfg.reset_every);
  } else {
    bounds = {0, imu.samples.size() - 1};
  }

  CompareResult result;
  std::vector<double> rmse_c;
  std::vector<double> rmse_p;
  for (std::size_t m = 0; m + 1 < bounds.size(); ++m) {
    const std::size_t b0 = bounds[m];
    const std::size_t b1 = bounds[m + 1];
    const std::span<const ImuSample> window(imu.samples.data() + b0,
                                            b1 - b0 + 1);
    const auto idx = nearest_state(truth, imu.epoch_ns, imu.samples[b0].t);
    if (!idx) {
      ++result.dropped_windows;
      continue;
    }
    NavState x0 = truth.states[*idx];

    const auto kf = select_keyframes(window, cfg.keyframe_hz);
    ImuStream sub;
    sub.epoch_ns = imu.epoch_ns;
    sub.samples.assign(window.begin(), window.end());

    WindowStats stats;
    stats.t_start = imu.samples[b0].t;
    stats.t_end = imu.samples[b1].t;
    bool ok = true;
    for (const Model model : {Model::kClassical, Model::kProposed}) {
      const Trajectory est = integrate_keyframes(sub, kf, x0, model, g);
      const MatchedPairs matched = match_trajectories(est, truth);
      if (matched.pairs.empty()) {
        ok = false;
        break;
      }
      const ErrorReport report = compute_errors(est, truth, AlignmentResult{});
      stats.count = report.count;
      (model == Model::kClassical ? stats.rmse_classical
                                  : stats.rmse_proposed) = report.rmse;
    }
    if (!ok) {
      ++result.dropped_windows;
      continue;
    }
    result.windows.push_back(stats);
    rmse_c.push_back(stats.rmse_classical);
    rmse_p.push_back(stats.rmse_proposed);
  }

  if (result.windows.empty()) {
    throw std::runtime_error("compare: no window had usable ground truth");
  }
  result.median_rmse_classical = median(rmse_c);
  result.median_rmse_proposed = median(rmse_p);
  result.improvement_pct =
      result.median_rmse_classical > 0.0
          ? improvement_percent(result.median_rmse_classical,
                                result.median_rmse_proposed)
          : 0.0;

  ensure_out_dir(cfg.out_dir);
  std::string windows_text =
      "# slip-compare v1 cols=t_start,t_end,count,rmse_classical,"
      "rmse_proposed\n";
  for (const WindowStats& w : result.windows) {
    windows_text += detail::format_fixed9(w.t_start) + ',' +
                    detail::format_fixed9(w.t_end) + ',' +
                    std::to_string(w.count) + ',' +
                    detail::format_double(w.rmse_classical) + ',' +
                    detail::format_double(w.rmse_proposed) + '\n';
  }
  detail::atomic_write(cfg.out_dir / "windows.csv", windows_text);

  std::string summary;
  summary += "windows=" + std::to_string(result.windows.size()) + "\n";
  summary += "dropped_windows=" + std::to_string(result.dropped_windows) + "\n";
  summary += "median_rmse_classical=" +
             detail::format_double(result.median_rmse_classical) + "\n";
  summary += "median_rmse_proposed=" +
             detail::format_double(result.median_rmse_proposed) + "\n";
  summary +=
      "improvement_percent=" + detail::format_double(result.improvement_pct) +
      "\n";
  detail::atomic_write(cfg.out_dir / "summary.txt", summary);

  std::cout << "compare: " << result.windows.size() << " windows, median rmse "
            << result.median_rmse_classical << " (classical) vs "
            << result.median_rmse_proposed << " (proposed), improvement "
            << result.improvement_pct << "%\n";
  return result;
}

EvaluateResult cmd_evaluate(const EvaluateConfig& cfg) {
  const Trajectory est = read_trajectory(cfg.estimate);
  const Trajectory truth = read_truth_any(cfg.truth);

  EvaluateResult out;
  out.alignment = align_rigid(est, truth);
  out.report = compute_errors(est, truth, out.alignment);

  ensure_out_dir(cfg.out_dir);
  write_error_report(cfg.out_dir / "errors.csv", out.report);
  write_error_summary(cfg.out_dir / "summary.txt", out.report);

  std::cout << "evaluate: rmse " << out.report.rmse << " m over "
            << out.report.count << " matched states (" << out.report.dropped
            << " dropped)\n";
  return out;
}

}  // namespace slip::cli
