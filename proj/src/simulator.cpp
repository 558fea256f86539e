#include "slip/simulator.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace slip {

namespace {

// Box-Muller over mt19937_64. std::normal_distribution is implementation
// defined; this pins the stream to the seed independent of the standard
// library.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  Vec3 vec(double std_dev) {
    const double x = (*this)();
    const double y = (*this)();
    const double z = (*this)();
    return std_dev * Vec3(x, y, z);
  }

 private:
  double uniform01() {  // (0, 1], keeps log() finite
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

long segment_steps(const SegmentSpec& seg, double rate_hz) {
  return std::lround(seg.duration * rate_hz);
}

}  // namespace

double ScenarioSpec::total_duration() const {
  double sum = 0.0;
  for (const auto& seg : segments) sum += seg.duration;
  return sum;
}

void ScenarioSpec::validate() const {
  if (!(imu_rate_hz > 0.0) || !std::isfinite(imu_rate_hz)) {
    throw std::invalid_argument("scenario: imu_rate_hz must be > 0");
  }
  if (segments.empty()) {
    throw std::invalid_argument("scenario: at least one segment required");
  }
  if (!is_finite(gravity)) {
    throw std::invalid_argument("scenario: gravity must be finite");
  }
  const double dt = 1.0 / imu_rate_hz;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const SegmentSpec& seg = segments[i];
    if (!(seg.duration > 0.0)) {
      throw std::invalid_argument("scenario: segment " + std::to_string(i) +
                                  " duration must be > 0");
    }
    if (!is_finite(seg.a_body) || !is_finite(seg.w_body)) {
      throw std::invalid_argument("scenario: segment " + std::to_string(i) +
                                  " has non-finite inputs");
    }
    const long n = segment_steps(seg, imu_rate_hz);
    if (n < 1 || std::abs(static_cast<double>(n) * dt - seg.duration) > 1e-9) {
      throw std::invalid_argument(
          "scenario: segment " + std::to_string(i) +
          " duration is not a multiple of the sample period");
    }
  }
  if (noise && (noise->gyro_std < 0.0 || noise->accel_std < 0.0)) {
    throw std::invalid_argument("scenario: noise std must be >= 0");
  }
}

SimResult generate(const ScenarioSpec& scenario, std::uint64_t seed) {
  scenario.validate();
  const double dt = 1.0 / scenario.imu_rate_hz;
  const double t0 = scenario.initial.t;

  SimResult out;
  out.truth.states.push_back(scenario.initial);
  GaussianRng rng(seed);

  NavState state = scenario.initial;
  long step_index = 0;
  for (const SegmentSpec& seg : scenario.segments) {
    const long n = segment_steps(seg, scenario.imu_rate_hz);
    for (long k = 0; k < n; ++k, ++step_index) {
      ImuSample sample;
      sample.t = t0 + static_cast<double>(step_index) * dt;
      sample.w = seg.w_body;
      sample.a = seg.a_body;
      if (scenario.noise) {
        sample.w += rng.vec(scenario.noise->gyro_std);
        sample.a += rng.vec(scenario.noise->accel_std);
      }
      out.samples.samples.push_back(sample);

      state = step_proposed(state, seg.a_body, seg.w_body, dt,
                            scenario.gravity);
      state.t = t0 + static_cast<double>(step_index + 1) * dt;
      out.truth.states.push_back(state);
    }
  }
  return out;
}

Trajectory fine_oracle(const ScenarioSpec& scenario, int substeps) {
  if (substeps < 10) {
    throw std::invalid_argument("fine_oracle: substeps must be >= 10");
  }
  scenario.validate();
  const double dt = 1.0 / scenario.imu_rate_hz;
  const double sub_dt = dt / static_cast<double>(substeps);
  const double t0 = scenario.initial.t;

  Trajectory truth;
  truth.states.push_back(scenario.initial);
  NavState state = scenario.initial;
  long step_index = 0;
  for (const SegmentSpec& seg : scenario.segments) {
    const long n = segment_steps(seg, scenario.imu_rate_hz);
    for (long k = 0; k < n; ++k, ++step_index) {
      for (int s = 0; s < substeps; ++s) {
        state = step_proposed(state, seg.a_body, seg.w_body, sub_dt,
                              scenario.gravity);
      }
      state.t = t0 + static_cast<double>(step_index + 1) * dt;
      truth.states.push_back(state);
    }
  }
  return truth;
}

namespace {

std::vector<double> parse_values(const std::string& rest, std::size_t want,
                                 const std::string& key, int line_no) {
  std::istringstream iss(rest);
  std::vector<double> vals;
  double v;
  while (iss >> v) vals.push_back(v);
  std::string trailing;
  if (iss.clear(), iss >> trailing) {
    throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                ": trailing junk after '" + key + "'");
  }
  if (vals.size() != want) {
    throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                ": '" + key + "' expects " +
                                std::to_string(want) + " values");
  }
  return vals;
}

}  // namespace

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file: " + path.string());
  }
  ScenarioSpec spec;
  spec.segments.clear();
  std::optional<double> gyro_std;
  std::optional<double> accel_std;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream iss(line);
    std::string key;
    if (!(iss >> key)) continue;
    std::string rest;
    std::getline(iss, rest);

    if (key == "imu_rate_hz") {
      spec.imu_rate_hz = parse_values(rest, 1, key, line_no)[0];
    } else if (key == "gravity") {
      const auto v = parse_values(rest, 3, key, line_no);
      spec.gravity = Vec3(v[0], v[1], v[2]);
    } else if (key == "noise_gyro_std") {
      gyro_std = parse_values(rest, 1, key, line_no)[0];
    } else if (key == "noise_accel_std") {
      accel_std = parse_values(rest, 1, key, line_no)[0];
    } else if (key == "initial_t") {
      spec.initial.t = parse_values(rest, 1, key, line_no)[0];
    } else if (key == "initial_p") {
      const auto v = parse_values(rest, 3, key, line_no);
      spec.initial.p = Vec3(v[0], v[1], v[2]);
    } else if (key == "initial_v") {
      const auto v = parse_values(rest, 3, key, line_no);
      spec.initial.v = Vec3(v[0], v[1], v[2]);
    } else if (key == "initial_r") {
      const auto v = parse_values(rest, 9, key, line_no);
      Mat3 R;
      R << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
      if (orthonormality_residual(R) > 1e-6) {
        throw std::invalid_argument("scenario line " +
                                    std::to_string(line_no) +
                                    ": initial_r is not a rotation");
      }
      spec.initial.R = nearest_rotation(R);
    } else if (key == "segment") {
      const auto v = parse_values(rest, 7, key, line_no);
      SegmentSpec seg;
      seg.duration = v[0];
      seg.a_body = Vec3(v[1], v[2], v[3]);
      seg.w_body = Vec3(v[4], v[5], v[6]);
      spec.segments.push_back(seg);
    } else {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  if (gyro_std || accel_std) {
    spec.noise = NoiseSpec{gyro_std.value_or(0.0), accel_std.value_or(0.0)};
  }
  spec.validate();
  return spec;
}

}  // namespace slip
