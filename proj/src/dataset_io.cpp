#include "slip/dataset_io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <Eigen/Geometry>

#include "slip/so3.hpp"

namespace slip {

namespace detail {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_fixed9(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 9);
  return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    }
    out << text;
    out.flush();
    if (!out) {
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

}  // namespace detail

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  for (std::string& f : fields) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    f = (b == std::string::npos) ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

[[noreturn]] void fail_line(const std::filesystem::path& path, int line_no,
                            const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                           ": " + what);
}

double parse_double(const std::string& s, const std::filesystem::path& path,
                    int line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail_line(path, line_no, "bad numeric field '" + s + "'");
  }
  return v;
}

std::int64_t parse_ns(const std::string& s, const std::filesystem::path& path,
                      int line_no) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail_line(path, line_no, "bad timestamp field '" + s + "'");
  }
  return v;
}

double rebase_seconds(std::int64_t stamp_ns, std::int64_t epoch_ns) {
  return static_cast<double>(stamp_ns - epoch_ns) * 1e-9;
}

// Rows that survive '#' stripping and are non-blank.
template <typename Fn>
void for_each_data_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open: " + path.string());
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = line;
    if (const auto b = stripped.find_first_not_of(" \t");
        b == std::string::npos || stripped[b] == '#') {
      continue;
    }
    fn(line, line_no);
  }
}

}  // namespace

ImuStream read_imu_log(const std::filesystem::path& path,
                       std::optional<std::int64_t> epoch_ns) {
  ImuStream out;
  bool have_epoch = epoch_ns.has_value();
  if (have_epoch) out.epoch_ns = *epoch_ns;
  std::int64_t prev_ns = 0;
  bool have_prev = false;

  for_each_data_line(path, [&](const std::string& line, int line_no) {
    const auto f = split_csv(line);
    if (f.size() != 7) {
      fail_line(path, line_no,
                "expected 7 fields, got " + std::to_string(f.size()));
    }
    const std::int64_t ns = parse_ns(f[0], path, line_no);
    if (have_prev && ns <= prev_ns) {
      fail_line(path, line_no, "non-monotone timestamp");
    }
    prev_ns = ns;
    have_prev = true;
    if (!have_epoch) {
      out.epoch_ns = ns;
      have_epoch = true;
    }
    ImuSample s;
    s.t = rebase_seconds(ns, out.epoch_ns);
    s.w = Vec3(parse_double(f[1], path, line_no),
               parse_double(f[2], path, line_no),
               parse_double(f[3], path, line_no));
    s.a = Vec3(parse_double(f[4], path, line_no),
               parse_double(f[5], path, line_no),
               parse_double(f[6], path, line_no));
    out.samples.push_back(s);
  });
  return out;
}

void write_imu_log(const std::filesystem::path& path, const ImuStream& imu) {
  std::string text =
      "#timestamp [ns],w_RS_S_x [rad s^-1],w_RS_S_y [rad s^-1],"
      "w_RS_S_z [rad s^-1],a_RS_S_x [m s^-2],a_RS_S_y [m s^-2],"
      "a_RS_S_z [m s^-2]\n";
  for (const ImuSample& s : imu.samples) {
    const std::int64_t ns = imu.epoch_ns + std::llround(s.t * 1e9);
    text += std::to_string(ns);
    for (const double v : {s.w.x(), s.w.y(), s.w.z(), s.a.x(), s.a.y(),
                           s.a.z()}) {
      text += ',';
      text += detail::format_double(v);
    }
    text += '\n';
  }
  detail::atomic_write(path, text);
}

Trajectory read_groundtruth(const std::filesystem::path& path,
                            std::optional<std::int64_t> epoch_ns) {
  Trajectory out;
  bool have_epoch = epoch_ns.has_value();
  if (have_epoch) out.epoch_ns = *epoch_ns;
  std::int64_t prev_ns = 0;
  bool have_prev = false;

  for_each_data_line(path, [&](const std::string& line, int line_no) {
    const auto f = split_csv(line);
    if (f.size() < 11) {
      fail_line(path, line_no,
                "expected at least 11 fields, got " + std::to_string(f.size()));
    }
    const std::int64_t ns = parse_ns(f[0], path, line_no);
    if (have_prev && ns <= prev_ns) {
      fail_line(path, line_no, "non-monotone timestamp");
    }
    prev_ns = ns;
    have_prev = true;
    if (!have_epoch) {
      out.epoch_ns = ns;
      have_epoch = true;
    }
    NavState x;
    x.t = rebase_seconds(ns, out.epoch_ns);
    x.p = Vec3(parse_double(f[1], path, line_no),
               parse_double(f[2], path, line_no),
               parse_double(f[3], path, line_no));
    const double qw = parse_double(f[4], path, line_no);
    const double qx = parse_double(f[5], path, line_no);
    const double qy = parse_double(f[6], path, line_no);
    const double qz = parse_double(f[7], path, line_no);
    Eigen::Quaterniond q(qw, qx, qy, qz);
    if (std::abs(q.norm() - 1.0) > 1e-3) {
      fail_line(path, line_no, "quaternion norm deviates beyond 1e-3");
    }
    q.normalize();
    x.R = q.toRotationMatrix();
    x.v = Vec3(parse_double(f[8], path, line_no),
               parse_double(f[9], path, line_no),
               parse_double(f[10], path, line_no));
    out.states.push_back(x);
  });
  return out;
}

void write_groundtruth(const std::filesystem::path& path,
                       const Trajectory& traj) {
  std::string text =
      "#timestamp [ns],p_RS_R_x [m],p_RS_R_y [m],p_RS_R_z [m],q_RS_w [],"
      "q_RS_x [],q_RS_y [],q_RS_z [],v_RS_R_x [m s^-1],v_RS_R_y [m s^-1],"
      "v_RS_R_z [m s^-1]\n";
  for (const NavState& x : traj.states) {
    const std::int64_t ns = traj.epoch_ns + std::llround(x.t * 1e9);
    const Eigen::Quaterniond q(x.R);
    text += std::to_string(ns);
    for (const double v :
         {x.p.x(), x.p.y(), x.p.z(), q.w(), q.x(), q.y(), q.z(), x.v.x(),
          x.v.y(), x.v.z()}) {
      text += ',';
      text += detail::format_double(v);
    }
    text += '\n';
  }
  detail::atomic_write(path, text);
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open: " + path.string());
  }
  Trajectory out;
  std::string header;
  if (!std::getline(in, header) || header.rfind("# slip-traj v1", 0) != 0) {
    throw std::runtime_error(path.string() + ": missing slip-traj v1 header");
  }
  if (const auto pos = header.find("epoch_ns="); pos != std::string::npos) {
    out.epoch_ns = std::stoll(header.substr(pos + 9));
  }
  std::string line;
  int line_no = 1;
  double prev_t = 0.0;
  bool have_prev = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv(line);
    if (f.size() != 16) {
      fail_line(path, line_no,
                "expected 16 fields, got " + std::to_string(f.size()));
    }
    NavState x;
    x.t = parse_double(f[0], path, line_no);
    if (have_prev && x.t <= prev_t) {
      fail_line(path, line_no, "non-monotone timestamp");
    }
    prev_t = x.t;
    have_prev = true;
    x.p = Vec3(parse_double(f[1], path, line_no),
               parse_double(f[2], path, line_no),
               parse_double(f[3], path, line_no));
    x.v = Vec3(parse_double(f[4], path, line_no),
               parse_double(f[5], path, line_no),
               parse_double(f[6], path, line_no));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        x.R(r, c) = parse_double(f[7 + 3 * r + c], path, line_no);
      }
    }
    if (!is_rotation(x.R, 1e-6)) {
      fail_line(path, line_no, "rotation block is not orthonormal");
    }
    out.states.push_back(x);
  }
  return out;
}

void write_trajectory(const std::filesystem::path& path,
                      const Trajectory& traj) {
  std::string text = "# slip-traj v1 epoch_ns=" +
                     std::to_string(traj.epoch_ns) +
                     " cols=t,px,py,pz,vx,vy,vz,r11,r12,r13,r21,r22,r23,"
                     "r31,r32,r33\n";
  for (const NavState& x : traj.states) {
    text += detail::format_fixed9(x.t);
    for (const double v : {x.p.x(), x.p.y(), x.p.z(), x.v.x(), x.v.y(),
                           x.v.z(), x.R(0, 0), x.R(0, 1), x.R(0, 2), x.R(1, 0),
                           x.R(1, 1), x.R(1, 2), x.R(2, 0), x.R(2, 1),
                           x.R(2, 2)}) {
      text += ',';
      text += detail::format_double(v);
    }
    text += '\n';
  }
  detail::atomic_write(path, text);
}

std::vector<std::size_t> select_keyframes(std::span<const ImuSample> samples,
                                          double rate_hz) {
  if (!(rate_hz > 0.0)) {
    throw std::invalid_argument("select_keyframes: rate_hz must be > 0");
  }
  if (samples.empty()) {
    throw std::invalid_argument("select_keyframes: empty sample span");
  }
  std::vector<std::size_t> idx;
  const double t0 = samples.front().t;
  const double t_last = samples.back().t;
  if (samples.size() > 1) {
    const double span = t_last - t0;
    const double stream_rate = static_cast<double>(samples.size() - 1) / span;
    if (rate_hz > stream_rate * (1.0 + 1e-9)) {
      throw std::invalid_argument(
          "select_keyframes: rate_hz exceeds the stream sample rate");
    }
  }

  const double period = 1.0 / rate_hz;
  std::size_t cursor = 0;
  for (long m = 0;; ++m) {
    const double target = t0 + static_cast<double>(m) * period;
    if (target > t_last + 0.5 * period) break;
    while (cursor + 1 < samples.size() &&
           std::abs(samples[cursor + 1].t - target) <=
               std::abs(samples[cursor].t - target)) {
      ++cursor;
    }
    if (idx.empty() || idx.back() != cursor) idx.push_back(cursor);
    if (cursor + 1 >= samples.size()) break;
  }
  if (idx.back() != samples.size() - 1) idx.push_back(samples.size() - 1);
  return idx;
}

MatchedPairs match_trajectories(const Trajectory& a, const Trajectory& b,
                                double tol_s) {
  MatchedPairs out;
  if (b.states.empty()) {
    out.dropped = a.states.size();
    return out;
  }
  // Offset between the two time bases, exact in integer nanoseconds.
  const double base_shift =
      static_cast<double>(a.epoch_ns - b.epoch_ns) * 1e-9;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const double target = a.states[i].t + base_shift;
    while (cursor + 1 < b.states.size() &&
           std::abs(b.states[cursor + 1].t - target) <=
               std::abs(b.states[cursor].t - target)) {
      ++cursor;
    }
    if (std::abs(b.states[cursor].t - target) <= tol_s) {
      out.pairs.emplace_back(i, cursor);
    } else {
      ++out.dropped;
    }
  }
  return out;
}

}  // namespace slip
