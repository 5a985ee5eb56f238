#include "forge/fabrication/trajectory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "forge/error.hpp"

namespace forge {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Kinematic {
  Vec3 position;
  Vec3 n;
  Eigen::Matrix<double, 3, Eigen::Dynamic> jp;  // d position / d value
  Eigen::Matrix<double, 3, Eigen::Dynamic> jn;  // d n / d value
};

Kinematic evaluate(const ArmConfiguration& config, const std::vector<double>& values) {
  const auto frames = frame_chain(config.dh_table, values);
  const Pose tool = config.base_frame * frames.back();
  Kinematic k;
  k.position = tool.translation;
  k.n = tool.n();
  const int count = static_cast<int>(values.size());
  k.jp.resize(3, count);
  k.jn.resize(3, count);
  int col = 0;
  for (std::size_t r = 0; r < config.dh_table.size() && col < count; ++r) {
    if (!config.dh_table[r].actuated()) continue;
    // Theta of row r turns frame r about its own z axis.
    const Pose f = config.base_frame * frames[r];
    const Vec3 z = f.a();
    k.jp.col(col) = z.cross(k.position - f.translation);
    k.jn.col(col) = z.cross(k.n);
    ++col;
  }
  return k;
}

std::vector<std::array<double, 2>> ranges_of(const ArmConfiguration& config) {
  std::vector<std::array<double, 2>> out;
  for (const DHRow& row : config.dh_table) {
    if (row.actuated()) out.push_back(row.theta_range);
  }
  return out;
}

void clamp_to(std::vector<double>& q, const std::vector<std::array<double, 2>>& ranges) {
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::clamp(q[i], ranges[i][0], ranges[i][1]);
}

// One damped least-squares run. With a direction the n axis is pulled toward
// it first, then the position is polished on its own.
IkResult refine(const ArmConfiguration& config, const Vec3& target, const std::optional<Vec3>& direction,
                std::vector<double> q, const IkOptions& opt) {
  const auto ranges = ranges_of(config);
  clamp_to(q, ranges);
  const double lambda2 = opt.damping * opt.damping;
  const int n = static_cast<int>(q.size());

  auto step = [&](bool with_orientation) {
    const Kinematic k = evaluate(config, q);
    const Vec3 ep = target - k.position;
    Eigen::MatrixXd j;
    Eigen::VectorXd e;
    if (with_orientation) {
      j.resize(6, n);
      e.resize(6);
      j.topRows(3) = k.jp;
      j.bottomRows(3) = opt.orientation_weight * k.jn;
      e.head(3) = ep;
      e.tail(3) = opt.orientation_weight * (*direction - k.n);
    } else {
      j = k.jp;
      e = ep;
    }
    const Eigen::MatrixXd jjt = j * j.transpose() + lambda2 * Eigen::MatrixXd::Identity(j.rows(), j.rows());
    Eigen::VectorXd dq = j.transpose() * jjt.ldlt().solve(e);
    // Large steps overshoot far from the solution.
    const double norm = dq.norm();
    if (norm > 0.5) dq *= 0.5 / norm;
    for (int i = 0; i < n; ++i) q[i] += dq[i];
    clamp_to(q, ranges);
    return ep.norm();
  };

  if (direction) {
    for (int it = 0; it < opt.max_iterations; ++it) step(true);
  }
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (step(false) <= opt.tolerance) break;
  }
  return {q, (target - evaluate(config, q).position).norm()};
}

double max_delta(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

IkResult solve_ik(const ArmConfiguration& config, const Vec3& target, const std::optional<Vec3>& direction,
                  std::span<const std::vector<double>> seeds, const std::vector<double>& previous,
                  const IkOptions& options) {
  // Solutions this close count as exact; among them the smallest move wins.
  constexpr double kConverged = 1e-6;
  std::optional<IkResult> best;
  double best_move = std::numeric_limits<double>::infinity();
  for (const auto& seed : seeds) {
    IkResult r = refine(config, target, direction, seed, options);
    const double move = previous.empty() ? 0.0 : max_delta(r.values, previous);
    const bool converged = r.residual <= kConverged;
    if (!best) {
      best = r;
      best_move = move;
      continue;
    }
    const bool best_converged = best->residual <= kConverged;
    if ((converged && !best_converged) || (converged && best_converged && move < best_move) ||
        (!converged && !best_converged && r.residual < best->residual)) {
      best = r;
      best_move = move;
    }
  }
  if (!best || best->residual > options.divergence) {
    fail(ErrorCode::IKDivergence, "inverse kinematics left a residual of " +
                                      std::to_string(best ? best->residual : 0.0) + " mm");
  }
  return *best;
}

JointTrajectory plan_trajectory(const ArmConfiguration& config, const Workspace& ws, const TaskSpec& spec,
                                double speed_deg_s, const IkOptions& options, std::span<const std::size_t> approximate) {
  if (ws.empty()) fail(ErrorCode::EmptyWorkspace, "cannot plan in an empty workspace");
  if (!(speed_deg_s > 0.0)) fail(ErrorCode::InvalidDesign, "joint speed must be positive");

  JointTrajectory out;
  out.waypoints.push_back({0.0, rest_values(config.dh_table), "REST", 0.0});

  const auto& points = spec.points();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const MotionPoint& p = points[i];
    if (!inside_workspace(ws, p.position)) {
      fail(ErrorCode::PointOutsideWorkspace, "motion point " + std::to_string(i) + " lies outside the workspace");
    }
    // Seeds: the previous waypoint, then the nearest samples (orientation
    // matches first when a direction is given).
    std::vector<std::pair<double, std::size_t>> near;
    near.reserve(ws.samples.size());
    for (std::size_t s = 0; s < ws.samples.size(); ++s) {
      double d = (ws.samples[s].position - p.position).squaredNorm();
      if (p.orientation && (ws.samples[s].n_axis - *p.orientation).norm() > kOrientationThreshold) d += 1e12;
      near.emplace_back(d, s);
    }
    const std::size_t k = std::min<std::size_t>(options.seeds, near.size());
    std::partial_sort(near.begin(), near.begin() + k, near.end());

    const std::vector<double>& previous = out.waypoints.back().angles;
    std::vector<std::vector<double>> seeds{previous};
    for (std::size_t s = 0; s < k; ++s) seeds.push_back(ws.samples[near[s].second].joint_values);

    IkOptions opt = options;
    if (std::find(approximate.begin(), approximate.end(), i) != approximate.end()) {
      opt.divergence = std::numeric_limits<double>::infinity();
    }
    const IkResult r = solve_ik(config, p.position, p.orientation, seeds, previous, opt);
    const double dt = std::max(max_delta(r.values, previous) * kRadToDeg / speed_deg_s, kMinSegmentTime);
    out.waypoints.push_back({out.waypoints.back().time + dt, r.values, std::string(to_string(p.action)), r.residual});
  }
  return out;
}

std::string trajectory_csv(const JointTrajectory& trajectory) {
  std::string out = "t_s,j1_deg,j2_deg,j3_deg,j4_deg,action\n";
  char buf[64];
  for (const Waypoint& w : trajectory.waypoints) {
    std::snprintf(buf, sizeof buf, "%.3f", w.time);
    out += buf;
    for (double a : w.angles) {
      std::snprintf(buf, sizeof buf, ",%.4f", a * kRadToDeg);
      out += buf;
    }
    out += ',';
    out += w.action;
    out += '\n';
  }
  return out;
}

}  // namespace forge
