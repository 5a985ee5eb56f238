#include "forge/workspace/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "forge/error.hpp"

namespace forge {

namespace {

ConvexHull hull_of(const std::vector<WorkspaceSample>& samples) {
  if (samples.empty()) return {};
  std::vector<Vec3> pts;
  pts.reserve(samples.size());
  for (const WorkspaceSample& s : samples) pts.push_back(s.position);
  return ConvexHull::build(pts);
}

}  // namespace

Workspace sample_workspace(std::span<const DHRow> rows, const Pose& base, int resolution) {
  if (resolution < 2) fail(ErrorCode::InvalidDesign, "workspace resolution must be at least 2");
  std::vector<std::array<double, 2>> ranges;
  for (const DHRow& r : rows) {
    if (r.actuated()) ranges.push_back(r.theta_range);
  }
  const std::size_t dof = ranges.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < dof; ++k) total *= static_cast<std::size_t>(resolution);

  Workspace ws;
  ws.samples.resize(total);
  auto fill = [&](std::size_t begin, std::size_t end) {
    std::vector<double> values(dof);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rem = idx;
      // Last joint varies fastest.
      for (std::size_t k = dof; k-- > 0;) {
        const std::size_t step = rem % resolution;
        rem /= resolution;
        values[k] = ranges[k][0] + (ranges[k][1] - ranges[k][0]) * static_cast<double>(step) / (resolution - 1);
      }
      const Pose p = base * forward_kinematics(rows, values);
      ws.samples[idx] = {p.translation, p.n(), values};
    }
  };
  const std::size_t workers =
      total < 4096 ? 1 : std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  std::vector<std::thread> pool;
  const std::size_t chunk = (total + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back(fill, std::min(total, w * chunk), std::min(total, (w + 1) * chunk));
  }
  fill(0, std::min(total, chunk));
  for (std::thread& t : pool) t.join();

  ws.hull = hull_of(ws.samples);
  if (ws.hull.dimension() == 0) {
    fail(ErrorCode::DegenerateWorkspace, "all workspace samples coincide");
  }
  return ws;
}

Workspace sample_workspace(const ArmConfiguration& config, int resolution) {
  return sample_workspace(config.dh_table, config.base_frame, resolution);
}

Workspace filter_orientation(const Workspace& ws, const Vec3& dir, double threshold) {
  Workspace out;
  for (const WorkspaceSample& s : ws.samples) {
    if ((s.n_axis - dir).norm() <= threshold) out.samples.push_back(s);
  }
  if (out.samples.empty()) fail(ErrorCode::NoMatchingOrientation, "no sample matches the requested orientation");
  out.hull = hull_of(out.samples);
  return out;
}

Workspace eliminate_collisions(const Workspace& ws, std::span<const Box3> obstacles, const ArmConfiguration& config,
                               double margin) {
  if (obstacles.empty()) return ws;
  Workspace out;
  for (const WorkspaceSample& s : ws.samples) {
    const std::vector<Vec3> joints = joint_positions(config, s.joint_values);
    bool hit = false;
    for (const Vec3& j : joints) {
      for (const Box3& b : obstacles) {
        if (b.inflated(margin).strictly_contains(j)) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (!hit) out.samples.push_back(s);
  }
  out.hull = hull_of(out.samples);
  return out;
}

namespace {

double point_distance(const Workspace& ws, const Vec3& p, ScoringMode mode) {
  if (mode == ScoringMode::SURFACE) return ws.hull.distance(p);
  double best = std::numeric_limits<double>::infinity();
  for (const WorkspaceSample& s : ws.samples) best = std::min(best, (s.position - p).squaredNorm());
  return std::sqrt(best);
}

struct VecLess {
  bool operator()(const Vec3& a, const Vec3& b) const {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  }
};

}  // namespace

ConfigScore score_config(const Workspace& ws, std::span<const MotionPoint> points, ScoringMode mode) {
  if (ws.empty()) fail(ErrorCode::EmptyWorkspace, "cannot score an empty workspace");
  ConfigScore score;
  std::map<Vec3, Workspace, VecLess> filtered;
  double sum = 0.0;
  for (const MotionPoint& p : points) {
    double d;
    if (p.orientation) {
      auto it = filtered.find(*p.orientation);
      if (it == filtered.end()) it = filtered.emplace(*p.orientation, filter_orientation(ws, *p.orientation)).first;
      d = point_distance(it->second, p.position, mode);
    } else {
      d = point_distance(ws, p.position, mode);
    }
    score.per_point_distance.push_back(d);
    sum += d * d;
  }
  score.rmse = points.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(points.size()));
  return score;
}

std::vector<Box3> obstacles_for(const PartSplit& split, BaseMode mode) {
  std::vector<Box3> out;
  if (mode != BaseMode::STATIC_IS_BASE) return out;
  for (const Mesh& m : split.statics) out.push_back(bounding_box(m));
  return out;
}

ConfigChoice select_configuration(const ArmTemplate& tpl, const TaskSpec& spec, std::span<const Box3> obstacles,
                                  const SearchOptions& options) {
  std::optional<ConfigChoice> best;
  std::array<std::optional<ConfigScore>, kConfigCount> scores;
  for (int c = 0; c < kConfigCount; ++c) {
    const ArmConfiguration& config = tpl.configurations[c];
    Workspace ws = eliminate_collisions(sample_workspace(config, options.resolution), obstacles, config);
    if (ws.empty()) continue;
    ConfigScore score;
    try {
      score = score_config(ws, spec.points(), options.mode);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoMatchingOrientation) continue;
      throw;
    }
    score.config_index = c;
    scores[c] = score;
    if (options.require_reachable &&
        std::any_of(score.per_point_distance.begin(), score.per_point_distance.end(), [](double d) { return d > 0.0; })) {
      continue;
    }
    if (!best || score.rmse < best->score.rmse - options.tie_tolerance) {
      best = ConfigChoice{config, score, std::move(ws), {}};
    }
  }
  if (!best) fail(ErrorCode::AllConfigsInfeasible, options.require_reachable ? "no configuration reaches every motion point" : "no configuration has a usable workspace");
  best->scores = scores;
  return std::move(*best);
}

Vec3 snap_point(const Workspace& ws, const Vec3& p) {
  if (ws.empty()) fail(ErrorCode::EmptyWorkspace, "cannot snap to an empty workspace");
  if (ws.hull.contains(p)) return p;
  return ws.hull.closest_surface_point(p);
}

bool inside_workspace(const Workspace& ws, const Vec3& p) { return !ws.empty() && ws.hull.contains(p); }

}  // namespace forge
