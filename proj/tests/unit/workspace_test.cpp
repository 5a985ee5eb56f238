#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "forge/error.hpp"
#include "forge/mesh/primitives.hpp"
#include "forge/workspace/workspace.hpp"
#include "oracles.hpp"

using namespace forge;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

DHRow joint(double a, double lo, double hi) {
  DHRow r;
  r.a = a;
  r.theta_range = {lo, hi};
  r.kind = JointKind::DRIVING;
  return r;
}

DHRow tool(double a) {
  DHRow r;
  r.a = a;
  r.kind = JointKind::END_EFFECTOR;
  return r;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no forge::Error thrown";
  return ErrorCode::IOFailure;
}

Workspace cloud_workspace(const std::vector<Vec3>& pts) {
  Workspace ws;
  for (const Vec3& p : pts) ws.samples.push_back({p, Vec3::UnitX(), {}});
  ws.hull = ConvexHull::build(pts);
  return ws;
}

Workspace unit_cube_workspace() {
  std::vector<Vec3> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  return cloud_workspace(pts);
}

ArmTemplate barrel_template() {
  const PartSplit split =
      bridge_disjoint(select_part(fixture::banded_cylinder(60, 200, 48, 10), {Axis::Z, 70, 130}), 0.0);
  const ShapeClass shape = classify_shape(split.transformable);
  SegmentationOptions opt;
  opt.static_box = bounding_box(concatenate(split.statics));
  const SegmentationResult seg = segment_nonslender(split.transformable, shape.principal_axis, opt);
  return build_template(split, shape, BaseMode::STATIC_IS_BASE, seg);
}

}  // namespace

TEST(SampleWorkspace, OneJointArc) {
  const std::vector<DHRow> rows{joint(0, -kPi / 2, kPi / 2), tool(100)};
  const Workspace ws = sample_workspace(rows, Pose::identity(), 5);
  ASSERT_EQ(ws.samples.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    const double th = -kPi / 2 + i * kPi / 4;
    EXPECT_LT((ws.samples[i].position - Vec3(100 * std::cos(th), 100 * std::sin(th), 0)).norm(), 1e-9);
  }
  EXPECT_EQ(ws.hull.dimension(), 2);
}

TEST(SampleWorkspace, ZeroLinksAreDegenerate) {
  const std::vector<DHRow> rows{joint(0, -1, 1), joint(0, -1, 1), tool(0)};
  EXPECT_EQ(code_of([&] { sample_workspace(rows, Pose::identity(), 5); }), ErrorCode::DegenerateWorkspace);
  EXPECT_EQ(code_of([&] { sample_workspace(rows, Pose::identity(), 1); }), ErrorCode::InvalidDesign);
}

TEST(SampleWorkspace, PlanarReach) {
  const std::vector<DHRow> rows{joint(0, -kPi, kPi), joint(100, -kPi, kPi), tool(80)};
  const Workspace ws = sample_workspace(rows, Pose::identity(), 15);
  EXPECT_EQ(ws.samples.size(), 225u);
  EXPECT_LE(ws.hull.distance(Vec3(180, 0, 0)), 1e-6);
  for (const Vec3& v : ws.hull.vertices()) EXPECT_LE(v.norm(), 180 + 1e-9);
  for (const WorkspaceSample& s : ws.samples) {
    const Eigen::Vector2d p = oracle::planar_two_link(100, 80, s.joint_values[0], s.joint_values[1]);
    EXPECT_LT((s.position - Vec3(p.x(), p.y(), 0)).norm(), 1e-9);
  }
}

TEST(SampleWorkspace, TemplateSamplesSatisfyFk) {
  const ArmTemplate t = barrel_template();
  const ArmConfiguration& c = t.configurations[0];
  const Workspace ws = sample_workspace(c, 8);
  EXPECT_EQ(ws.samples.size(), 4096u);
  for (const WorkspaceSample& s : ws.samples) {
    const Pose p = tool_pose(c, s.joint_values);
    EXPECT_LT((p.translation - s.position).norm(), 1e-9);
    EXPECT_LT((p.n() - s.n_axis).norm(), 1e-12);
    EXPECT_LE(ws.hull.signed_distance(s.position), 1e-6);
  }
}

TEST(FilterOrientation, ChordThreshold) {
  Workspace ws;
  const Vec3 dir = Vec3(1, 2, 2).normalized();
  const Vec3 perp = dir.cross(Vec3::UnitX()).normalized();
  auto rotated = [&](double deg) { return Eigen::AngleAxisd(deg * kDeg, perp) * dir; };
  for (double deg : {0.0, 28.9, 29.1, 180.0}) ws.samples.push_back({Vec3(deg, 0, 0), rotated(deg), {}});
  ws.samples.push_back({Vec3(0, 1, 0), -dir, {}});
  const Workspace f = filter_orientation(ws, dir);
  ASSERT_EQ(f.samples.size(), 2u);
  EXPECT_EQ(f.samples[0].position.x(), 0.0);
  EXPECT_EQ(f.samples[1].position.x(), 28.9);
  // 2 sin(theta/2) = 0.5 at about 28.955 degrees.
  EXPECT_NEAR(2 * std::asin(0.25) / kDeg, 28.955, 1e-3);
  EXPECT_EQ(filter_orientation(ws, dir, 2.0).samples.size(), ws.samples.size());
  Workspace only_back;
  only_back.samples.push_back({Vec3::Zero(), -dir, {}});
  EXPECT_EQ(code_of([&] { filter_orientation(only_back, dir); }), ErrorCode::NoMatchingOrientation);
}

TEST(FilterOrientation, SubsetOfInput) {
  const ArmTemplate t = barrel_template();
  const Workspace ws = sample_workspace(t.configurations[2], 6);
  const Workspace f = filter_orientation(ws, Vec3::UnitX());
  EXPECT_LE(f.samples.size(), ws.samples.size());
  for (const WorkspaceSample& s : f.samples) EXPECT_LE((s.n_axis - Vec3::UnitX()).norm(), 0.5);
}

TEST(EliminateCollisions, Examples) {
  ArmConfiguration c;
  c.dh_table = {joint(0, -kPi, kPi), joint(100, -kPi, kPi), tool(80)};
  c.joint_offsets = {0, 0, 0};
  const Workspace ws = sample_workspace(c, 13);
  const std::vector<Box3> far{{Vec3(1000, 1000, 1000), Vec3(1100, 1100, 1100)}};
  EXPECT_EQ(eliminate_collisions(ws, far, c).samples.size(), ws.samples.size());
  const std::vector<Box3> all{{Vec3(-500, -500, -500), Vec3(500, 500, 500)}};
  EXPECT_TRUE(eliminate_collisions(ws, all, c).empty());
  const std::vector<Box3> upper{{Vec3(-500, 0, -500), Vec3(500, 500, 500)}};
  const Workspace kept = eliminate_collisions(ws, upper, c);
  EXPECT_FALSE(kept.empty());
  std::size_t expected = 0;
  for (const WorkspaceSample& s : ws.samples) {
    const double t1 = s.joint_values[0], t2 = s.joint_values[1];
    const double elbow_y = 100 * std::sin(t1);
    const double tip_y = oracle::planar_two_link(100, 80, t1, t2).y();
    if (elbow_y <= 0 && tip_y <= 0) ++expected;
  }
  EXPECT_EQ(kept.samples.size(), expected);
  for (const WorkspaceSample& s : kept.samples) {
    EXPECT_LE(100 * std::sin(s.joint_values[0]), 1e-9);
    EXPECT_LE(s.position.y(), 1e-9);
  }
}

TEST(ScoreConfig, Examples) {
  const Workspace cube = cloud_workspace({Vec3(0, 0, 0), Vec3(100, 0, 0), Vec3(0, 100, 0), Vec3(100, 100, 0),
                                          Vec3(0, 0, 100), Vec3(100, 0, 100), Vec3(0, 100, 100),
                                          Vec3(100, 100, 100)});
  std::vector<MotionPoint> pts{{Vec3(50, 50, 50), std::nullopt, Action::TRAJECTORY},
                               {Vec3(20, 70, 10), std::nullopt, Action::TRAJECTORY}};
  EXPECT_EQ(score_config(cube, pts).rmse, 0.0);
  pts[1].position = Vec3(110, 50, 50);
  const ConfigScore s = score_config(cube, pts);
  EXPECT_NEAR(s.rmse, std::sqrt(50.0), 1e-9);
  EXPECT_NEAR(s.per_point_distance[1], 10.0, 1e-9);
  pts[0].position = Vec3(100, 100, 100);
  EXPECT_NEAR(score_config(cube, pts).per_point_distance[0], 0.0, 1e-6);
  EXPECT_EQ(code_of([&] { score_config(Workspace{}, pts); }), ErrorCode::EmptyWorkspace);
  // Nearest-sample mode measures to the corners.
  EXPECT_NEAR(score_config(cube, pts, ScoringMode::NEAREST_SAMPLE).per_point_distance[1], std::sqrt(100.0 + 2 * 2500),
              1e-9);
}

TEST(ScoreConfig, TranslationEquivariant) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-50, 50);
  std::vector<Vec3> cloud;
  for (int i = 0; i < 300; ++i) cloud.emplace_back(u(rng), u(rng), u(rng));
  std::vector<MotionPoint> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({Vec3(3 * u(rng), 3 * u(rng), 3 * u(rng)), std::nullopt, Action::TRAJECTORY});
  const double base = score_config(cloud_workspace(cloud), pts).rmse;
  const Vec3 shift(123.4, -56.7, 8.9);
  for (Vec3& p : cloud) p += shift;
  for (MotionPoint& p : pts) p.position += shift;
  EXPECT_NEAR(score_config(cloud_workspace(cloud), pts).rmse, base, 1e-9);
}

TEST(Snap, Examples) {
  const Workspace cube = unit_cube_workspace();
  EXPECT_EQ(snap_point(cube, Vec3(0.3, 0.4, 0.5)), Vec3(0.3, 0.4, 0.5));
  EXPECT_LT((snap_point(cube, Vec3(2, 0.5, 0.5)) - Vec3(1, 0.5, 0.5)).norm(), 1e-12);
  EXPECT_EQ(code_of([&] { snap_point(Workspace{}, Vec3::Zero()); }), ErrorCode::EmptyWorkspace);
}

TEST(Snap, RandomExteriorPoints) {
  std::mt19937 rng(8);
  std::normal_distribution<double> g(0, 30);
  std::vector<Vec3> cloud;
  for (int i = 0; i < 400; ++i) cloud.emplace_back(g(rng), 0.5 * g(rng), 0.3 * g(rng));
  const Workspace ws = cloud_workspace(cloud);
  std::uniform_real_distribution<double> u(-300, 300);
  int tested = 0;
  while (tested < 200) {
    const Vec3 p(u(rng), u(rng), u(rng));
    if (ws.hull.contains(p)) continue;
    ++tested;
    const Vec3 s = snap_point(ws, p);
    EXPECT_LE(ws.hull.signed_distance(s), 1e-6);
    EXPECT_LE((s - p).norm(), oracle::min_facet_distance(ws.hull.vertices(), ws.hull.facets(), p) + 1e-6);
    EXPECT_LT((snap_point(ws, s) - s).norm(), 1e-6);
  }
}

TEST(SelectConfiguration, AgreesWithBruteForce) {
  const ArmTemplate t = barrel_template();
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-200, 200), z(-50, 250);
  SearchOptions opt;
  opt.resolution = 7;
  const std::vector<Box3> obstacles;
  std::array<std::vector<Vec3>, kConfigCount> clouds;
  for (int c = 0; c < kConfigCount; ++c) {
    for (const WorkspaceSample& s : sample_workspace(t.configurations[c], opt.resolution).samples) {
      clouds[c].push_back(s.position);
    }
  }
  for (int task = 0; task < 5; ++task) {
    TaskSpec spec;
    for (int i = 0; i < 4; ++i) spec = spec.add_point({Vec3(u(rng), u(rng), z(rng)), std::nullopt, Action::TRAJECTORY});
    const ConfigChoice choice = select_configuration(t, spec, obstacles, opt);
    int best = -1;
    double best_rmse = 0.0;
    for (int c = 0; c < kConfigCount; ++c) {
      double sum = 0.0;
      for (const MotionPoint& p : spec.points()) sum += std::pow(oracle::gjk_distance(clouds[c], p.position), 2);
      const double rmse = std::sqrt(sum / spec.points().size());
      if (best < 0 || rmse < best_rmse - 1e-6) {
        best = c;
        best_rmse = rmse;
      }
    }
    EXPECT_EQ(choice.configuration.index, best);
    EXPECT_NEAR(choice.score.rmse, best_rmse, 1e-6);
  }
}

TEST(SelectConfiguration, TiesGoToLowestIndexAndInfeasible) {
  const ArmTemplate t = barrel_template();
  SearchOptions opt;
  opt.resolution = 5;
  const TaskSpec spec = TaskSpec{}.add_point({t.configurations[0].tool_point, std::nullopt, Action::TRAJECTORY});
  const ConfigChoice c = select_configuration(t, spec, {}, opt);
  EXPECT_EQ(c.configuration.index, 0);
  EXPECT_EQ(c.score.rmse, 0.0);
  const std::vector<Box3> everywhere{{Vec3::Constant(-1e4), Vec3::Constant(1e4)}};
  EXPECT_EQ(code_of([&] { select_configuration(t, spec, everywhere, opt); }), ErrorCode::AllConfigsInfeasible);
}

TEST(SelectConfiguration, RequireReachableSkipsPartialCover) {
  const ArmTemplate t = barrel_template();
  SearchOptions opt;
  opt.resolution = 5;
  // A point on config 1's workspace and far outside every workspace.
  const Vec3 inside = sample_workspace(t.configurations[1], opt.resolution).samples.back().position;
  const TaskSpec reachable = TaskSpec{}.add_point({inside, std::nullopt, Action::TRAJECTORY});
  const TaskSpec far = reachable.add_point({Vec3(1e4, 0, 0), std::nullopt, Action::TRAJECTORY});
  EXPECT_NO_THROW(select_configuration(t, far, {}, opt));
  opt.require_reachable = true;
  const ConfigChoice c = select_configuration(t, reachable, {}, opt);
  EXPECT_EQ(c.score.rmse, 0.0);
  // Unreachable configurations are still scored, only not chosen.
  ASSERT_TRUE(c.scores[1]);
  EXPECT_EQ(c.scores[1]->rmse, 0.0);
  EXPECT_EQ(code_of([&] { select_configuration(t, far, {}, opt); }), ErrorCode::AllConfigsInfeasible);
}

TEST(Obstacles, PerMode) {
  const PartSplit split = select_part(fixture::bar(200, 20, 10), {Axis::X, 75, 125});
  EXPECT_EQ(obstacles_for(split, BaseMode::STATIC_IS_BASE).size(), 2u);
  EXPECT_TRUE(obstacles_for(split, BaseMode::STATIC_IS_EE).empty());
}
