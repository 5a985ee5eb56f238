#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "forge/error.hpp"
#include "forge/task/task_model.hpp"

using namespace forge;

namespace {

MotionPoint at(Vec3 p, Action a = Action::TRAJECTORY) { return {p, std::nullopt, a}; }

bool has_code(const std::vector<Violation>& v, const std::string& code) {
  for (const Violation& x : v) {
    if (x.code == code) return true;
  }
  return false;
}

}  // namespace

TEST(AddPoint, FirstPickPlaceIsPick) {
  const TaskSpec s = TaskSpec{}.add_point(at(Vec3::Zero(), Action::PLACE));
  EXPECT_EQ(s.points()[0].action, Action::PICK);
}

TEST(AddPoint, SecondIsPlace) {
  const TaskSpec s = TaskSpec{}.add_point(at(Vec3::Zero(), Action::PICK)).add_point(at(Vec3::Ones(), Action::PICK));
  EXPECT_EQ(s.points()[1].action, Action::PLACE);
}

TEST(AddPoint, RolesAlternateAcrossOtherActions) {
  TaskSpec s;
  for (int i = 0; i < 9; ++i) {
    s = s.add_point(at(Vec3(i, 0, 0), i % 3 == 1 ? Action::TRAJECTORY : Action::PICK));
  }
  std::vector<Action> roles;
  for (const MotionPoint& p : s.points()) {
    if (p.action != Action::TRAJECTORY) roles.push_back(p.action);
  }
  for (std::size_t i = 0; i < roles.size(); ++i) EXPECT_EQ(roles[i], i % 2 == 0 ? Action::PICK : Action::PLACE);
  EXPECT_TRUE(validate(s).empty());
}

TEST(AddPoint, ValuesAreImmutable) {
  const TaskSpec a;
  const TaskSpec b = a.add_point(at(Vec3::Zero()));
  EXPECT_TRUE(a.points().empty());
  EXPECT_EQ(b.points().size(), 1u);
}

TEST(AddPoint, AttachNeedsSurface) {
  try {
    TaskSpec{}.add_point(at(Vec3::Zero(), Action::ATTACH));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AttachWithoutSurface);
  }
  const TaskSpec s = TaskSpec{}.with_surface({SurfaceKind::CYLINDER, Vec3::Zero(), Vec3::UnitZ(), {15, 40}});
  EXPECT_NO_THROW(s.add_point(at(Vec3::Zero(), Action::ATTACH)));
}

TEST(Loop, Threshold) {
  EXPECT_TRUE(TaskSpec{}.add_point(at(Vec3::Zero())).add_point(at(Vec3(0, 0, 49))).is_loop());
  EXPECT_FALSE(TaskSpec{}.add_point(at(Vec3::Zero())).add_point(at(Vec3(0, 0, 50))).is_loop());
  EXPECT_TRUE(TaskSpec{}.add_point(at(Vec3::Zero())).add_point(at(Vec3(0, 0, 49.999999))).is_loop());
  EXPECT_FALSE(TaskSpec{}.add_point(at(Vec3::Zero())).is_loop());
}

TEST(Validate, Examples) {
  const TaskSpec ok = TaskSpec::from_parts(
      {at(Vec3::Zero(), Action::PICK), at(Vec3::Ones(), Action::TRAJECTORY), at(Vec3(2, 2, 2), Action::PLACE)}, {});
  EXPECT_TRUE(validate(ok).empty());
  EXPECT_TRUE(has_code(validate(TaskSpec::from_parts({at(Vec3::Zero(), Action::PLACE)}, {})), "PlaceBeforePick"));
  EXPECT_TRUE(has_code(validate(TaskSpec::from_parts({at(Vec3::Zero(), Action::ATTACH)}, {})), "AttachWithoutSurface"));
  EXPECT_TRUE(has_code(validate(TaskSpec{}), "NoPoints"));
  EXPECT_TRUE(has_code(
      validate(TaskSpec::from_parts({at(Vec3::Zero(), Action::PICK), at(Vec3::Zero(), Action::PICK)}, {})),
      "PickWithoutPlace"));
  EXPECT_TRUE(has_code(validate(TaskSpec::from_parts({{Vec3::Zero(), Vec3(0, 0, 2), Action::TRAJECTORY}}, {})),
                       "NonUnitOrientation"));
  EXPECT_TRUE(has_code(
      validate(TaskSpec::from_parts({at(Vec3::Zero())}, AttachSurface{SurfaceKind::FLAT_PLANE, Vec3::Zero(),
                                                                      Vec3::UnitZ(), {10, -1}})),
      "InvalidSurface"));
}

TEST(ReferencePlane, FirstAndLater) {
  PartSplit part;
  part.transformable = fixture::bar(200, 20, 10);
  part.selection = {Axis::X, 0, 200};
  Plane p = reference_plane(TaskSpec{}, part);
  EXPECT_NEAR(p.origin.x(), 100.0, 1e-12);
  EXPECT_TRUE(p.normal.isApprox(Vec3::UnitX()));
  const TaskSpec s = TaskSpec{}.add_point(at(Vec3(30, 10, 5)));
  p = reference_plane(s, part);
  EXPECT_EQ(p.origin, Vec3(30, 10, 5));
  EXPECT_TRUE(p.normal.isApprox(Vec3::UnitX()));
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    part.selection.axis = a;
    EXPECT_NEAR(reference_plane(s, part).normal.norm(), 1.0, 1e-15);
    EXPECT_EQ(reference_plane(s, part).normal, unit_vector(a));
  }
}

TEST(Lift, ExamplesAndRoundTrip) {
  const Plane p = Plane::make(Vec3(5, 0, 0), Vec3::UnitX());
  EXPECT_TRUE(lift_to_3d(p, Vec2::Zero(), 0).isApprox(Vec3(5, 0, 0)));
  EXPECT_TRUE(lift_to_3d(p, Vec2::Zero(), 10).isApprox(Vec3(15, 0, 0)));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 500; ++i) {
    const Plane q = Plane::make(Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng)));
    const Vec2 xy(u(rng), u(rng));
    const double t = u(rng);
    const auto [back, off] = project_to_plane(q, lift_to_3d(q, xy, t));
    EXPECT_NEAR((back - xy).norm(), 0.0, 1e-9);
    EXPECT_NEAR(off, t, 1e-9);
  }
}
