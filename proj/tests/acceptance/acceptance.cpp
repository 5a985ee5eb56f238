// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "forge/app/pipeline.hpp"
#include "forge/mesh/mesh_io.hpp"
#include "forge/mesh/primitives.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records one check; the first failing one is listed first in the detail.
  void check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
    pass = pass && ok;
  }
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
  std::fflush(stdout);
}

// Tool position by chaining the oracle matrices; locked rows keep theta.
Vec3 oracle_fk(std::span<const DHRow> rows, const Pose& base, std::span<const double> values) {
  Eigen::Matrix4d m = base.matrix();
  std::size_t k = 0;
  for (const DHRow& r : rows) m = m * oracle::dh_matrix(r.a, r.alpha, r.d, r.actuated() ? values[k++] : r.theta);
  return m.block<3, 1>(0, 3);
}

ArmTemplate template_for(const Mesh& mesh, const SweepSelection& sel, BaseMode mode) {
  return build_arm(run_selection(mesh, sel), mode).second;
}

std::vector<Vec3> positions(const Workspace& ws) {
  std::vector<Vec3> out;
  for (const WorkspaceSample& s : ws.samples) out.push_back(s.position);
  return out;
}

double spread(const std::vector<Mesh>& links) {
  double lo = 1e300, hi = -1e300, sum = 0.0;
  for (const Mesh& m : links) {
    const double v = oracle::divergence_volume(m);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  return (hi - lo) / (sum / static_cast<double>(links.size()));
}

double sum_volume(const std::vector<Mesh>& parts) {
  double s = 0.0;
  for (const Mesh& m : parts) s += oracle::divergence_volume(m);
  return s;
}

Outcome dh_fk() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> len(-500, 500), ang(-2 * std::numbers::pi, 2 * std::numbers::pi);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    DHRow r;
    r.a = len(rng);
    r.alpha = ang(rng);
    r.d = len(rng);
    r.theta = ang(rng);
    worst = std::max(worst, (dh_transform(r).matrix() - oracle::dh_matrix(r.a, r.alpha, r.d, r.theta)).cwiseAbs().maxCoeff());
  }
  o.check(worst <= 1e-12, fmt::format("dh max abs err {:.2e} (<= 1e-12)", worst));

  std::vector<DHRow> planar(3);
  planar[1].a = 100;
  planar[2].a = 80;
  planar[2].kind = JointKind::END_EFFECTOR;
  double planar_err = 0.0;
  std::uniform_real_distribution<double> q(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> v{q(rng), q(rng)};
    const Vec3 p = forward_kinematics(planar, v).translation;
    const Eigen::Vector2d expect = oracle::planar_two_link(100, 80, v[0], v[1]);
    planar_err = std::max(planar_err, (p - Vec3(expect.x(), expect.y(), 0)).norm());
  }
  const Vec3 p = forward_kinematics(planar, std::vector<double>{30 * kDeg, 45 * kDeg}).translation;
  const Vec3 expect(100 * std::cos(30 * kDeg) + 80 * std::cos(75 * kDeg), 100 * std::sin(30 * kDeg) + 80 * std::sin(75 * kDeg), 0);
  planar_err = std::max(planar_err, (p - expect).norm());
  o.check(planar_err <= 1e-9, fmt::format("planar 2-link err {:.2e} mm (<= 1e-9)", planar_err));
  const double t = seconds_since(t0);
  o.check(t < 1.0, fmt::format("{:.3f} s (< 1 s)", t));
  return o;
}

Outcome workspace_integrity() {
  Outcome o;
  const ArmTemplate t = template_for(fixture::spatula(), {Axis::X, 0, 230}, BaseMode::STATIC_IS_EE);
  const auto t0 = Clock::now();
  std::array<Workspace, kConfigCount> ws;
  for (int c = 0; c < kConfigCount; ++c) ws[c] = sample_workspace(t.masked_rows(c), t.base_frame, 15);
  const double elapsed = seconds_since(t0);

  double fk_err = 0.0, containment = -1e300;
  std::size_t count = 0;
  for (int c = 0; c < kConfigCount; ++c) {
    const auto rows = t.masked_rows(c);
    for (const WorkspaceSample& s : ws[c].samples) {
      fk_err = std::max(fk_err, (oracle_fk(rows, t.base_frame, s.joint_values) - s.position).norm());
      containment = std::max(containment, ws[c].hull.signed_distance(s.position));
      ++count;
    }
  }
  o.check(count == 3u * 15 * 15 * 15 * 15, fmt::format("{} samples", count));
  o.check(fk_err <= 1e-9, fmt::format("FK re-evaluation err {:.2e} mm (<= 1e-9)", fk_err));
  o.check(containment <= 1e-6, fmt::format("max hull signed distance {:.2e} mm (<= 1e-6)", containment));
  o.check(elapsed < 10.0, fmt::format("3-config sampling {:.2f} s (< 10 s)", elapsed));
  return o;
}

Outcome orientation_filter() {
  Outcome o;
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  int wrong = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 dir = Vec3(g(rng), g(rng), g(rng)).normalized();
    const Vec3 perp = dir.cross(Vec3(g(rng), g(rng), g(rng))).normalized();
    Workspace ws;
    ws.samples.push_back({Vec3(28.9, 0, 0), Eigen::AngleAxisd(28.9 * kDeg, perp) * dir, {}});
    ws.samples.push_back({Vec3(29.1, 0, 0), Eigen::AngleAxisd(29.1 * kDeg, perp) * dir, {}});
    const Workspace f = filter_orientation(ws, dir);
    if (f.samples.size() != 1 || f.samples[0].position.x() != 28.9) ++wrong;
  }
  o.check(wrong == 0, fmt::format("28.9 deg kept and 29.1 deg dropped in {}/100 random frames", 100 - wrong));
  // Exactly at the chord threshold the sample stays.
  const double edge = 2.0 * std::asin(0.25);
  Workspace ws;
  ws.samples.push_back({Vec3::Zero(), Vec3(std::cos(edge), std::sin(edge), 0), {}});
  const double chord = (ws.samples[0].n_axis - Vec3::UnitX()).norm();
  const bool kept = !filter_orientation(ws, Vec3::UnitX(), chord).samples.empty();
  o.check(kept, "|n - dir| == threshold retained");
  return o;
}

Outcome configuration_selection() {
  Outcome o;
  const ArmTemplate t = template_for(fixture::piggybank(), {Axis::Z, 70, 130}, BaseMode::STATIC_IS_BASE);
  SearchOptions opt;
  opt.resolution = 9;
  std::array<std::vector<Vec3>, kConfigCount> clouds;
  for (int c = 0; c < kConfigCount; ++c) clouds[c] = positions(sample_workspace(t.configurations[c], opt.resolution));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-220, 220), z(-80, 300);
  int agree = 0, ties = 0;
  for (int task = 0; task < 20; ++task) {
    TaskSpec spec;
    for (int i = 0; i < 4; ++i) {
      // Every fourth task sits on the rest tool point, a sample of all three
      // workspaces (odd resolution, ranges centred on rest).
      const Vec3 p = task % 4 == 3 ? t.configurations[0].tool_point : Vec3(u(rng), u(rng), z(rng));
      spec = spec.add_point({p, std::nullopt, Action::TRAJECTORY});
    }
    const ConfigChoice choice = select_configuration(t, spec, {}, opt);
    int best = -1;
    double best_rmse = 0.0;
    bool tie = false;
    for (int c = 0; c < kConfigCount; ++c) {
      double sum = 0.0;
      for (const MotionPoint& p : spec.points()) sum += std::pow(oracle::gjk_distance(clouds[c], p.position), 2);
      const double rmse = std::sqrt(sum / static_cast<double>(spec.points().size()));
      if (best >= 0 && std::abs(rmse - best_rmse) <= 1e-6) tie = true;
      if (best < 0 || rmse < best_rmse - 1e-6) {
        best = c;
        best_rmse = rmse;
      }
    }
    ties += tie;
    if (choice.configuration.index == best && std::abs(choice.score.rmse - best_rmse) <= 1e-6) ++agree;
  }
  o.check(agree == 20, fmt::format("{}/20 tasks match the GJK brute force", agree));
  o.check(ties > 0, fmt::format("{} tasks exercised a tie", ties));
  return o;
}

Outcome snapping() {
  Outcome o;
  const ArmTemplate t = template_for(fixture::spatula(), {Axis::X, 0, 230}, BaseMode::STATIC_IS_EE);
  const Workspace ws = sample_workspace(t.configurations[2], 9);
  const auto cloud = positions(ws);
  std::vector<std::array<int, 3>> facets(ws.hull.facets().begin(), ws.hull.facets().end());
  Eigen::AlignedBox3d box;
  for (const Vec3& p : cloud) box.extend(p);
  const Vec3 c = box.center(), half = box.sizes();

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  double on_surface = 0.0, slack = 0.0, drift = 0.0;
  int n = 0;
  while (n < 1000) {
    const Vec3 p = c + Vec3(u(rng) * half.x(), u(rng) * half.y(), u(rng) * half.z());
    if (oracle::gjk_distance(cloud, p) <= 1e-6) continue;
    ++n;
    const Vec3 s = snap_point(ws, p);
    on_surface = std::max(on_surface, oracle::gjk_distance(cloud, s));
    const double best = oracle::min_facet_distance(ws.hull.vertices(), facets, p);
    slack = std::max(slack, std::abs((s - p).norm() - best));
    drift = std::max(drift, (snap_point(ws, s) - s).norm());
  }
  o.check(on_surface <= 1e-6, fmt::format("post-snap hull distance {:.2e} mm (<= 1e-6)", on_surface));
  o.check(slack <= 1e-6, fmt::format("excess over per-facet minimum {:.2e} mm (<= 1e-6)", slack));
  o.check(drift == 0.0, fmt::format("re-snap moves {:.2e} mm", drift));
  return o;
}

Outcome segmentation() {
  Outcome o;
  const Mesh bar = fixture::bar(200, 20, 10, 8);
  const SegmentationResult b = segment_slender(bar, Axis::X);
  const double bar_spread = spread(b.links);
  const double bar_cons = std::abs(sum_volume(b.links) / oracle::divergence_volume(bar) - 1.0);
  o.check(b.links.size() == 4 && bar_spread < 0.01, fmt::format("bar spread {:.3f}% (< 1%)", 100 * bar_spread));
  o.check(bar_cons <= 0.02, fmt::format("bar conservation {:.3f}% (<= 2%)", 100 * bar_cons));

  const Mesh cyl = fixture::banded_cylinder(40, 40, 64, 4);
  const SegmentationResult q = segment_nonslender(cyl, Vec3::UnitZ());
  const double cyl_spread = spread(q.links);
  const double cyl_cons = std::abs(sum_volume(q.links) / oracle::divergence_volume(cyl) - 1.0);
  o.check(q.links.size() == 4 && cyl_spread < 0.02, fmt::format("cylinder spread {:.3f}% (< 2%)", 100 * cyl_spread));
  o.check(cyl_cons <= 0.02, fmt::format("cylinder conservation {:.3f}% (<= 2%)", 100 * cyl_cons));
  return o;
}

Outcome selection_csg() {
  Outcome o;
  const Mesh bar = fixture::bar(200, 20, 10, 4);
  const PartSplit split = select_part(bar, {Axis::X, 75, 125});
  o.check(split.statics.size() == 2, fmt::format("{} static components (2)", split.statics.size()));
  const PartSplit bridged = bridge_disjoint(split, 0.0);
  double radius = 0.0;
  if (bridged.pillar) {
    for (const Vec3& v : bridged.pillar->vertices) radius = std::max(radius, Eigen::Vector2d(v.y(), v.z()).norm());
  }
  o.check(bridged.pillar && std::abs(radius - 0.25 * 10.0) <= 1e-9,
          fmt::format("pillar radius {:.9f} mm (0.25 x 10)", radius));
  const double cons =
      std::abs((oracle::divergence_volume(split.transformable) + sum_volume(split.statics)) / oracle::divergence_volume(bar) - 1.0);
  o.check(cons <= 0.02, fmt::format("split conservation {:.4f}% (<= 2%)", 100 * cons));
  return o;
}

struct E2E {
  PipelineReport report;
  FabricationBundle bundle;
  DesignFile design;
  double seconds = 0.0;
};

E2E run_scenario(const scenario::Written& w, const fs::path& out) {
  E2E e;
  e.design = load_design_file(w.design);
  const auto t0 = Clock::now();
  PipelineResult r = generate(e.design);
  export_bundle(r.bundle, out);
  e.seconds = seconds_since(t0);
  e.report = std::move(r.report);
  e.bundle = std::move(r.bundle);
  return e;
}

void check_bundle(Outcome& o, const std::string& tag, const fs::path& out, const PipelineReport& report) {
  const auto manifest = nlohmann::json::parse(scenario::read_file(out / "manifest.json"));
  bool complete = fs::exists(out / "trajectory.csv");
  for (int i = 0; i < 4; ++i) complete = complete && fs::exists(out / ("link_" + std::to_string(i) + ".stl"));
  for (const auto& c : manifest["components"]) {
    const fs::path f = out / c["file"].get<std::string>();
    complete = complete && fs::exists(f) && fs::file_size(f) > 84 && c["volume_mm3"].get<double>() > 0.0;
  }
  complete = complete && manifest["connectors"].size() == 4 && manifest["motors"].size() >= 4;
  complete = complete && report.files.size() == static_cast<std::size_t>(std::distance(fs::directory_iterator(out), {}));
  o.check(complete, tag + " bundle complete (" + std::to_string(report.files.size()) + " files)");
}

Outcome end_to_end(E2E& spatula, E2E& pig, const fs::path& root) {
  Outcome o;
  o.check(spatula.report.arm_case == ArmCase::UNFOLDED,
          fmt::format("spatula case {}", to_string(spatula.report.arm_case)));
  // End effector on the static part: chain joint 0 is the free end of the
  // transformable part, the joint farthest from the end effector.
  o.check(spatula.report.steering_joint == 0, fmt::format("spatula steering joint {}", spatula.report.steering_joint + 1));
  check_bundle(o, "spatula", root / "spatula_out", spatula.report);
  o.check(spatula.seconds < 60.0, fmt::format("spatula {:.2f} s (< 60 s)", spatula.seconds));

  o.check(pig.report.arm_case == ArmCase::FOLDED_EE_ON_TRANSFORMABLE, fmt::format("piggybank case {}", to_string(pig.report.arm_case)));
  o.check(pig.report.steering_joint == 1, fmt::format("piggybank steering joint {}", pig.report.steering_joint + 1));
  check_bundle(o, "piggybank", root / "pig_out", pig.report);
  o.check(pig.seconds < 60.0, fmt::format("piggybank {:.2f} s (< 60 s)", pig.seconds));
  const auto tris = [](const fs::path& p) { return load_mesh_file(p).triangles.size(); };
  const std::size_t ts = tris(root / "spatula" / "spatula.stl"), tp = tris(root / "piggybank" / "piggybank.stl");
  o.check(ts >= 10000 && tp >= 10000, fmt::format("input meshes {} / {} triangles (>= 10k)", ts, tp));
  return o;
}

Outcome trajectory_round_trip(const std::vector<const E2E*>& runs) {
  Outcome o;
  double worst = 0.0;
  int out_of_range = 0, points = 0;
  for (const E2E* e : runs) {
    std::vector<Vec3> targets;
    for (const MotionPoint& p : e->design.motion_points) targets.push_back(p.position);
    for (const SnapRecord& s : e->report.snapped) targets[s.index] = s.to;
    const FabricationBundle& b = e->bundle;
    const auto& wps = b.trajectory.waypoints;
    if (wps.size() != targets.size() + 1) {
      o.check(false, "waypoint count");
      continue;
    }
    // The manifest carries the DH table actually used.
    const auto& dh = b.manifest["dh_table"];
    std::vector<DHRow> rows;
    for (const auto& r : dh) {
      DHRow row;
      row.a = r["a_mm"];
      row.alpha = r["alpha_rad"];
      row.d = r["d_mm"];
      row.theta = r["theta_rad"];
      const std::string kind = r["kind"];
      row.kind = kind == "STEERING"       ? JointKind::STEERING
                 : kind == "DRIVING"      ? JointKind::DRIVING
                 : kind == "END_EFFECTOR" ? JointKind::END_EFFECTOR
                                          : JointKind::LOCKED;
      row.theta_range = {r["theta_min_rad"], r["theta_max_rad"]};
      rows.push_back(row);
    }
    Eigen::Matrix4d base;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) base(i, j) = b.manifest["base_frame"][i][j];
    }
    const Pose base_pose = Pose::from_matrix(base);
    for (std::size_t i = 1; i < wps.size(); ++i) {
      worst = std::max(worst, (oracle_fk(rows, base_pose, wps[i].angles) - targets[i - 1]).norm());
      ++points;
      std::size_t k = 0;
      for (const DHRow& r : rows) {
        if (!r.actuated()) continue;
        const double v = wps[i].angles[k++];
        if (v < r.theta_range[0] - 1e-12 || v > r.theta_range[1] + 1e-12) ++out_of_range;
      }
    }
  }
  o.check(worst <= 0.1, fmt::format("max FK miss {:.2e} mm over {} points (<= 0.1)", worst, points));
  o.check(out_of_range == 0, fmt::format("{} angles outside joint ranges", out_of_range));
  return o;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = scenario::read_file(e.path());
  return out;
}

Outcome determinism(const std::vector<fs::path>& designs, const fs::path& root) {
  Outcome o;
  for (const fs::path& d : designs) {
    std::array<std::map<std::string, std::string>, 2> runs;
    for (int k = 0; k < 2; ++k) {
      const fs::path out = root / (d.stem().string() + "_det" + std::to_string(k));
      const std::string cmd = std::string(FORGE_CLI) + " generate --design " + d.string() + " --out " + out.string() + " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      o.check(status == 0, d.stem().string() + " run " + std::to_string(k + 1) + " exit " + std::to_string(status));
      runs[k] = read_dir(out);
    }
    o.check(!runs[0].empty() && runs[0] == runs[1],
            fmt::format("{}: {} files byte-identical", d.stem().string(), runs[0].size()));
  }
  return o;
}

}  // namespace

int main() {
  const fs::path root = scenario::temp_dir("acceptance");
  report("DH/FK correctness", dh_fk);
  report("Workspace integrity", workspace_integrity);
  report("Orientation filter boundary", orientation_filter);
  report("Configuration selection", configuration_selection);
  report("Snapping", snapping);
  report("Segmentation", segmentation);
  report("Selection/CSG", selection_csg);

  std::optional<scenario::Written> spatula_design, pig_design;
  E2E spatula, pig;
  bool ran = false;
  try {
    spatula_design = scenario::spatula(root / "spatula");
    pig_design = scenario::piggybank(root / "piggybank");
    spatula = run_scenario(*spatula_design, root / "spatula_out");
    pig = run_scenario(*pig_design, root / "pig_out");
    ran = true;
  } catch (const std::exception& e) {
    fmt::print(stderr, "end-to-end setup failed: {}\n", e.what());
  }
  report("End-to-end fixtures", [&] {
    if (!ran) throw std::runtime_error("pipeline did not complete");
    return end_to_end(spatula, pig, root);
  });
  report("Trajectory round-trip", [&] {
    if (!ran) throw std::runtime_error("pipeline did not complete");
    return trajectory_round_trip({&spatula, &pig});
  });
  report("Determinism", [&] {
    if (!spatula_design) throw std::runtime_error("no design files");
    return determinism({spatula_design->design, pig_design->design}, root);
  });

  fs::remove_all(root);
  fmt::print("{} of 10 criteria failed\n", failures);
  return failures;
}
