#include "scenarios.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "forge/app/pipeline.hpp"
#include "forge/mesh/mesh_io.hpp"

namespace scenario {

namespace fs = std::filesystem;
using forge::Vec3;
using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

// Reachable positions of configuration 0 once obstacles are removed.
std::vector<Vec3> reachable(const forge::Mesh& mesh, const forge::SweepSelection& sel, forge::BaseMode mode,
                            int resolution) {
  const forge::SelectionStage stage = forge::run_selection(mesh, sel);
  const auto [links, arm] = forge::build_arm(stage, mode);
  const auto obstacles = forge::obstacles_for(stage.split, mode);
  const forge::Workspace ws =
      forge::eliminate_collisions(forge::sample_workspace(arm.configurations[0], resolution), obstacles,
                                  arm.configurations[0]);
  std::vector<Vec3> out;
  for (const auto& s : ws.samples) out.push_back(s.position);
  return out;
}

std::size_t nearest(const std::vector<Vec3>& cloud, const Vec3& p, const std::set<std::size_t>& taken) {
  std::size_t best = cloud.size();
  double best_d = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (taken.count(i)) continue;
    const double d = (cloud[i] - p).squaredNorm();
    if (best == cloud.size() || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

Vec3 centroid(const std::vector<Vec3>& cloud) {
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : cloud) c += p;
  return c / static_cast<double>(cloud.size());
}

Written write(const fs::path& dir, const std::string& name, const forge::Mesh& mesh, json design) {
  fs::create_directories(dir);
  Written w;
  w.mesh = dir / (name + ".stl");
  w.design = dir / (name + ".json");
  forge::save_stl(mesh, w.mesh);
  design["mesh_path"] = name + ".stl";
  std::ofstream(w.design) << design.dump(2) << "\n";
  w.json = design;
  return w;
}

constexpr int kFixtureResolution = forge::kDefaultResolution;

}  // namespace

Written spatula(const fs::path& dir) {
  const forge::Mesh mesh = fixture::spatula();
  const forge::SweepSelection sel{forge::Axis::X, 0.0, 230.0};
  const auto cloud = reachable(mesh, sel, forge::BaseMode::STATIC_IS_EE, kFixtureResolution);
  const Vec3 c = centroid(cloud);
  Eigen::AlignedBox3d box;
  for (const Vec3& p : cloud) box.extend(p);
  const double r = 0.25 * std::min(box.sizes().x(), box.sizes().y());

  json points = json::array();
  std::set<std::size_t> taken;
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 8.0;
    const std::size_t i = nearest(cloud, c + Vec3(r * std::cos(a), r * std::sin(a), 0.0), taken);
    taken.insert(i);
    points.push_back({{"position", vec(cloud[i])}, {"action", "TRAJECTORY"}});
  }
  json design = {{"name", "spatula"},
                 {"selection", {{"axis", "X"}, {"start", 0.0}, {"end", 230.0}}},
                 {"end_effector_on", "STATIC"},
                 {"motorized", true},
                 {"motion_points", points}};
  return write(dir, "spatula", mesh, design);
}

Written piggybank(const fs::path& dir) {
  const forge::Mesh mesh = fixture::piggybank();
  const forge::SweepSelection sel{forge::Axis::Z, 70.0, 130.0};
  const auto cloud = reachable(mesh, sel, forge::BaseMode::STATIC_IS_BASE, kFixtureResolution);
  const Vec3 c = centroid(cloud);
  Eigen::AlignedBox3d box;
  for (const Vec3& p : cloud) box.extend(p);
  const Vec3 half = 0.25 * box.sizes();

  std::set<std::size_t> taken;
  json points = json::array();
  const std::pair<const char*, Vec3> plan[] = {{"PICK", c + Vec3(half.x(), 0, 0)},
                                               {"TRAJECTORY", c + Vec3(0, half.y(), 0)},
                                               {"PLACE", c + Vec3(-half.x(), 0, 0)}};
  for (const auto& [action, target] : plan) {
    const std::size_t i = nearest(cloud, target, taken);
    taken.insert(i);
    points.push_back({{"position", vec(cloud[i])}, {"action", action}});
  }
  json design = {{"name", "piggybank"},
                 {"selection", {{"axis", "Z"}, {"start", 70.0}, {"end", 130.0}}},
                 {"end_effector_on", "TRANSFORMABLE"},
                 {"motorized", true},
                 {"motion_points", points}};
  return write(dir, "piggybank", mesh, design);
}

fs::path temp_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path p =
      fs::temp_directory_path() / ("forge_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace scenario
