#include "forge/fabrication/bundle.hpp"

#include <fstream>
#include <set>

#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"

namespace forge {

namespace {

std::string connector_file(const Connector& c) {
  if (c.type != ConnectorType::HINGE) return "connector_" + std::to_string(c.joint) + ".stl";
  if (c.link_a < 0) return "base_pivot.stl";
  return "hinge_" + std::to_string(c.joint) + ".stl";
}

std::string connector_kind(const Connector& c) {
  if (c.type != ConnectorType::HINGE) return "connector";
  return c.link_a < 0 ? "pivot" : "hinge";
}

std::string link_file(int i) { return "link_" + std::to_string(i) + ".stl"; }

nlohmann::json vec(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

nlohmann::json matrix(const Pose& p) {
  const Eigen::Matrix4d m = p.matrix();
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
  return rows;
}

}  // namespace

std::vector<NamedMesh> FabricationBundle::meshes() const {
  std::vector<NamedMesh> out;
  std::set<std::string> seen;
  auto add = [&](std::string file, std::string kind, const Mesh* m) {
    if (seen.insert(file).second) out.push_back({std::move(file), std::move(kind), m});
  };
  auto add_static = [&] {
    for (std::size_t i = 0; i < statics.size(); ++i) add("static_" + std::to_string(i) + ".stl", "static", &statics[i]);
    if (pillar) add("pillar.stl", "pillar", &*pillar);
  };
  auto add_link = [&](int i) {
    if (i >= 0 && i < static_cast<int>(link_components.size())) add(link_file(i), "link", &link_components[i]);
  };

  // Assembly order walks the chain from the grounded part outwards.
  const bool static_base = connectors.empty() || connectors.front().link_a < 0;
  if (static_base) {
    add_static();
  } else {
    add_link(connectors.front().link_a);
  }
  for (const Connector& c : connectors) {
    add(connector_file(c), connector_kind(c), &c.mesh);
    // The part this joint moves.
    if (!static_base && c.link_a < 0) {
      add_static();
    } else {
      add_link(c.link_b);
    }
  }
  for (int i = 0; i < static_cast<int>(link_components.size()); ++i) add_link(i);
  add_static();
  if (end_effector) add(std::string(end_effector->mesh.name) + ".stl", "end_effector", &end_effector->mesh);
  return out;
}

nlohmann::json dh_table_json(const ArmConfiguration& config) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < config.dh_table.size(); ++i) {
    const DHRow& r = config.dh_table[i];
    rows.push_back({{"joint", i + 1},
                    {"kind", to_string(r.kind)},
                    {"a_mm", r.a},
                    {"alpha_rad", r.alpha},
                    {"d_mm", r.d},
                    {"theta_rad", r.theta},
                    {"theta_min_rad", r.theta_range[0]},
                    {"theta_max_rad", r.theta_range[1]}});
  }
  return rows;
}

FabricationBundle build_bundle(const PartSplit& split, const SegmentationResult& seg, const ArmConfiguration& config,
                               const Workspace& ws, const TaskSpec& spec, const BundleOptions& options) {
  FabricationBundle b;
  b.object_name = options.object_name;
  b.motorized = options.motorized;
  b.connectors = attach_connectors(seg, config, options.motorized, options.fabrication);
  if (options.motorized) b.shells = place_motor_shells(seg, config, options.motor, options.fabrication);
  b.link_components = apply_link_features(seg, config, b.connectors, b.shells, options.fabrication);
  b.end_effector = make_end_effector(spec, options.motor);
  b.statics = split.statics;
  b.pillar = split.pillar;
  // A motor next to the static part turns into it as well.
  for (const MotorShell& s : b.shells) {
    if (s.neighbour >= 0 || s.sweep_clearance.empty()) continue;
    const Box3 reach = bounding_box(s.sweep_clearance);
    for (Mesh& st : b.statics) {
      if (bounding_box(st).overlaps(reach)) st = boolean_op(st, s.sweep_clearance, BooleanOp::SUBTRACT, options.fabrication.csg);
    }
    if (b.pillar && bounding_box(*b.pillar).overlaps(reach)) {
      b.pillar = boolean_op(*b.pillar, s.sweep_clearance, BooleanOp::SUBTRACT, options.fabrication.csg);
    }
  }
  // Manual arms are posed by hand; only motors need a joint schedule.
  if (options.motorized) b.trajectory = plan_trajectory(config, ws, spec, options.speed_deg_s, options.ik, options.snapped);
  b.trajectory.motorized = options.motorized;

  auto name_of = [&](int link) { return link < 0 ? std::string("static") : "link_" + std::to_string(link); };

  nlohmann::json m;
  m["format"] = "forge-bundle/1";
  m["object"] = options.object_name;
  m["motorized"] = options.motorized;
  m["arm"] = {{"case", to_string(config.arm_case)},
              {"base_mode", to_string(config.base_mode)},
              {"config_index", config.index},
              {"steering_joint", config.steering_joint + 1}};
  m["dh_table"] = dh_table_json(config);
  m["base_frame"] = matrix(config.base_frame);

  nlohmann::json components = nlohmann::json::array();
  nlohmann::json order = nlohmann::json::array();
  for (const NamedMesh& nm : b.meshes()) {
    components.push_back({{"file", nm.file},
                          {"kind", nm.kind},
                          {"triangles", nm.mesh->triangles.size()},
                          {"volume_mm3", volume(*nm.mesh)}});
    order.push_back(nm.file);
  }
  m["components"] = components;
  m["assembly_order"] = order;

  nlohmann::json connectors = nlohmann::json::array();
  nlohmann::json screws = nlohmann::json::array();
  for (const Connector& c : b.connectors) {
    nlohmann::json j = {{"file", connector_file(c)},
                        {"type", to_string(c.type)},
                        {"joint", c.joint + 1},
                        {"links", {name_of(c.link_a), name_of(c.link_b)}},
                        {"pivot", vec(c.pivot)},
                        {"axis", vec(c.axis)}};
    if (c.type == ConnectorType::A) j["fillet_radius_mm"] = c.fillet_radius;
    if (c.type == ConnectorType::B) {
      screws.push_back({{"kind", "M2 self-tapping"}, {"diameter_mm", 2.2}, {"count", 8}, {"for", connector_file(c)}});
    }
    connectors.push_back(j);
  }
  m["connectors"] = connectors;

  nlohmann::json motors = nlohmann::json::array();
  for (const MotorShell& s : b.shells) {
    motors.push_back({{"id", options.motor.id},
                      {"joint", s.joint + 1},
                      {"link", name_of(s.link)},
                      {"pivot", vec(s.pivot)},
                      {"axis", vec(s.axis)}});
    if (!options.motor.rivet_holes.empty()) {
      screws.push_back({{"kind", "rivet"},
                        {"diameter_mm", options.motor.rivet_holes.front().diameter},
                        {"count", options.motor.rivet_holes.size()},
                        {"for", "joint_" + std::to_string(s.joint + 1)}});
    }
  }
  if (b.end_effector) {
    const std::string file = b.end_effector->mesh.name + ".stl";
    nlohmann::json ee = {{"kind", to_string(b.end_effector->kind)}, {"file", file}};
    if (b.end_effector->kind == EndEffectorKind::C_CLAMP) ee["inner_radius_mm"] = b.end_effector->inner_radius;
    if (b.end_effector->needs_motor && options.motorized) {
      motors.push_back({{"id", options.motor.id}, {"joint", "gripper"}, {"component", file}});
    }
    m["end_effector"] = ee;
  } else {
    m["end_effector"] = nullptr;
  }
  m["motors"] = motors;
  m["screws"] = screws;
  m["trajectory"] = options.motorized ? nlohmann::json("trajectory.csv") : nlohmann::json(nullptr);
  b.manifest = std::move(m);
  return b;
}

std::map<std::string, std::string> render_bundle(const FabricationBundle& bundle) {
  std::map<std::string, std::string> files;
  for (const NamedMesh& nm : bundle.meshes()) files[nm.file] = to_stl_binary(*nm.mesh);
  files["manifest.json"] = bundle.manifest.dump(2) + "\n";
  if (bundle.motorized) files["trajectory.csv"] = trajectory_csv(bundle.trajectory);
  return files;
}

nlohmann::json export_bundle(const FabricationBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IOFailure, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, bytes] : render_bundle(bundle)) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IOFailure, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::IOFailure, "write failed for " + path.string());
  }
  return bundle.manifest;
}

}  // namespace forge
