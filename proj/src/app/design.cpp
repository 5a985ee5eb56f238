#include "forge/app/design.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "forge/error.hpp"

namespace forge {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  fail(ErrorCode::InvalidDesign, field + ": " + why);
}

double number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(field, "must be finite");
  return v;
}

Vec3 vec3(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) bad(field, "expected [x, y, z]");
  return Vec3(number(j[0], field), number(j[1], field), number(j[2], field));
}

const nlohmann::json& member(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + "." + key, "missing");
  return j.at(key);
}

std::string text(const nlohmann::json& j, const std::string& field) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

Eigen::Isometry3d transform(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) bad(field, "expected a 4x4 row-major matrix");
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) bad(field, "expected a 4x4 row-major matrix");
    for (int c = 0; c < 4; ++c) m(r, c) = number(j[r][c], field);
  }
  Eigen::Isometry3d out;
  out.matrix() = m;
  return out;
}

}  // namespace

SweepSelection parse_selection(const nlohmann::json& j) {
  SweepSelection s;
  const auto axis = parse_axis(text(member(j, "axis", "selection"), "selection.axis"));
  if (!axis) bad("selection.axis", "expected X, Y or Z");
  s.axis = *axis;
  s.start = number(member(j, "start", "selection"), "selection.start");
  s.end = number(member(j, "end", "selection"), "selection.end");
  return s;
}

BaseMode parse_end_effector_on(const nlohmann::json& j) {
  const std::string v = text(j, "end_effector_on");
  if (v == "TRANSFORMABLE") return BaseMode::STATIC_IS_BASE;
  if (v == "STATIC") return BaseMode::STATIC_IS_EE;
  bad("end_effector_on", "expected TRANSFORMABLE or STATIC");
}

std::vector<MotionPoint> parse_motion_points(const nlohmann::json& j) {
  if (!j.is_array()) bad("motion_points", "expected an array");
  std::vector<MotionPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "motion_points[" + std::to_string(i) + "]";
    MotionPoint p;
    p.position = vec3(member(j[i], "position", where), where + ".position");
    if (j[i].contains("orientation") && !j[i]["orientation"].is_null()) {
      p.orientation = vec3(j[i]["orientation"], where + ".orientation");
    }
    if (j[i].contains("action")) {
      const auto a = parse_action(text(j[i]["action"], where + ".action"));
      if (!a) bad(where + ".action", "expected PICK, PLACE, TRAJECTORY or ATTACH");
      p.action = *a;
    }
    out.push_back(p);
  }
  return out;
}

AttachSurface parse_attach_surface(const nlohmann::json& j) {
  AttachSurface s;
  const auto kind = parse_surface_kind(text(member(j, "kind", "attach_surface"), "attach_surface.kind"));
  if (!kind) bad("attach_surface.kind", "expected CYLINDER, RECTANGULAR_PRISM or FLAT_PLANE");
  s.kind = *kind;
  s.position = vec3(member(j, "position", "attach_surface"), "attach_surface.position");
  if (j.contains("orientation")) s.orientation = vec3(j["orientation"], "attach_surface.orientation");
  const auto& dims = member(j, "dimensions", "attach_surface");
  if (!dims.is_array()) bad("attach_surface.dimensions", "expected an array");
  for (const auto& d : dims) s.dimensions.push_back(number(d, "attach_surface.dimensions"));
  return s;
}

nlohmann::json to_json(const MotionPoint& p) {
  nlohmann::json j = {{"position", {p.position.x(), p.position.y(), p.position.z()}},
                      {"action", to_string(p.action)}};
  if (p.orientation) j["orientation"] = {p.orientation->x(), p.orientation->y(), p.orientation->z()};
  return j;
}

DesignFile parse_design(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) bad("design", "expected an object");
  DesignFile d;
  d.mesh_path = text(member(j, "mesh_path", "design"), "mesh_path");
  if (d.mesh_path.is_relative()) d.mesh_path = base_dir / d.mesh_path;
  d.name = j.contains("name") ? text(j["name"], "name") : d.mesh_path.stem().string();
  d.selection = parse_selection(member(j, "selection", "design"));
  if (j.contains("end_effector_on")) d.base_mode = parse_end_effector_on(j["end_effector_on"]);
  if (j.contains("motorized")) {
    if (!j["motorized"].is_boolean()) bad("motorized", "expected true or false");
    d.motorized = j["motorized"].get<bool>();
  }
  d.motion_points = parse_motion_points(member(j, "motion_points", "design"));
  if (j.contains("attach_surface") && !j["attach_surface"].is_null()) {
    d.attach_surface = parse_attach_surface(j["attach_surface"]);
  }
  if (j.contains("references")) {
    if (!j["references"].is_array()) bad("references", "expected an array");
    for (std::size_t i = 0; i < j["references"].size(); ++i) {
      const auto& r = j["references"][i];
      const std::string where = "references[" + std::to_string(i) + "]";
      ReferenceEntry e;
      e.mesh_path = text(member(r, "mesh_path", where), where + ".mesh_path");
      if (e.mesh_path.is_relative()) e.mesh_path = base_dir / e.mesh_path;
      if (r.contains("transform")) e.transform = transform(r["transform"], where + ".transform");
      d.references.push_back(e);
    }
  }
  if (j.contains("resolution") && !j["resolution"].is_null()) {
    if (!j["resolution"].is_number_integer()) bad("resolution", "expected an integer");
    d.resolution = j["resolution"].get<int>();
    if (*d.resolution < 2) bad("resolution", "must be at least 2");
  }
  if (j.contains("speed_deg_s") && !j["speed_deg_s"].is_null()) {
    d.speed_deg_s = number(j["speed_deg_s"], "speed_deg_s");
    if (*d.speed_deg_s <= 0.0) bad("speed_deg_s", "must be positive");
  }
  return d;
}

DesignFile load_design_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IOFailure, "cannot read design file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, "design file " + path.string() + ": " + e.what());
  }
  DesignFile d = parse_design(j, path.parent_path());
  if (!std::filesystem::exists(d.mesh_path)) bad("mesh_path", d.mesh_path.string() + " does not exist");
  for (const auto& r : d.references) {
    if (!std::filesystem::exists(r.mesh_path)) bad("references", r.mesh_path.string() + " does not exist");
  }
  return d;
}

}  // namespace forge
