#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "forge/error.hpp"
#include "forge/fabrication/fabrication.hpp"

namespace forge {

MotorSpec xl320() {
  MotorSpec m;
  m.id = "XL-320";
  m.body = Vec3(24.0, 36.0, 27.0);
  // Horn on the top face, 10 mm from one end.
  m.horn_offset = Vec3(0.0, -8.0, 13.5);
  for (double x : {-12.0, 12.0}) {
    for (double y : {-4.0, 12.0}) m.rivet_holes.push_back({Vec3(x, y, 0.0), 2.6});
  }
  return m;
}

namespace {

Vec3 read_vec(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3) fail(ErrorCode::ParseError, std::string("motor spec: ") + key + " needs 3 numbers");
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

}  // namespace

MotorSpec load_motor_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IOFailure, "cannot read motor spec " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();

  MotorSpec m;
  try {
    const auto j = nlohmann::json::parse(buf.str());
    m.id = j.at("id").get<std::string>();
    m.body = read_vec(j, "body");
    m.horn_offset = j.contains("horn_offset") ? read_vec(j, "horn_offset") : Vec3::Zero();
    for (const auto& h : j.value("rivet_holes", nlohmann::json::array())) {
      m.rivet_holes.push_back({read_vec(h, "position"), h.at("diameter").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, "motor spec " + path.string() + ": " + e.what());
  }
  if ((m.body.array() <= 0.0).any()) fail(ErrorCode::InvalidDesign, "motor body dimensions must be positive");
  for (const auto& h : m.rivet_holes) {
    if (h.diameter <= 0.0) fail(ErrorCode::InvalidDesign, "rivet hole diameter must be positive");
  }
  return m;
}

MotorSpec motor_spec_from_env() {
  const char* path = std::getenv("FORGE_MOTOR_SPEC");
  if (path == nullptr || *path == '\0') return xl320();
  return load_motor_spec(path);
}

}  // namespace forge
