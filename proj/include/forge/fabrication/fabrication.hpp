#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forge/kinematics/arm_template.hpp"
#include "forge/mesh/csg.hpp"
#include "forge/segmentation/segmentation.hpp"
#include "forge/task/task_model.hpp"

namespace forge {

struct RivetHole {
  Vec3 position = Vec3::Zero();  // body frame, on a body face
  double diameter = 0.0;
};

// Servo body in its own frame: centred on the origin, horn axis along +z.
struct MotorSpec {
  std::string id;
  Vec3 body = Vec3::Zero();  // w (x), h (y), d (z)
  Vec3 horn_offset = Vec3::Zero();
  std::vector<RivetHole> rivet_holes;

  double volume() const { return body.prod(); }
};

// Dynamixel XL-320.
MotorSpec xl320();
// Reads {id, body, horn_offset, rivet_holes: [{position, diameter}]}.
// Throws ParseError, IOFailure, InvalidDesign (non-positive dimensions).
MotorSpec load_motor_spec(const std::filesystem::path& path);
// FORGE_MOTOR_SPEC when set, else the XL-320.
MotorSpec motor_spec_from_env();

struct FabricationOptions {
  double pocket_clearance = 0.3;
  double wall = 1.0;
  // Axis angle below which two joints count as parallel, degrees.
  double parallel_tolerance_deg = 1.0;
  double hinge_pin_radius = 2.5;
  double hinge_clearance = 0.3;
  int segments = 32;
  CsgOptions csg;
};

// One chain joint seen from the fabricated parts: the link that carries the
// motor body and the part on the other side (-1 for the static part).
struct JointSite {
  int joint = 0;
  int anchor = 0;
  int pocket_link = 0;
  int neighbour = -1;
  Vec3 pivot = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  bool locked = false;
};

std::vector<JointSite> joint_sites(const SegmentationResult& seg, const ArmConfiguration& config);

enum class ConnectorType { A, B, HINGE };
std::string_view to_string(ConnectorType t);

struct Connector {
  ConnectorType type = ConnectorType::A;
  int joint = 0;
  // Segmentation link indices, -1 for the static part.
  int link_a = -1;
  int link_b = 0;
  Vec3 pivot = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  // Type A only: rounding radius applied to both link ends.
  double fillet_radius = 0.0;
  Mesh mesh;
};

// One connector per chain joint. Throws BadLinkCount.
std::vector<Connector> attach_connectors(const SegmentationResult& seg, const ArmConfiguration& config,
                                         bool motorized, const FabricationOptions& options = {});

struct MotorShell {
  int joint = 0;
  int link = 0;
  int neighbour = -1;
  Vec3 pivot = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  Eigen::Isometry3d body_frame = Eigen::Isometry3d::Identity();
  // Inflated motor body, to be subtracted from `link`.
  Mesh pocket;
  std::vector<Mesh> rivet_holes;
  // Radius swept by the body around the pivot, plus the wall; cut from the
  // neighbour so the motor can turn.
  double sweep_radius = 0.0;
  Mesh sweep_clearance;
};

// Locked joints get no shell. Throws MotorDoesNotFit, BadLinkCount.
std::vector<MotorShell> place_motor_shells(const SegmentationResult& seg, const ArmConfiguration& config,
                                           const MotorSpec& motor, const FabricationOptions& options = {});

// Links with fillets, pockets, rivet holes and hinge bores cut.
std::vector<Mesh> apply_link_features(const SegmentationResult& seg, const ArmConfiguration& config,
                                      const std::vector<Connector>& connectors, const std::vector<MotorShell>& shells,
                                      const FabricationOptions& options = {});

enum class EndEffectorKind { GRIPPER, C_CLAMP, U_CHANNEL, PAD };
std::string_view to_string(EndEffectorKind k);

struct EndEffector {
  EndEffectorKind kind = EndEffectorKind::GRIPPER;
  Mesh mesh;  // in its own frame
  bool needs_motor = false;
  double inner_radius = 0.0;  // C-clamp only
};

inline constexpr double kPrintEnvelope = 200.0;
inline constexpr double kClampClearance = 0.2;

// Gripper for pick/place tasks, a clamp for attach tasks, nothing otherwise.
// Throws UnsupportedSurface.
std::optional<EndEffector> make_end_effector(const TaskSpec& spec, const MotorSpec& motor,
                                             double envelope = kPrintEnvelope);

}  // namespace forge
