#include "forge/app/server.hpp"

#include <spdlog/spdlog.h>

#include "httplib.h"

#include "forge/app/zip.hpp"
#include "forge/mesh/mesh_io.hpp"

namespace forge {

using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

HttpResponse reply(int status, const json& body) { return {status, body.dump(2) + "\n", "application/json"}; }

HttpResponse problem(int status, std::string_view error, const std::string& message, const char* step = nullptr) {
  json body = {{"error", error}, {"message", message}};
  if (step) body["step"] = step;
  return reply(status, body);
}

// Thrown inside a handler to short-circuit with a response.
struct Reject {
  HttpResponse response;
};

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Reject{problem(400, "InvalidJson", e.what())};
  }
}

}  // namespace

std::string_view to_string(SessionStep s) {
  switch (s) {
    case SessionStep::CREATED: return "CREATED";
    case SessionStep::LOADED: return "LOADED";
    case SessionStep::SELECTED: return "SELECTED";
    case SessionStep::TASKED: return "TASKED";
    case SessionStep::GENERATED: return "GENERATED";
  }
  return "?";
}

struct SessionService::Session {
  std::mutex mutex;
  std::string id;
  SessionStep step = SessionStep::CREATED;

  std::string name;
  std::optional<Mesh> mesh;
  std::optional<SelectionStage> selection;
  std::optional<TaskSpec> task;
  BaseMode base_mode = BaseMode::STATIC_IS_BASE;
  bool motorized = true;
  int resolution = kDefaultResolution;
  double speed_deg_s = kDefaultSpeed;
  std::optional<GenerationStage> generation;
  std::vector<std::size_t> snapped;
  std::optional<std::string> archive;

  json state() const {
    json j = {{"id", id}, {"step", to_string(step)}, {"name", name}};
    if (task) {
      json pts = json::array();
      for (const MotionPoint& p : task->points()) pts.push_back(to_json(p));
      j["motion_points"] = pts;
    }
    if (generation) {
      j["config_index"] = generation->choice.configuration.index;
      j["exterior_points"] = generation->exterior;
    }
    return j;
  }

  // Step order guard: `from` is the step the call needs, `to` the step it
  // produces. Repeating the current step is allowed.
  void require(SessionStep from, SessionStep to) const {
    if (step == from || step == to) return;
    throw Reject{problem(409, "StepOrder",
                         "session is " + std::string(to_string(step)) + "; this call needs " +
                             std::string(to_string(from)) + " or " + std::string(to_string(to)))};
  }

  void require_generated() const {
    if (step != SessionStep::GENERATED) {
      throw Reject{problem(409, "StepOrder", "session is " + std::string(to_string(step)) + "; generate first")};
    }
  }
};

SessionService::SessionService() = default;
SessionService::~SessionService() = default;

std::shared_ptr<SessionService::Session> SessionService::find(std::string_view id) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Reject{problem(404, "NoSession", "no session " + std::string(id))};
  return it->second;
}

namespace {

// Runs `fn` under the session lock and maps failures onto status codes:
// schema problems 400, step order 409, module errors 422.
template <typename Fn>
HttpResponse guarded(const char* step, Fn&& fn) {
  try {
    return fn();
  } catch (const Reject& r) {
    return r.response;
  } catch (const Error& e) {
    const int status = e.code() == ErrorCode::InvalidDesign || e.code() == ErrorCode::ParseError ? 400 : 422;
    return problem(status, to_string(e.code()), e.what(), step);
  } catch (const json::exception& e) {
    return problem(400, "InvalidJson", e.what(), step);
  }
}

}  // namespace

HttpResponse SessionService::create_session() {
  auto s = std::make_shared<Session>();
  {
    std::lock_guard lock(mutex_);
    s->id = std::to_string(next_id_++);
    sessions_.emplace(s->id, s);
  }
  return reply(201, s->state());
}

HttpResponse SessionService::status(std::string_view id) {
  return guarded(nullptr, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    return reply(200, s->state());
  });
}

HttpResponse SessionService::upload_mesh(std::string_view id, const std::string& body, const std::string& name) {
  return guarded(kStepSelection, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    s->require(SessionStep::CREATED, SessionStep::LOADED);
    const std::string label = name.empty() ? "object" : name;
    Mesh mesh;
    try {
      mesh = load_mesh(body, detect_format(body, label), label);
    } catch (const Error& e) {
      // An unreadable upload is a bad request, not a pipeline failure.
      throw Reject{problem(400, to_string(e.code()), e.what(), kStepSelection)};
    }
    s->name = label;
    s->mesh = std::move(mesh);
    s->step = SessionStep::LOADED;
    json j = s->state();
    j["triangles"] = s->mesh->triangles.size();
    return reply(200, j);
  });
}

HttpResponse SessionService::put_selection(std::string_view id, const std::string& body) {
  return guarded(kStepSelection, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    s->require(SessionStep::LOADED, SessionStep::SELECTED);
    const json j = parse_body(body);
    const SweepSelection sel = parse_selection(j);
    SelectionStage stage = run_selection(*s->mesh, sel);
    json out = s->state();
    out["step"] = to_string(SessionStep::SELECTED);
    out["shape"] = to_string(stage.shape.kind);
    out["statics"] = stage.split.statics.size();
    out["pillar"] = stage.split.pillar.has_value();
    out["transformable_volume_mm3"] = volume(stage.split.transformable);
    s->selection = std::move(stage);
    s->step = SessionStep::SELECTED;
    return reply(200, out);
  });
}

HttpResponse SessionService::place(std::string_view id, const std::string& body) {
  return guarded(kStepTask, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (s->step < SessionStep::SELECTED) {
      throw Reject{problem(409, "StepOrder", "session is " + std::string(to_string(s->step)) + "; select a part first")};
    }
    const json j = parse_body(body);
    if (!j.is_object()) throw Reject{problem(400, "InvalidDesign", "place: expected an object", kStepTask)};
    const auto& q = j.value("plane_point", json());
    if (!q.is_array() || q.size() != 2 || !q[0].is_number() || !q[1].is_number()) {
      throw Reject{problem(400, "InvalidDesign", "plane_point: expected [u, v]", kStepTask)};
    }
    const json offset = j.value("offset", json(0.0));
    if (!offset.is_number()) throw Reject{problem(400, "InvalidDesign", "offset: expected a number", kStepTask)};
    // Points placed so far decide the plane; an empty list uses the part centre.
    std::vector<MotionPoint> before;
    if (j.contains("motion_points")) before = parse_motion_points(j["motion_points"]);
    const TaskSpec so_far = TaskSpec::from_parts(before, std::nullopt);
    const Plane plane = reference_plane(so_far, s->selection->split);
    const auto [u, v] = plane.basis();
    const Vec3 p = lift_to_3d(plane, Vec2(q[0].get<double>(), q[1].get<double>()), offset.get<double>());
    return reply(200, {{"plane", {{"origin", vec(plane.origin)}, {"normal", vec(plane.normal)}, {"u", vec(u)}, {"v", vec(v)}}},
                       {"position", vec(p)}});
  });
}

HttpResponse SessionService::put_task(std::string_view id, const std::string& body) {
  return guarded(kStepTask, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    s->require(SessionStep::SELECTED, SessionStep::TASKED);
    const json j = parse_body(body);
    if (!j.is_object()) throw Reject{problem(400, "InvalidDesign", "task: expected an object", kStepTask)};
    if (!j.contains("motion_points")) throw Reject{problem(400, "InvalidDesign", "motion_points: missing", kStepTask)};
    const auto points = parse_motion_points(j["motion_points"]);
    std::optional<AttachSurface> surface;
    if (j.contains("attach_surface") && !j["attach_surface"].is_null()) surface = parse_attach_surface(j["attach_surface"]);
    BaseMode mode = BaseMode::STATIC_IS_BASE;
    if (j.contains("end_effector_on")) mode = parse_end_effector_on(j["end_effector_on"]);
    bool motorized = true;
    if (j.contains("motorized")) {
      if (!j["motorized"].is_boolean()) throw Reject{problem(400, "InvalidDesign", "motorized: expected true or false")};
      motorized = j["motorized"].get<bool>();
    }
    int resolution = kDefaultResolution;
    if (j.contains("resolution") && !j["resolution"].is_null()) {
      if (!j["resolution"].is_number_integer() || j["resolution"].get<int>() < 2) {
        throw Reject{problem(400, "InvalidDesign", "resolution: expected an integer of at least 2")};
      }
      resolution = j["resolution"].get<int>();
    }
    double speed = kDefaultSpeed;
    if (j.contains("speed_deg_s") && !j["speed_deg_s"].is_null()) {
      if (!j["speed_deg_s"].is_number() || j["speed_deg_s"].get<double>() <= 0.0) {
        throw Reject{problem(400, "InvalidDesign", "speed_deg_s: expected a positive number")};
      }
      speed = j["speed_deg_s"].get<double>();
    }
    TaskSpec spec = build_task(points, surface);
    s->task = std::move(spec);
    s->base_mode = mode;
    s->motorized = motorized;
    s->resolution = resolution;
    s->speed_deg_s = speed;
    s->step = SessionStep::TASKED;
    return reply(200, s->state());
  });
}

HttpResponse SessionService::generate(std::string_view id) {
  return guarded(kStepGeneration, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    s->require(SessionStep::TASKED, SessionStep::GENERATED);
    GenerationStage g = run_generation(*s->selection, s->base_mode, *s->task, s->resolution);
    const ArmConfiguration& config = g.choice.configuration;

    json scores = json::array();
    for (const auto& sc : g.choice.scores) scores.push_back(sc ? json(sc->rmse) : json(nullptr));
    json vertices = json::array();
    for (const Vec3& v : g.choice.workspace.hull.vertices()) vertices.push_back(vec(v));
    json facets = json::array();
    for (const Triangle& t : g.choice.workspace.hull.facets()) facets.push_back(json::array({t[0], t[1], t[2]}));
    json out = {{"config",
                 {{"index", config.index},
                  {"case", to_string(config.arm_case)},
                  {"base_mode", to_string(config.base_mode)},
                  {"steering_joint", config.steering_joint + 1},
                  {"rmse_mm", g.choice.score.rmse},
                  {"config_rmse_mm", scores},
                  {"dh_table", dh_table_json(config)}}},
                {"hull", {{"dimension", g.choice.workspace.hull.dimension()}, {"vertices", vertices}, {"facets", facets}}},
                {"exterior_points", g.exterior}};
    s->generation = std::move(g);
    s->snapped.clear();
    s->archive.reset();
    s->step = SessionStep::GENERATED;
    return reply(200, out);
  });
}

HttpResponse SessionService::snap(std::string_view id, const std::string& body) {
  return guarded(kStepGeneration, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    s->require_generated();
    const json j = parse_body(body);
    if (!j.is_object() || !j.contains("point_index") || !j["point_index"].is_number_unsigned()) {
      throw Reject{problem(400, "InvalidDesign", "point_index: expected a non-negative integer", kStepGeneration)};
    }
    const auto index = j["point_index"].get<std::size_t>();
    SnapRecord r;
    TaskSpec snapped = snap_motion_point(*s->task, s->generation->choice.workspace, index, &r);
    auto& exterior = s->generation->exterior;
    const auto it = std::find(exterior.begin(), exterior.end(), index);
    if (it != exterior.end()) {
      exterior.erase(it);
      s->snapped.push_back(index);
      s->task = std::move(snapped);
      s->archive.reset();
    }
    return reply(200, {{"point_index", index},
                       {"from", vec(r.from)},
                       {"to", vec(r.to)},
                       {"distance_mm", r.distance},
                       {"moved", r.distance > 0.0},
                       {"exterior_points", exterior}});
  });
}

HttpResponse SessionService::animation(std::string_view id) {
  return guarded(kStepFabrication, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    s->require_generated();
    const GenerationStage& g = *s->generation;
    const ArmConfiguration& config = g.choice.configuration;
    const JointTrajectory traj =
        plan_trajectory(config, g.choice.workspace, *s->task, s->speed_deg_s, {}, s->snapped);
    json frames = json::array();
    for (const Waypoint& w : traj.waypoints) {
      json joints = json::array();
      for (const Vec3& p : joint_positions(config, w.angles)) joints.push_back(vec(p));
      frames.push_back(json{{"t", w.time},
                        {"action", w.action},
                        {"angles_rad", w.angles},
                        {"joints", joints},
                        {"tool", vec(tool_pose(config, w.angles).translation)},
                        {"residual_mm", w.residual}});
    }
    return reply(200, {{"config_index", config.index}, {"motorized", s->motorized}, {"frames", frames}});
  });
}

HttpResponse SessionService::export_zip(std::string_view id) {
  return guarded(kStepFabrication, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    s->require_generated();
    if (!s->archive) {
      FabricationInputs inputs;
      inputs.name = s->name;
      inputs.motorized = s->motorized;
      inputs.speed_deg_s = s->speed_deg_s;
      inputs.snapped = s->snapped;
      std::sort(inputs.snapped.begin(), inputs.snapped.end());
      const FabricationBundle bundle = run_fabrication(*s->selection, *s->generation, *s->task, inputs);
      s->archive = make_zip(render_bundle(bundle));
    }
    return HttpResponse{200, *s->archive, "application/zip"};
  });
}

HttpResponse SessionService::restart_step(std::string_view id) {
  return guarded(nullptr, [&] {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    switch (s->step) {
      case SessionStep::GENERATED:
        s->generation.reset();
        s->snapped.clear();
        s->archive.reset();
        s->step = SessionStep::TASKED;
        break;
      case SessionStep::TASKED:
        s->task.reset();
        s->step = SessionStep::SELECTED;
        break;
      case SessionStep::SELECTED:
        s->selection.reset();
        s->step = SessionStep::LOADED;
        break;
      case SessionStep::LOADED:
        s->mesh.reset();
        s->name.clear();
        s->step = SessionStep::CREATED;
        break;
      case SessionStep::CREATED:
        break;
    }
    return reply(200, s->state());
  });
}

void register_routes(httplib::Server& server, SessionService& service) {
  const auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  const std::string sid = R"(/sessions/([0-9]+))";

  server.Post("/sessions", [&, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.create_session());
  });
  server.Get(sid, [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.status(req.matches[1].str()));
  });
  server.Post(sid + "/mesh", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.upload_mesh(req.matches[1].str(), req.body, req.get_param_value("name")));
  });
  server.Put(sid + "/selection", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.put_selection(req.matches[1].str(), req.body));
  });
  server.Post(sid + "/place", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.place(req.matches[1].str(), req.body));
  });
  server.Put(sid + "/task", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.put_task(req.matches[1].str(), req.body));
  });
  server.Post(sid + "/generate", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.generate(req.matches[1].str()));
  });
  server.Post(sid + "/snap", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.snap(req.matches[1].str(), req.body));
  });
  server.Get(sid + "/animation", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.animation(req.matches[1].str()));
  });
  server.Get(sid + "/export", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.export_zip(req.matches[1].str()));
    if (res.status == 200) res.set_header("Content-Disposition", "attachment; filename=\"bundle.zip\"");
  });
  server.Post(sid + "/restart_step", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.restart_step(req.matches[1].str()));
  });
}

bool serve(const std::string& host, int port) {
  SessionService service;
  httplib::Server server;
  register_routes(server, service);
  spdlog::info("listening on {}:{}", host, port);
  return server.listen(host, port);
}

}  // namespace forge
