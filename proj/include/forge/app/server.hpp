#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "forge/app/pipeline.hpp"

namespace httplib {
class Server;
}

namespace forge {

// Steps only move forward; restart_step is the one way back.
enum class SessionStep { CREATED, LOADED, SELECTED, TASKED, GENERATED };

std::string_view to_string(SessionStep s);

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Transport-independent session logic behind the HTTP routes.
class SessionService {
 public:
  SessionService();
  ~SessionService();

  HttpResponse create_session();
  HttpResponse status(std::string_view id);
  HttpResponse upload_mesh(std::string_view id, const std::string& body, const std::string& name);
  HttpResponse put_selection(std::string_view id, const std::string& body);
  // Lifts a click on the reference plane into 3D; does not change the step.
  HttpResponse place(std::string_view id, const std::string& body);
  HttpResponse put_task(std::string_view id, const std::string& body);
  HttpResponse generate(std::string_view id);
  HttpResponse snap(std::string_view id, const std::string& body);
  HttpResponse animation(std::string_view id);
  HttpResponse export_zip(std::string_view id);
  HttpResponse restart_step(std::string_view id);

 private:
  struct Session;
  std::shared_ptr<Session> find(std::string_view id);

  std::mutex mutex_;
  std::uint64_t next_id_ = 1;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
};

void register_routes(httplib::Server& server, SessionService& service);

// Blocks until the server stops. Returns false when the port cannot be bound.
bool serve(const std::string& host, int port);

}  // namespace forge
