#include <cstdio>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "forge/app/pipeline.hpp"
#include "forge/app/server.hpp"

namespace {

int report_failure(const forge::Error& e) {
  std::cerr << "error [" << forge::to_string(e.code()) << "] " << e.what() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: turn part of a mesh into an embedded robotic arm"};
  app.require_subcommand(1);

  std::string design_path;
  std::string out_dir;
  std::optional<int> resolution;
  bool no_snap = false;
  auto* gen = app.add_subcommand("generate", "run every step and write the fabrication bundle");
  gen->add_option("--design", design_path, "design JSON file")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_option("--resolution", resolution, "workspace samples per joint")->check(CLI::Range(2, 64));
  gen->add_flag("--no-snap", no_snap, "fail instead of snapping exterior motion points");

  auto* val = app.add_subcommand("validate", "check a design file and its task");
  val->add_option("--design", design_path, "design JSON file")->required()->check(CLI::ExistingFile);

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* srv = app.add_subcommand("serve", "start the HTTP API");
  srv->add_option("--host", host, "bind address");
  srv->add_option("--port", port, "port")->check(CLI::Range(1, 65535));

  CLI11_PARSE(app, argc, argv);
  // stdout carries the JSON report only.
  spdlog::set_default_logger(spdlog::stderr_color_mt("forge"));

  try {
    if (*gen) {
      const forge::DesignFile design = forge::load_design_file(design_path);
      forge::PipelineOptions options;
      options.resolution = resolution;
      options.snap = !no_snap;
      const forge::PipelineReport report = forge::run_pipeline(design, out_dir, options);
      for (const forge::SnapRecord& r : report.snapped) {
        spdlog::warn("motion point {} lay outside the workspace; snapped by {:.3f} mm", r.index, r.distance);
      }
      std::cout << report.to_json().dump(2) << "\n";
      return 0;
    }
    if (*val) {
      const forge::DesignFile design = forge::load_design_file(design_path);
      forge::build_task(design.motion_points, design.attach_surface);
      std::cout << "ok: " << design.name << ", " << design.motion_points.size() << " motion points\n";
      return 0;
    }
    if (*srv) {
      if (!forge::serve(host, port)) {
        spdlog::error("cannot listen on {}:{}", host, port);
        return 1;
      }
      return 0;
    }
  } catch (const forge::Error& e) {
    return report_failure(e);
  }
  return 0;
}
