//  Copyright 2026 The finray Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

// Command-line front end: synthetic data, library building, frame
// processing and simulated placement trials.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finray/finray.hpp"

namespace fs = std::filesystem;
using namespace finray;

namespace {

constexpr int kOk = 0;
constexpr int kTaskFailure = 1;
constexpr int kUsageError = 2;

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

void log(const GlobalOptions& g, const std::string& msg) {
  if (g.verbose) std::cerr << msg << '\n';
}

std::optional<json> read_json_file(const fs::path& path, std::string& err) {
  std::ifstream in(path);
  if (!in) {
    err = "cannot open " + path.string();
    return std::nullopt;
  }
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    err = path.string() + " is not valid JSON";
    return std::nullopt;
  }
  return j;
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".ppm") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string indexed(const std::string& prefix, int i, const std::string& suffix) {
  std::ostringstream s;
  s << prefix << std::setw(4) << std::setfill('0') << i << suffix;
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

// ---- render -------------------------------------------------------------

struct RenderArgs {
  std::string scene_file;
  std::string out_dir;
};

std::vector<sim::Scene> scenes_from_file(const json& j) {
  std::vector<sim::Scene> scenes;
  if (!j.is_object()) throw Error(ErrorCode::Format, "scene file must hold an object");
  if (j.contains("sweep")) {
    if (j.size() != 1) throw Error(ErrorCode::Format, "a sweep file holds only the sweep object");
    int n = 0;
    double noise = 0.0;
    std::uint64_t seed = 0;
    detail::ObjectReader(j.at("sweep"), "sweep").get("n_states", n).get("noise_sigma", noise).get("seed", seed).finish();
    if (n < 1) throw Error(ErrorCode::Format, "sweep.n_states must be >= 1");
    for (int k = 0; k < n; ++k) {
      sim::Scene s;
      s.bend = sim::sweep_bend(k, n);
      s.noise_sigma = noise;
      s.seed = seed + static_cast<std::uint64_t>(k);
      scenes.push_back(s);
    }
  } else if (j.contains("scenes")) {
    if (j.size() != 1) throw Error(ErrorCode::Format, "a scene list file holds only the scenes array");
    for (const auto& s : j.at("scenes")) scenes.push_back(scene_from_json(s));
  } else {
    scenes.push_back(scene_from_json(j));
  }
  return scenes;
}

int cmd_render(const GlobalOptions& g, const RenderArgs& a) {
  const Config cfg = load_config(g.config_path, g.overrides);
  std::string err;
  const auto j = read_json_file(a.scene_file, err);
  if (!j) {
    std::cerr << "render: " << err << '\n';
    return kUsageError;
  }
  std::vector<sim::Scene> scenes;
  std::vector<sim::Rendered> frames;
  try {
    scenes = scenes_from_file(*j);
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      if (g.seed) scenes[i].seed = *g.seed + i;
      frames.push_back(sim::render(scenes[i], cfg.sensor, cfg.pipeline.reconstruct.photometric));
    }
  } catch (const std::exception& e) {
    std::cerr << "render: invalid scene: " << e.what() << '\n';
    return kUsageError;
  }

  fs::create_directories(a.out_dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const int k = static_cast<int>(i);
    pnm::write_ppm(fs::path(a.out_dir) / indexed("frame_", k, ".ppm"), frames[i].frame);
    write_text(fs::path(a.out_dir) / indexed("frame_", k, ".json"),
               ground_truth_to_json(scenes[i], frames[i].truth).dump(1) + "\n");
  }
  std::cout << "rendered " << frames.size() << " frame(s) to " << a.out_dir << '\n';
  return kOk;
}

// ---- build-library ------------------------------------------------------

struct BuildArgs {
  std::string frames_dir;
  std::string out_dir;
};

int cmd_build_library(const GlobalOptions& g, const BuildArgs& a) {
  const Config cfg = load_config(g.config_path, g.overrides);
  if (!fs::is_directory(a.frames_dir)) {
    std::cerr << "build-library: not a directory: " << a.frames_dir << '\n';
    return kUsageError;
  }
  const auto paths = list_frames(a.frames_dir);
  if (paths.empty()) {
    std::cerr << "build-library: no .ppm frames in " << a.frames_dir << '\n';
    return kUsageError;
  }
  std::vector<Frame> frames;
  for (const auto& p : paths) frames.push_back(pnm::read_ppm(p));

  ReferenceLibrary lib;
  try {
    lib = build_library(frames, cfg.pipeline.dots, cfg.pipeline.markers);
  } catch (const Error& e) {
    std::cerr << "build-library: " << e.what() << '\n';
    return kTaskFailure;
  }
  save_library(a.out_dir, lib, cfg);
  for (const auto& d : lib.metadata.diagnostics) std::cerr << "build-library: " << d << '\n';
  std::cout << "entries: " << lib.entries.size() << " (from " << frames.size() << " frames, "
            << frames.size() - lib.entries.size() - lib.metadata.diagnostics.size() << " deduplicated, "
            << lib.metadata.diagnostics.size() << " rejected)\n";
  return kOk;
}

// ---- process ------------------------------------------------------------

struct ProcessArgs {
  std::string library_dir;
  std::string frame;
  std::string frames_dir;
  bool stream = false;
  std::string out_dir;
  std::vector<std::string> emit{"depth", "orientation", "markers", "overlay"};
};

struct FrameResult {
  json record;
  bool ok = true;
};

FrameResult process_frame(const std::string& name, const Frame& frame, const ReferenceLibrary& lib,
                          const PipelineConfig& pc, const ProcessArgs& a) {
  auto wants = [&](const char* what) { return std::find(a.emit.begin(), a.emit.end(), what) != a.emit.end(); };
  FrameResult out;
  json& rec = out.record;
  rec["frame"] = name;

  std::optional<Reconstruction> rec_opt;
  try {
    rec_opt = reconstruct(frame, lib, pc.dots, pc.reconstruct);
  } catch (const Error& e) {
    rec["error"] = to_string(e.code());
    out.ok = false;
  }

  if (rec_opt) {
    const auto& r = *rec_opt;
    double z_max = 0.0;
    for (double v : r.depth.z.data()) z_max = std::max(z_max, std::fabs(v));
    rec["bend_id"] = r.bend_id;
    rec["match_cost"] = r.match_cost;
    rec["low_confidence"] = r.low_confidence;
    rec["depth_abs_max"] = z_max;

    if (wants("orientation")) {
      std::vector<std::string> flags;
      if (r.low_confidence) flags.push_back("low_confidence");
      std::optional<OrientationEstimate> est;
      try {
        est = estimate_orientation(r.depth, pc.orientation);
      } catch (const Error& e) {
        flags.push_back(to_string(e.code()));
      }
      rec["orientation"] = orientation_record(est, contact_area(r.depth, pc.orientation), flags);
    }
    if (wants("markers") || wants("overlay")) {
      const MarkerField field = track_markers(extract_markers(frame, pc.markers),
                                              lib.entries[r.entry_index].ref_markers, pc.markers);
      if (wants("markers")) rec["markers"] = marker_record(field);
      if (wants("overlay") && !a.out_dir.empty()) {
        pnm::write_ppm(fs::path(a.out_dir) / (name + ".overlay.ppm"), render_overlay(frame, field, pc.markers));
      }
    }
    if (wants("depth") && !a.out_dir.empty()) write_depth(fs::path(a.out_dir) / (name + ".depth.pgm"), r.depth);
  }
  return out;
}

int cmd_process(const GlobalOptions& g, const ProcessArgs& a) {
  LoadedLibrary loaded;
  try {
    loaded = load_library(a.library_dir);
  } catch (const Error& e) {
    std::cerr << "process: " << e.what() << '\n';
    return kUsageError;
  }
  const Config cfg = g.config_path.empty() && g.overrides.empty() ? loaded.config
                                                                  : load_config(g.config_path, g.overrides);
  for (const auto& e : a.emit) {
    if (e != "depth" && e != "orientation" && e != "markers" && e != "overlay") {
      std::cerr << "process: unknown artifact '" << e << "'\n";
      return kUsageError;
    }
  }
  const int sources = (a.frame.empty() ? 0 : 1) + (a.frames_dir.empty() ? 0 : 1) + (a.stream ? 1 : 0);
  if (sources != 1) {
    std::cerr << "process: give exactly one of --frame, --frames, --stream\n";
    return kUsageError;
  }
  if (!a.out_dir.empty()) fs::create_directories(a.out_dir);

  std::ofstream orient_log;
  std::ofstream marker_log;
  if (!a.out_dir.empty()) {
    orient_log.open(fs::path(a.out_dir) / "orientation.jsonl");
    marker_log.open(fs::path(a.out_dir) / "markers.jsonl");
  }

  bool all_ok = true;
  auto handle = [&](const std::string& name, const Frame& f) {
    const FrameResult r = process_frame(name, f, loaded.library, cfg.pipeline, a);
    all_ok = all_ok && r.ok;
    std::cout << r.record.dump() << '\n';
    if (orient_log.is_open() && r.record.contains("orientation")) {
      orient_log << json{{"frame", name}, {"orientation", r.record["orientation"]}}.dump() << '\n';
    }
    if (marker_log.is_open() && r.record.contains("markers")) {
      json m = r.record["markers"];
      m["frame"] = name;
      marker_log << m.dump() << '\n';
    }
    log(g, "processed " + name);
  };

  try {
    if (!a.frame.empty()) {
      handle(fs::path(a.frame).stem().string(), pnm::read_ppm(fs::path(a.frame)));
    } else if (!a.frames_dir.empty()) {
      if (!fs::is_directory(a.frames_dir)) {
        std::cerr << "process: not a directory: " << a.frames_dir << '\n';
        return kUsageError;
      }
      for (const auto& p : list_frames(a.frames_dir)) handle(p.stem().string(), pnm::read_ppm(p));
    } else {
      std::ios::sync_with_stdio(false);
      int k = 0;
      while (auto f = pnm::read_ppm_stream(std::cin)) handle(indexed("stream_", k++, ""), *f);
    }
  } catch (const Error& e) {
    std::cerr << "process: " << e.what() << '\n';
    return kUsageError;
  }
  return all_ok ? kOk : kTaskFailure;
}

// ---- place --------------------------------------------------------------

struct PlaceArgs {
  std::string scenario_file;
  std::string library_dir;
  std::optional<int> trials;
  std::string out_dir;
};

int cmd_place(const GlobalOptions& g, const PlaceArgs& a) {
  std::string err;
  const auto j = read_json_file(a.scenario_file, err);
  if (!j) {
    std::cerr << "place: " << err << '\n';
    return kUsageError;
  }
  sim::PlacementScenario scenario;
  try {
    scenario = scenario_from_json(*j);
  } catch (const std::exception& e) {
    std::cerr << "place: invalid scenario: " << e.what() << '\n';
    return kUsageError;
  }
  if (g.seed) scenario.seed = *g.seed;
  LoadedLibrary loaded;
  try {
    loaded = load_library(a.library_dir);
  } catch (const Error& e) {
    std::cerr << "place: " << e.what() << '\n';
    return kUsageError;
  }
  const Config cfg = g.config_path.empty() && g.overrides.empty() ? loaded.config
                                                                  : load_config(g.config_path, g.overrides);
  const int trials = a.trials.value_or(scenario.trials);
  if (trials < 1) {
    std::cerr << "place: --trials must be >= 1\n";
    return kUsageError;
  }
  if (!a.out_dir.empty()) fs::create_directories(a.out_dir);

  PipelinePerception perception(loaded.library, cfg.pipeline);
  int successes = 0, degraded = 0, aborted = 0, crashes = 0, drops = 0;
  json trial_list = json::array();
  for (int t = 0; t < trials; ++t) {
    const auto res = sim::run_trial(scenario, t, perception, cfg.sensor, cfg.pipeline.reconstruct.photometric,
                                    cfg.placement, cfg.pipeline.orientation.min_contact_area);
    json rep = trial_report_to_json(res.report);
    rep["trial"] = t;
    rep["handoff_angle_deg"] = res.outcome.handoff_angle_deg;
    rep["success"] = res.outcome.success;
    rep["crashed"] = res.outcome.crashed;
    rep["dropped"] = res.outcome.dropped;
    successes += res.outcome.success;
    degraded += res.report.degraded;
    aborted += res.report.final_state == PlacementState::Aborted;
    crashes += res.outcome.crashed;
    drops += res.outcome.dropped;
    if (!a.out_dir.empty()) write_text(fs::path(a.out_dir) / indexed("trial_", t, ".json"), rep.dump(1) + "\n");
    trial_list.push_back({{"trial", t}, {"final_state", rep["final_state"]}, {"success", res.outcome.success}});
    log(g, "trial " + std::to_string(t) + ": " + to_string(res.report.final_state));
  }
  const json summary{{"trials", trials}, {"success", successes}, {"degraded", degraded}, {"aborted", aborted},
                     {"crashes", crashes}, {"drops", drops}, {"per_trial", std::move(trial_list)}};
  if (!a.out_dir.empty()) write_text(fs::path(a.out_dir) / "summary.json", summary.dump(1) + "\n");
  std::cout << summary.dump() << '\n';
  return aborted == 0 && crashes == 0 && drops == 0 ? kOk : kTaskFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile Fin Ray finger pipeline: simulation, reference library, reconstruction, placement"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--set", g.overrides, "Override a config key, e.g. --set markers.d_sig=2.0");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed for rendering and trials");
  app.add_flag("--verbose,-v", g.verbose, "Progress on stderr");

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render synthetic tactile frames with ground truth");
  render->add_option("--scene", ra.scene_file, "Scene JSON (single scene, {scenes: [...]}, or {sweep: {...}})")->required();
  render->add_option("--out", ra.out_dir, "Output directory")->required();

  BuildArgs ba;
  auto* build = app.add_subcommand("build-library", "Build a reference library from a contact-free sweep");
  build->add_option("--frames", ba.frames_dir, "Directory of P6 frames, ordered by filename")->required();
  build->add_option("--out", ba.out_dir, "Library directory")->required();

  ProcessArgs pa;
  auto* process = app.add_subcommand("process", "Reconstruct, estimate orientation and track markers");
  process->add_option("--library", pa.library_dir, "Library directory")->required();
  process->add_option("--frame", pa.frame, "Single P6 frame");
  process->add_option("--frames", pa.frames_dir, "Directory of P6 frames");
  process->add_flag("--stream", pa.stream, "Read concatenated P6 frames from stdin, write JSON lines");
  process->add_option("--out", pa.out_dir, "Directory for per-frame artifacts");
  process->add_option("--emit", pa.emit, "Artifacts: depth, orientation, markers, overlay")->delimiter(',');

  PlaceArgs pl;
  auto* place = app.add_subcommand("place", "Run simulated reorient-and-place trials");
  place->add_option("--scenario", pl.scenario_file, "Scenario JSON")->required();
  place->add_option("--library", pl.library_dir, "Library directory")->required();
  place->add_option("--trials", pl.trials, "Number of trials (overrides the scenario)");
  place->add_option("--out", pl.out_dir, "Directory for trial reports");

  auto* show_config = app.add_subcommand("config", "Print the effective configuration (defaults, --config, --set)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*render) return cmd_render(g, ra);
    if (*build) return cmd_build_library(g, ba);
    if (*process) return cmd_process(g, pa);
    if (*place) return cmd_place(g, pl);
    if (*show_config) {
      std::cout << json(load_config(g.config_path, g.overrides)).dump(1) << '\n';
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::Format || e.code() == ErrorCode::Io
               ? kUsageError
               : kTaskFailure;
  }
  return kUsageError;
}
