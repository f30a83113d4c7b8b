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

#pragma once

// Single JSON configuration covering every tunable. Unknown keys are
// rejected and each module's numeric constraints are checked at load.

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "finray/placement.hpp"
#include "finray/simsensor.hpp"

namespace finray {

using json = nlohmann::json;

inline void to_json(json& j, const Point2& p) { j = json::array({p.x, p.y}); }
inline void from_json(const json& j, Point2& p) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Format, "point must be [x, y]");
  p = {j[0].get<double>(), j[1].get<double>()};
}
inline void to_json(json& j, const Rect& r) { j = json::array({r.x, r.y, r.width, r.height}); }
inline void from_json(const json& j, Rect& r) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::Format, "rect must be [x, y, width, height]");
  r = {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}
inline void to_json(json& j, const Hsv& c) { j = json::array({c.h, c.s, c.v}); }
inline void from_json(const json& j, Hsv& c) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::Format, "hsv must be [h, s, v]");
  c = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

namespace detail {

/// Reads known keys from one JSON object and rejects everything else.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error(ErrorCode::Format, path_ + " must be an object");
  }

  template <class T>
  ObjectReader& get(const char* key, T& out) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) {
      try {
        out = it->get<T>();
      } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, path_ + "." + key + ": " + e.what());
      }
    }
    return *this;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw Error(ErrorCode::Format, "unknown key " + path_ + "." + key);
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, "config: " + what);
}

}  // namespace detail

struct Config {
  sim::SensorGeometry sensor;
  PipelineConfig pipeline;
  PlacementConfig placement;

  void validate() const {
    using detail::require;
    const auto& s = sensor;
    require(s.width > 0 && s.height > 0, "sensor size must be positive");
    require(s.px_per_mm > 0 && s.marker_pitch_mm > 0 && s.marker_diameter_mm > 0, "sensor scales must be positive");
    require(s.marker_diameter_mm < s.marker_pitch_mm, "markers must be smaller than their pitch");
    require(!s.sensing.empty() && s.sensing.x >= 0 && s.sensing.y >= 0 && s.sensing.x + s.sensing.width <= s.width &&
                s.sensing.y + s.sensing.height <= s.height,
            "sensor.sensing must lie inside the frame");
    require(s.max_bend_px >= 0 && s.bend_pivot_row > s.height, "bend warp parameters out of range");
    require(s.marker_albedo >= 0 && s.marker_albedo <= 1, "marker_albedo must lie in [0, 1]");

    const auto& d = pipeline.dots;
    require(d.morph_radius >= 1, "dots.morph_radius must be >= 1");
    require(d.min_area >= 1 && d.max_area >= d.min_area, "dots area bounds invalid");
    require(d.n_columns >= 1, "dots.n_columns must be >= 1");
    require(d.min_dot_separation >= 0 && d.dedup_epsilon >= 0 && d.miss_penalty > 0, "dots distances invalid");
    require(d.min_dots >= 1, "dots.min_dots must be >= 1");
    require(d.window.lo.s <= d.window.hi.s && d.window.lo.v <= d.window.hi.v, "dots HSV window inverted");

    const auto& m = pipeline.markers;
    require(m.median_kernel >= 3 && m.median_kernel % 2 == 1, "markers.median_kernel must be odd and >= 3");
    require(m.px_per_mm > 0 && m.pitch_mm > 0 && m.diameter_mm > 0, "markers scales must be positive");
    require(m.min_area_fraction > 0 && m.max_area_fraction >= m.min_area_fraction, "markers area fractions invalid");
    require(m.r_max_fraction > 0 && m.d_sig >= 0 && m.border_margin >= 0, "markers tracking limits invalid");

    const auto& r = pipeline.reconstruct;
    require(r.photometric.alpha > 0 && r.photometric.beta > 0, "reconstruct.alpha and beta must be positive");
    require(r.max_match_cost > 0, "reconstruct.max_match_cost must be positive");
    require(r.occlusion_threshold >= 0 && r.occlusion_radius >= 0, "reconstruct occlusion settings must be >= 0");
    require(r.region.x >= 0 && r.region.y >= 0 && r.region.width >= 0 && r.region.height >= 0,
            "reconstruct.region must be non-negative");

    const auto& o = pipeline.orientation;
    require(o.tau > 0 && o.tau < 1, "orientation.tau must lie in (0, 1)");
    require(o.z_noise_floor >= 0 && o.min_contact_area >= 1 && o.min_elongation >= 1, "orientation limits invalid");

    const auto& p = placement;
    require(p.n_estimate_frames > 0 && p.shear_threshold > 0 && p.descend_step_mm > 0 && p.max_descend_steps > 0 &&
                p.max_handoff_frames > 0,
            "placement values must be positive");
  }
};

inline void to_json(json& j, const Config& c) {
  const auto& s = c.sensor;
  const auto& d = c.pipeline.dots;
  const auto& m = c.pipeline.markers;
  const auto& r = c.pipeline.reconstruct;
  const auto& o = c.pipeline.orientation;
  const auto& p = c.placement;
  j = json{
      {"sensor",
       {{"width", s.width}, {"height", s.height}, {"px_per_mm", s.px_per_mm}, {"marker_pitch_mm", s.marker_pitch_mm},
        {"marker_diameter_mm", s.marker_diameter_mm}, {"sensing", s.sensing}, {"tip_dots", s.tip_dots},
        {"base_dots", s.base_dots}, {"dot_radius_px", s.dot_radius_px}, {"border_margin", s.border_margin},
        {"max_bend_px", s.max_bend_px}, {"bend_pivot_row", s.bend_pivot_row}, {"bend_direction", s.bend_direction},
        {"marker_bend_coupling", s.marker_bend_coupling}, {"base_rgb", s.base_rgb}, {"lateral_ramp", s.lateral_ramp},
        {"bend_ramp", s.bend_ramp}, {"marker_albedo", s.marker_albedo}, {"dot_color", s.dot_color}}},
      {"dots",
       {{"hsv_lo", d.window.lo}, {"hsv_hi", d.window.hi}, {"morph_radius", d.morph_radius}, {"min_area", d.min_area},
        {"max_area", d.max_area}, {"min_dot_separation", d.min_dot_separation}, {"n_columns", d.n_columns},
        {"dedup_epsilon", d.dedup_epsilon}, {"min_dots", d.min_dots}, {"miss_penalty", d.miss_penalty}}},
      {"markers",
       {{"median_kernel", m.median_kernel}, {"dark_threshold", m.dark_threshold}, {"px_per_mm", m.px_per_mm},
        {"pitch_mm", m.pitch_mm}, {"diameter_mm", m.diameter_mm}, {"min_area_fraction", m.min_area_fraction},
        {"max_area_fraction", m.max_area_fraction}, {"r_max_fraction", m.r_max_fraction}, {"d_sig", m.d_sig},
        {"border_margin", m.border_margin}}},
      {"reconstruct",
       {{"alpha", r.photometric.alpha}, {"beta", r.photometric.beta}, {"region", r.region},
        {"max_match_cost", r.max_match_cost}, {"occlusion_threshold", r.occlusion_threshold},
        {"occlusion_radius", r.occlusion_radius}}},
      {"orientation",
       {{"tau", o.tau}, {"z_noise_floor", o.z_noise_floor}, {"min_contact_area", o.min_contact_area},
        {"min_elongation", o.min_elongation}}},
      {"placement",
       {{"n_estimate_frames", p.n_estimate_frames}, {"shear_threshold", p.shear_threshold},
        {"descend_step_mm", p.descend_step_mm}, {"max_descend_steps", p.max_descend_steps},
        {"max_handoff_frames", p.max_handoff_frames}}},
  };
}

/// Keys absent from j keep their defaults.
inline void from_json(const json& j, Config& c) {
  detail::ObjectReader root(j, "config");
  if (const json* js = root.child("sensor")) {
    auto& s = c.sensor;
    detail::ObjectReader(*js, "sensor")
        .get("width", s.width).get("height", s.height).get("px_per_mm", s.px_per_mm)
        .get("marker_pitch_mm", s.marker_pitch_mm).get("marker_diameter_mm", s.marker_diameter_mm)
        .get("sensing", s.sensing).get("tip_dots", s.tip_dots).get("base_dots", s.base_dots)
        .get("dot_radius_px", s.dot_radius_px).get("border_margin", s.border_margin)
        .get("max_bend_px", s.max_bend_px).get("bend_pivot_row", s.bend_pivot_row)
        .get("bend_direction", s.bend_direction).get("marker_bend_coupling", s.marker_bend_coupling)
        .get("base_rgb", s.base_rgb).get("lateral_ramp", s.lateral_ramp).get("bend_ramp", s.bend_ramp)
        .get("marker_albedo", s.marker_albedo).get("dot_color", s.dot_color)
        .finish();
  }
  if (const json* jd = root.child("dots")) {
    auto& d = c.pipeline.dots;
    detail::ObjectReader(*jd, "dots")
        .get("hsv_lo", d.window.lo).get("hsv_hi", d.window.hi).get("morph_radius", d.morph_radius)
        .get("min_area", d.min_area).get("max_area", d.max_area).get("min_dot_separation", d.min_dot_separation)
        .get("n_columns", d.n_columns).get("dedup_epsilon", d.dedup_epsilon).get("min_dots", d.min_dots)
        .get("miss_penalty", d.miss_penalty)
        .finish();
  }
  if (const json* jm = root.child("markers")) {
    auto& m = c.pipeline.markers;
    detail::ObjectReader(*jm, "markers")
        .get("median_kernel", m.median_kernel).get("dark_threshold", m.dark_threshold)
        .get("px_per_mm", m.px_per_mm).get("pitch_mm", m.pitch_mm).get("diameter_mm", m.diameter_mm)
        .get("min_area_fraction", m.min_area_fraction).get("max_area_fraction", m.max_area_fraction)
        .get("r_max_fraction", m.r_max_fraction).get("d_sig", m.d_sig).get("border_margin", m.border_margin)
        .finish();
  }
  if (const json* jr = root.child("reconstruct")) {
    auto& r = c.pipeline.reconstruct;
    detail::ObjectReader(*jr, "reconstruct")
        .get("alpha", r.photometric.alpha).get("beta", r.photometric.beta).get("region", r.region)
        .get("max_match_cost", r.max_match_cost).get("occlusion_threshold", r.occlusion_threshold)
        .get("occlusion_radius", r.occlusion_radius)
        .finish();
  }
  if (const json* jo = root.child("orientation")) {
    auto& o = c.pipeline.orientation;
    detail::ObjectReader(*jo, "orientation")
        .get("tau", o.tau).get("z_noise_floor", o.z_noise_floor).get("min_contact_area", o.min_contact_area)
        .get("min_elongation", o.min_elongation)
        .finish();
  }
  if (const json* jp = root.child("placement")) {
    auto& p = c.placement;
    detail::ObjectReader(*jp, "placement")
        .get("n_estimate_frames", p.n_estimate_frames).get("shear_threshold", p.shear_threshold)
        .get("descend_step_mm", p.descend_step_mm).get("max_descend_steps", p.max_descend_steps)
        .get("max_handoff_frames", p.max_handoff_frames)
        .finish();
  }
  root.finish();
}

/// Applies "section.key=value" where value is JSON (bare words are taken as strings).
inline void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw Error(ErrorCode::InvalidArgument, "override must look like section.key=value: " + assignment);
  }
  const std::string section = assignment.substr(0, dot);
  const std::string key = assignment.substr(dot + 1, eq - dot - 1);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  if (!j.contains(section)) j[section] = json::object();
  j[section][key] = std::move(value);
}

inline Config parse_config(const json& j) {
  Config c;
  from_json(j, c);
  c.validate();
  return c;
}

inline Config load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {}) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
    j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::Format, "config is not valid JSON: " + path.string());
  }
  for (const auto& o : overrides) apply_override(j, o);
  return parse_config(j);
}

}  // namespace finray
