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

// JSON records for scenes, ground truth, per-frame results and trial reports.

#include <optional>
#include <string>
#include <vector>

#include "finray/config.hpp"
#include "finray/sim_port.hpp"

namespace finray {

namespace detail {

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace detail

// ---- scenes ---------------------------------------------------------------

inline json indenter_to_json(const sim::Indenter& ind) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, sim::NoIndenter>) {
          return json{{"type", "none"}};
        } else if constexpr (std::is_same_v<T, sim::Sphere>) {
          return json{{"type", "sphere"}, {"radius_mm", v.radius_mm}, {"center_mm", v.center_mm}, {"depth_mm", v.depth_mm}};
        } else if constexpr (std::is_same_v<T, sim::Stem>) {
          return json{{"type", "stem"},           {"width_mm", v.width_mm}, {"length_mm", v.length_mm},
                      {"angle_deg", v.angle_deg}, {"depth_mm", v.depth_mm}, {"center_mm", v.center_mm}};
        } else {
          return json{{"type", "screwhead"}, {"radius_mm", v.radius_mm}, {"depth_mm", v.depth_mm}, {"center_mm", v.center_mm}};
        }
      },
      ind);
}

inline sim::Indenter indenter_from_json(const json& j) {
  detail::ObjectReader r(j, "indenter");
  std::string type = "none";
  r.get("type", type);
  sim::Indenter out;
  if (type == "none") {
    out = sim::NoIndenter{};
  } else if (type == "sphere") {
    sim::Sphere s;
    r.get("radius_mm", s.radius_mm).get("center_mm", s.center_mm).get("depth_mm", s.depth_mm);
    out = s;
  } else if (type == "stem") {
    sim::Stem s;
    r.get("width_mm", s.width_mm).get("length_mm", s.length_mm).get("angle_deg", s.angle_deg)
        .get("depth_mm", s.depth_mm).get("center_mm", s.center_mm);
    out = s;
  } else if (type == "screwhead") {
    sim::ScrewHead s;
    r.get("radius_mm", s.radius_mm).get("depth_mm", s.depth_mm).get("center_mm", s.center_mm);
    out = s;
  } else {
    throw Error(ErrorCode::InvalidScene, "unknown indenter type " + type);
  }
  r.finish();
  return out;
}

inline json scene_to_json(const sim::Scene& s) {
  return json{{"bend", s.bend},
              {"indenter", indenter_to_json(s.indenter)},
              {"shear_px", s.shear_px},
              {"torsion_deg", s.torsion_deg},
              {"torsion_center_px", detail::optional_json(s.torsion_center_px)},
              {"dot_offset_px", s.dot_offset_px},
              {"noise_sigma", s.noise_sigma},
              {"seed", s.seed}};
}

inline sim::Scene scene_from_json(const json& j) {
  detail::ObjectReader r(j, "scene");
  sim::Scene s;
  r.get("bend", s.bend).get("shear_px", s.shear_px).get("torsion_deg", s.torsion_deg)
      .get("dot_offset_px", s.dot_offset_px).get("noise_sigma", s.noise_sigma).get("seed", s.seed);
  if (const json* ind = r.child("indenter")) s.indenter = indenter_from_json(*ind);
  if (const json* c = r.child("torsion_center_px"); c && !c->is_null()) s.torsion_center_px = c->get<Point2>();
  r.finish();
  return s;
}

inline json ground_truth_to_json(const sim::Scene& scene, const sim::GroundTruth& gt) {
  double z_max = 0.0;
  for (double v : gt.depth.data()) z_max = std::max(z_max, v);
  return json{{"scene", scene_to_json(scene)},
              {"theta_deg", detail::optional_json(gt.theta_deg)},
              {"contact_area", count_true(gt.contact)},
              {"depth_max", z_max},
              {"dots", gt.dots},
              {"markers", gt.markers}};
}

// ---- per-frame results ----------------------------------------------------

/// One-line orientation record; theta and confidence are null without an estimate.
inline json orientation_record(const std::optional<OrientationEstimate>& est, int area,
                               const std::vector<std::string>& flags) {
  return json{{"theta_deg", est ? json(est->theta_deg) : json(nullptr)},
              {"confidence", est ? json(est->confidence) : json(nullptr)},
              {"area", est ? est->region_area : area},
              {"flags", flags}};
}

inline json marker_record(const MarkerField& f) {
  json matches = json::array();
  for (const auto& m : f.matches) matches.push_back({{"ref", m.ref}, {"cur", m.cur}, {"disp", m.disp}});
  return json{{"matches", std::move(matches)},
              {"unmatched_ref", f.unmatched_ref},
              {"unmatched_cur", f.unmatched_cur},
              {"shear_magnitude", f.shear_magnitude}};
}

inline MarkerField marker_field_from_json(const json& j) {
  MarkerField f;
  for (const auto& m : j.at("matches")) {
    f.matches.push_back({m.at("ref").get<Point2>(), m.at("cur").get<Point2>(), m.at("disp").get<Point2>()});
  }
  f.unmatched_ref = j.at("unmatched_ref").get<int>();
  f.unmatched_cur = j.at("unmatched_cur").get<int>();
  f.shear_magnitude = j.at("shear_magnitude").get<double>();
  return f;
}

// ---- placement ------------------------------------------------------------

inline sim::PlacementScenario scenario_from_json(const json& j) {
  detail::ObjectReader r(j, "scenario");
  sim::PlacementScenario sc;
  if (const json* a = r.child("handoff_angle_deg")) {
    if (a->is_number()) {
      sc.handoff_angle_deg = a->get<double>();
    } else if (a->is_object()) {
      double lo = 0.0, hi = 0.0;
      detail::ObjectReader(*a, "handoff_angle_deg").get("min", lo).get("max", hi).finish();
      if (!(lo <= hi && lo > -90.0 && hi < 90.0)) throw Error(ErrorCode::Format, "handoff angle range invalid");
      sc.handoff_angle_range = std::make_pair(lo, hi);
    } else {
      throw Error(ErrorCode::Format, "handoff_angle_deg must be a number or {min, max}");
    }
  }
  if (const json* t = r.child("table_step")) {
    sc.table_step = t->is_null() ? std::nullopt : std::optional<int>(t->get<int>());
  }
  if (const json* st = r.child("stem")) {
    detail::ObjectReader(*st, "stem")
        .get("width_mm", sc.stem.width_mm).get("length_mm", sc.stem.length_mm).get("depth_mm", sc.stem.depth_mm)
        .get("center_mm", sc.stem.center_mm)
        .finish();
  }
  if (const json* f = r.child("faults")) {
    detail::ObjectReader fr(*f, "faults");
    if (const json* s = fr.child("slip_at_capture"); s && !s->is_null()) sc.slip_at_capture = s->get<int>();
    if (const json* p = fr.child("port_failure_at_command"); p && !p->is_null()) {
      sc.port_failure_at_command = p->get<int>();
    }
    fr.get("slipped_depth_mm", sc.slipped_depth_mm).get("pre_contact_shear_px", sc.pre_contact_shear_px);
    fr.finish();
  }
  r.get("bend", sc.bend).get("noise_sigma", sc.noise_sigma)
      .get("contact_shear_px_per_step", sc.contact_shear_px_per_step)
      .get("max_contact_shear_px", sc.max_contact_shear_px).get("handoff_delay_frames", sc.handoff_delay_frames)
      .get("crash_margin_steps", sc.crash_margin_steps).get("seed", sc.seed);
  r.get("trials", sc.trials);
  r.finish();
  if (sc.trials < 1) throw Error(ErrorCode::Format, "trials must be >= 1");
  if (!(sc.bend >= 0.0 && sc.bend <= 1.0)) throw Error(ErrorCode::Format, "scenario bend must lie in [0, 1]");
  if (sc.table_step && *sc.table_step < 1) throw Error(ErrorCode::Format, "table_step must be >= 1");
  if (!(sc.noise_sigma >= 0.0)) throw Error(ErrorCode::Format, "noise_sigma must be >= 0");
  return sc;
}

inline json trial_report_to_json(const TrialReport& rep) {
  json path = json::array();
  for (auto s : rep.path) path.push_back(to_string(s));
  return json{{"final_state", to_string(rep.final_state)},
              {"path", std::move(path)},
              {"degraded", rep.degraded},
              {"released", rep.released},
              {"estimated_theta_deg", detail::optional_json(rep.estimated_theta_deg)},
              {"commanded_rotation_deg", detail::optional_json(rep.commanded_rotation_deg)},
              {"residual_angle_deg", detail::optional_json(rep.residual_angle_deg)},
              {"steps", rep.steps},
              {"shear_trace", rep.shear_trace},
              {"diagnostics", rep.diagnostics}};
}

}  // namespace finray
