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

// Reorient-and-set-down controller driven by tactile feedback only.

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "finray/dotref.hpp"
#include "finray/markers.hpp"
#include "finray/orientation.hpp"
#include "finray/reconstruct.hpp"

namespace finray {

struct PipelineConfig {
  DotConfig dots;
  MarkerConfig markers;
  ReconstructConfig reconstruct;
  OrientationConfig orientation;
};

struct PlacementConfig {
  int n_estimate_frames = 5;
  double shear_threshold = 15.0;  // summed marker displacement, px
  double descend_step_mm = 2.0;
  int max_descend_steps = 50;
  int max_handoff_frames = 20;
};

enum class PlacementState {
  WaitHandoff,
  Grasped,
  Estimating,
  Reorienting,
  Descending,
  DegradedDescend,
  Released,
  Done,
  Aborted,
};

inline const char* to_string(PlacementState s) {
  switch (s) {
    case PlacementState::WaitHandoff: return "WaitHandoff";
    case PlacementState::Grasped: return "Grasped";
    case PlacementState::Estimating: return "Estimating";
    case PlacementState::Reorienting: return "Reorienting";
    case PlacementState::Descending: return "Descending";
    case PlacementState::DegradedDescend: return "DegradedDescend";
    case PlacementState::Released: return "Released";
    case PlacementState::Done: return "Done";
    case PlacementState::Aborted: return "Aborted";
  }
  return "?";
}

/// Abstract arm + gripper + tactile camera. Commands complete synchronously;
/// any exception thrown is treated as a port failure.
class RobotPort {
 public:
  virtual ~RobotPort() = default;
  virtual void rotate_tool(double delta_deg) = 0;
  virtual void descend(double step_mm) = 0;
  virtual void open_gripper() = 0;
  virtual Frame capture() = 0;
  /// Object angle known only to a simulator; real ports return nullopt.
  virtual std::optional<double> true_object_angle() const { return std::nullopt; }
};

/// What the controller needs to know about a frame.
class Perception {
 public:
  virtual ~Perception() = default;
  /// Area of the largest contact region, 0 without usable contact.
  virtual int contact_area(const Frame& frame) = 0;
  /// Stem angle, or nullopt with a reason when the frame is unusable.
  virtual std::optional<double> orientation(const Frame& frame, std::string* why) = 0;
  /// Summed marker displacement against the bend-matched reference.
  virtual double shear(const Frame& frame) = 0;
};

class PipelinePerception : public Perception {
 public:
  PipelinePerception(const ReferenceLibrary& lib, PipelineConfig cfg) : lib_(lib), cfg_(std::move(cfg)) {}

  int contact_area(const Frame& frame) override {
    try {
      const auto rec = reconstruct(frame, lib_, cfg_.dots, cfg_.reconstruct);
      return finray::contact_area(rec.depth, cfg_.orientation);
    } catch (const Error&) {
      return 0;
    }
  }

  std::optional<double> orientation(const Frame& frame, std::string* why) override {
    try {
      const auto rec = reconstruct(frame, lib_, cfg_.dots, cfg_.reconstruct);
      if (rec.low_confidence) {
        if (why) *why = "low_confidence";
        return std::nullopt;
      }
      return estimate_orientation(rec.depth, cfg_.orientation).theta_deg;
    } catch (const Error& e) {
      if (why) *why = to_string(e.code());
      return std::nullopt;
    }
  }

  double shear(const Frame& frame) override { return marker_field(frame).shear_magnitude; }

  /// No proprioceptive dots means no bend-consistent reference: empty field.
  MarkerField marker_field(const Frame& frame) const {
    DotSet dots = extract_dots(frame, cfg_.dots);
    if (dots.centers.empty()) return {};
    const ReferenceMatch m = match_reference(dots, lib_, cfg_.dots);
    return track_markers(extract_markers(frame, cfg_.markers), lib_.entries[m.index].ref_markers, cfg_.markers);
  }

  const PipelineConfig& config() const { return cfg_; }

 private:
  const ReferenceLibrary& lib_;
  PipelineConfig cfg_;
};

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Median over frames that produced an angle; throws EstimationFailed if none did.
inline double estimate_grasp_angle(const std::vector<Frame>& frames, Perception& perception,
                                   std::vector<std::string>* diagnostics = nullptr) {
  if (frames.empty()) throw Error(ErrorCode::InvalidArgument, "no frames to estimate from");
  std::vector<double> angles;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::string why;
    if (const auto theta = perception.orientation(frames[i], &why)) {
      angles.push_back(*theta);
    } else if (diagnostics) {
      diagnostics->push_back("estimate frame " + std::to_string(i) + ": " + why);
    }
  }
  if (angles.empty()) throw Error(ErrorCode::EstimationFailed, "no frame yielded an orientation");
  return median(std::move(angles));
}

inline double estimate_grasp_angle(const std::vector<Frame>& frames, const ReferenceLibrary& lib,
                                   const PipelineConfig& cfg) {
  PipelinePerception p(lib, cfg);
  return estimate_grasp_angle(frames, p);
}

struct DescentResult {
  int steps = 0;
  std::vector<double> shear_trace;
};

/// Steps down until shear exceeds the threshold. Throws TableNotFound after
/// max_descend_steps; the gripper is never opened here.
inline DescentResult descend_until_contact(RobotPort& port, Perception& perception, const PlacementConfig& cfg,
                                           std::vector<double>* trace = nullptr) {
  DescentResult r;
  for (int step = 1; step <= cfg.max_descend_steps; ++step) {
    port.descend(cfg.descend_step_mm);
    r.steps = step;
    const double s = perception.shear(port.capture());
    r.shear_trace.push_back(s);
    if (trace) trace->push_back(s);
    if (s > cfg.shear_threshold) return r;
  }
  throw Error(ErrorCode::TableNotFound, "no contact within " + std::to_string(cfg.max_descend_steps) + " steps");
}

struct TrialReport {
  PlacementState final_state = PlacementState::WaitHandoff;
  std::vector<PlacementState> path;
  bool degraded = false;
  bool released = false;
  std::optional<double> estimated_theta_deg;
  std::optional<double> commanded_rotation_deg;
  std::optional<double> residual_angle_deg;
  int steps = 0;
  std::vector<double> shear_trace;
  std::vector<std::string> diagnostics;
};

/// Runs one trial. Never throws: port failures and safety stops end in Aborted.
inline TrialReport run_placement(RobotPort& port, Perception& perception, const PlacementConfig& cfg,
                                 int min_contact_area) {
  TrialReport rep;
  auto enter = [&](PlacementState s) {
    rep.path.push_back(s);
    rep.final_state = s;
  };

  auto body = [&] {
    enter(PlacementState::WaitHandoff);
    bool grasped = false;
    for (int i = 0; i < cfg.max_handoff_frames && !grasped; ++i) {
      grasped = perception.contact_area(port.capture()) >= min_contact_area;
    }
    if (!grasped) {
      rep.diagnostics.push_back("no handoff within " + std::to_string(cfg.max_handoff_frames) + " frames");
      enter(PlacementState::Aborted);
      return;
    }
    enter(PlacementState::Grasped);

    enter(PlacementState::Estimating);
    std::vector<Frame> frames;
    for (int i = 0; i < cfg.n_estimate_frames; ++i) frames.push_back(port.capture());
    try {
      const double theta = estimate_grasp_angle(frames, perception, &rep.diagnostics);
      rep.estimated_theta_deg = theta;
      enter(PlacementState::Reorienting);
      rep.commanded_rotation_deg = -theta;
      port.rotate_tool(-theta);
      enter(PlacementState::Descending);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EstimationFailed) throw;
      rep.diagnostics.push_back(e.what());
      rep.degraded = true;
      enter(PlacementState::DegradedDescend);
    }

    try {
      rep.steps = descend_until_contact(port, perception, cfg, &rep.shear_trace).steps;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TableNotFound) throw;
      rep.steps = static_cast<int>(rep.shear_trace.size());
      rep.diagnostics.push_back(e.what());
      enter(PlacementState::Aborted);
      return;
    }
    port.open_gripper();
    rep.released = true;
    enter(PlacementState::Released);
    enter(PlacementState::Done);
  };

  try {
    body();
  } catch (const std::exception& e) {
    rep.diagnostics.push_back(std::string("port failure: ") + e.what());
    enter(PlacementState::Aborted);
  }
  if (const auto angle = port.true_object_angle()) rep.residual_angle_deg = wrap_axis_angle(*angle);
  return rep;
}

inline TrialReport run_placement(RobotPort& port, const ReferenceLibrary& lib, const PipelineConfig& pipeline,
                                 const PlacementConfig& cfg) {
  PipelinePerception perception(lib, pipeline);
  return run_placement(port, perception, cfg, pipeline.orientation.min_contact_area);
}

}  // namespace finray
