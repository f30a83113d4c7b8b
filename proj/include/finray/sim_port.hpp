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

// Simulated arm/gripper for placement trials: renders the tactile frame of a
// held wine-glass stem and injects table-contact shear below a set height.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "finray/placement.hpp"
#include "finray/simsensor.hpp"

namespace finray::sim {

struct PlacementScenario {
  double handoff_angle_deg = 30.0;
  std::optional<std::pair<double, double>> handoff_angle_range;  // sampled per trial
  double bend = 6.0 / 19.0;
  std::optional<int> table_step = 7;  // nullopt: no table
  double noise_sigma = 2.0;
  Stem stem{};
  double contact_shear_px_per_step = 1.5;
  double max_contact_shear_px = 6.0;
  Point2 pre_contact_shear_px{0.0, 0.0};
  int handoff_delay_frames = 0;
  std::optional<int> slip_at_capture;  // capture index from which the grasp has slipped
  double slipped_depth_mm = 0.0;
  int crash_margin_steps = 2;
  std::optional<int> port_failure_at_command;
  std::uint64_t seed = 1;
  int trials = 1;
};

enum class PortCommand { RotateTool, Descend, OpenGripper, Capture };

struct PortEvent {
  PortCommand command;
  double value = 0.0;
};

class SimulatedPort : public RobotPort {
 public:
  SimulatedPort(PlacementScenario scenario, SensorGeometry geometry, PhotometricConfig photometric,
                double handoff_angle_deg)
      : sc_(std::move(scenario)), geo_(std::move(geometry)), photo_(photometric), angle_(handoff_angle_deg) {}

  void rotate_tool(double delta_deg) override {
    command(PortCommand::RotateTool, delta_deg);
    angle_ += delta_deg;
  }

  void descend(double step_mm) override {
    command(PortCommand::Descend, step_mm);
    if (released_) return;
    ++descended_;
    if (sc_.table_step && descended_ > *sc_.table_step + sc_.crash_margin_steps) crashed_ = true;
  }

  void open_gripper() override {
    command(PortCommand::OpenGripper, 0.0);
    if (released_) return;
    released_ = true;
    released_at_ = descended_;
    if (!in_contact()) dropped_ = true;
  }

  Frame capture() override {
    command(PortCommand::Capture, 0.0);
    Frame f = render(current_scene(), geo_, photo_).frame;
    ++captures_;
    return f;
  }

  std::optional<double> true_object_angle() const override { return wrap_axis_angle(angle_); }

  Scene current_scene() const {
    Scene s;
    s.bend = sc_.bend;
    s.noise_sigma = sc_.noise_sigma;
    s.seed = sc_.seed * 1000003ULL + static_cast<std::uint64_t>(captures_);
    if (captures_ >= sc_.handoff_delay_frames) {
      Stem stem = sc_.stem;
      stem.angle_deg = wrap_axis_angle(angle_);
      if (sc_.slip_at_capture && captures_ >= *sc_.slip_at_capture) stem.depth_mm = sc_.slipped_depth_mm;
      s.indenter = stem;
    }
    s.shear_px = sc_.pre_contact_shear_px;
    if (in_contact()) {
      const double mag = std::min(sc_.max_contact_shear_px,
                                  sc_.contact_shear_px_per_step * (descended_ - *sc_.table_step + 1));
      // The table pushes the glass toward the bowl, i.e. along the stem toward the tip.
      s.shear_px = s.shear_px + mag * detail::stem_axis(wrap_axis_angle(angle_));
    }
    return s;
  }

  bool in_contact() const { return sc_.table_step && descended_ >= *sc_.table_step; }
  bool crashed() const { return crashed_; }
  bool dropped() const { return dropped_; }
  bool released() const { return released_; }
  std::optional<int> released_at() const { return released_at_; }
  int descended() const { return descended_; }
  const std::vector<PortEvent>& events() const { return events_; }

 private:
  void command(PortCommand c, double value) {
    if (sc_.port_failure_at_command && static_cast<int>(events_.size()) == *sc_.port_failure_at_command) {
      events_.push_back({c, value});
      throw Error(ErrorCode::PortFailure, "simulated port failure");
    }
    events_.push_back({c, value});
  }

  PlacementScenario sc_;
  SensorGeometry geo_;
  PhotometricConfig photo_;
  double angle_;
  int captures_ = 0;
  int descended_ = 0;
  bool released_ = false;
  bool crashed_ = false;
  bool dropped_ = false;
  std::optional<int> released_at_;
  std::vector<PortEvent> events_;
};

struct TrialOutcome {
  double handoff_angle_deg = 0.0;
  bool success = false;  // upright within tolerance and set down gently
  bool crashed = false;
  bool dropped = false;
};

inline TrialOutcome evaluate_trial(const TrialReport& rep, const SimulatedPort& port, double handoff_angle_deg,
                                   double upright_tolerance_deg = 3.0) {
  TrialOutcome o;
  o.handoff_angle_deg = handoff_angle_deg;
  o.crashed = port.crashed();
  o.dropped = port.dropped();
  o.success = rep.final_state == PlacementState::Done && !rep.degraded && rep.residual_angle_deg &&
              std::fabs(*rep.residual_angle_deg) <= upright_tolerance_deg && !o.crashed && !o.dropped;
  return o;
}

inline double trial_handoff_angle(const PlacementScenario& sc, int trial) {
  if (!sc.handoff_angle_range) return sc.handoff_angle_deg;
  std::mt19937_64 rng(sc.seed * 7919ULL + static_cast<std::uint64_t>(trial));
  std::uniform_real_distribution<double> u(sc.handoff_angle_range->first, sc.handoff_angle_range->second);
  return u(rng);
}

struct TrialResult {
  TrialReport report;
  TrialOutcome outcome;
  std::vector<PortEvent> events;
};

/// One simulated trial; each trial gets its own noise stream derived from the scenario seed.
inline TrialResult run_trial(const PlacementScenario& scenario, int trial, Perception& perception,
                             const SensorGeometry& geometry, const PhotometricConfig& photometric,
                             const PlacementConfig& cfg, int min_contact_area) {
  PlacementScenario sc = scenario;
  sc.seed = scenario.seed * 1000ULL + static_cast<std::uint64_t>(trial);
  const double angle = trial_handoff_angle(scenario, trial);
  SimulatedPort port(sc, geometry, photometric, angle);
  TrialResult out;
  out.report = run_placement(port, perception, cfg, min_contact_area);
  out.outcome = evaluate_trial(out.report, port, angle);
  out.events = port.events();
  return out;
}

}  // namespace finray::sim
