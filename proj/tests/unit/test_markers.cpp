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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "finray/markers.hpp"
#include "../support/fixtures.hpp"

using namespace finray;
using Catch::Approx;

namespace {

const MarkerConfig& cfg() { return fixture::pipeline().markers; }

double nearest(const std::vector<Point2>& pts, Point2 p) {
  double best = 1e300;
  for (const Point2& q : pts) best = std::min(best, distance(p, q));
  return best;
}

MarkerField track_scene(const sim::Scene& s) {
  const auto r = fixture::render(s);
  const auto& lib = fixture::library();
  const auto m = match_reference(r.frame, lib, fixture::pipeline().dots);
  return track_markers(extract_markers(r.frame, cfg()), lib.entries[m.index].ref_markers, cfg());
}

}  // namespace

TEST_CASE("config derives pixel sizes from millimetres", "[markers]") {
  CHECK(cfg().pitch_px() == Approx(40.0));
  CHECK(cfg().nominal_area() == Approx(std::numbers::pi * 25.0));
  CHECK(cfg().r_max() == Approx(18.0));
  CHECK(cfg().min_area() < cfg().nominal_area());
  CHECK(cfg().max_area() > cfg().nominal_area());
}

TEST_CASE("markers are found at their rendered centres", "[markers]") {
  for (double noise : {0.0, 3.0}) {
    sim::Scene s;
    s.bend = 0.3;
    s.noise_sigma = noise;
    s.seed = 8;
    const auto r = fixture::render(s);
    const auto found = extract_markers(r.frame, cfg());
    REQUIRE(found.size() == r.truth.markers.size());
    for (const Point2& p : found) CHECK(nearest(r.truth.markers, p) < 0.3);
  }
}

TEST_CASE("markers near the frame border are dropped", "[markers]") {
  sim::Scene s;
  s.shear_px = {-15.0, 0.0};  // pushes the left column to x = 5
  const auto r = fixture::render(s);
  const auto found = extract_markers(r.frame, cfg());
  CHECK(found.size() == r.truth.markers.size() - 5);
  for (const Point2& p : found) CHECK(p.x >= cfg().border_margin);
}

TEST_CASE("tracking identical points gives exactly zero shear", "[markers]") {
  const auto& ref = fixture::library().entries[5].ref_markers;
  const MarkerField f = track_markers(ref, ref, cfg());
  CHECK(f.shear_magnitude == 0.0);
  CHECK(f.matches.size() == ref.size());
  CHECK(f.unmatched_ref == 0);
  CHECK(f.unmatched_cur == 0);
}

TEST_CASE("uniform shifts are recovered for any direction below r_max", "[markers]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> mag(0.0, 0.49 * cfg().pitch_px());
  const auto& ref = fixture::library().entries[0].ref_markers;
  for (int i = 0; i < 200; ++i) {
    const double a = ang(rng), m = std::min(mag(rng), cfg().r_max() - 1e-6);
    const Point2 shift{m * std::cos(a), m * std::sin(a)};
    std::vector<Point2> cur;
    for (const Point2& p : ref) cur.push_back(p + shift);
    const MarkerField f = track_markers(cur, ref, cfg());
    REQUIRE(f.matches.size() == ref.size());
    for (const auto& mm : f.matches) REQUIRE(distance(mm.disp, shift) < 1e-9);
    REQUIRE(f.shear_magnitude == Approx(m * ref.size()).epsilon(1e-9));
  }
}

TEST_CASE("displacements beyond r_max stay unmatched", "[markers]") {
  const std::vector<Point2> ref{{100, 100}};
  const std::vector<Point2> cur{{100 + cfg().r_max() + 0.01, 100}};
  const MarkerField f = track_markers(cur, ref, cfg());
  CHECK(f.matches.empty());
  CHECK(f.unmatched_ref == 1);
  CHECK(f.unmatched_cur == 1);
  CHECK(f.shear_magnitude == 0.0);
}

TEST_CASE("greedy matching takes the closest pair first", "[markers]") {
  const std::vector<Point2> ref{{0, 0}, {10, 0}};
  const std::vector<Point2> cur{{9, 0}};
  const MarkerField f = track_markers(cur, ref, cfg());
  REQUIRE(f.matches.size() == 1);
  CHECK(f.matches[0].ref == Point2{10, 0});
  CHECK(f.unmatched_ref == 1);
}

TEST_CASE("rendered shear is tracked to sub-pixel accuracy", "[markers]") {
  for (double mag : {1.0, 2.0, 4.0}) {
    for (double deg : {0.0, 90.0, 225.0}) {
      const double a = deg * std::numbers::pi / 180.0;
      sim::Scene s;
      s.bend = 0.5;
      s.noise_sigma = 2.0;
      s.seed = 3;
      s.shear_px = {mag * std::cos(a), mag * std::sin(a)};
      const MarkerField f = track_scene(s);
      Point2 mean{};
      for (const auto& m : f.matches) mean = mean + (1.0 / f.matches.size()) * m.disp;
      INFO("shift " << mag << " at " << deg);
      CHECK(distance(mean, s.shear_px) < 0.5);
    }
  }
}

TEST_CASE("torsion produces tangential displacements", "[markers]") {
  sim::Scene s;
  s.torsion_deg = 5.0;
  const MarkerField f = track_scene(s);
  const Point2 c = fixture::geometry().sensing_center();
  int checked = 0;
  for (const auto& m : f.matches) {
    const Point2 r = m.ref - c;
    if (r.norm() < 60.0) continue;
    const Point2 tangent{-r.y / r.norm(), r.x / r.norm()};
    const double cosang = (m.disp.x * tangent.x + m.disp.y * tangent.y) / m.disp.norm();
    CHECK(cosang > std::cos(10.0 * std::numbers::pi / 180.0));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("overlay arrows", "[markers]") {
  MarkerField f;
  f.matches = {{{50, 50}, {51, 50}, {1, 0}}, {{100, 100}, {100, 102}, {0, 2}}};
  const MarkerOverlay o = overlay_arrows(f, cfg());
  REQUIRE(o.arrows.size() == 2);
  CHECK(o.arrows[0].to == Point2{51, 50});
  CHECK(o.arrows[1].to == Point2{100, 106});

  const Frame base(160, 160);
  const Frame drawn = render_overlay(base, f, cfg());
  CHECK(drawn.at(100, 104) == Rgb{255, 255, 0});
  CHECK(drawn.at(10, 10) == Rgb{0, 0, 0});
  CHECK(render_overlay(base, MarkerField{}, cfg()) == base);
}
