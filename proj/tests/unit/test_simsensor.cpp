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

#include "finray/simsensor.hpp"
#include "../support/fixtures.hpp"

using namespace finray;
using Catch::Approx;

namespace {

const sim::SensorGeometry& geo() { return fixture::geometry(); }

sim::Scene with(sim::Indenter ind) {
  sim::Scene s;
  s.indenter = ind;
  return s;
}

double max_of(const GrayImage& g) { return *std::max_element(g.data().begin(), g.data().end()); }

ErrorCode code_of(const sim::Scene& s) {
  try {
    fixture::render(s);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("rendering is a pure function of the scene", "[sim]") {
  sim::Scene s = with(sim::Sphere{});
  s.noise_sigma = 3.0;
  s.seed = 42;
  CHECK(fixture::render(s).frame == fixture::render(s).frame);
  sim::Scene t = s;
  t.seed = 43;
  CHECK_FALSE(fixture::render(t).frame == fixture::render(s).frame);
  s.noise_sigma = 0.0;
  t.noise_sigma = 0.0;
  CHECK(fixture::render(t).frame == fixture::render(s).frame);
}

TEST_CASE("bend warp", "[sim]") {
  const auto anchors = geo().dot_anchors();
  SECTION("tip anchors move by exactly b * max_bend_px") {
    for (double b : {0.0, 0.25, 1.0}) {
      const auto w = sim::bend_warp(geo(), b);
      for (std::size_t i = 0; i < geo().tip_dots.size(); ++i) {
        CHECK(w[i].x == Approx(anchors[i].x - b * geo().max_bend_px));
        CHECK(w[i].y == anchors[i].y);
      }
    }
  }
  SECTION("displacement grows monotonically with bend and toward the tip") {
    double prev = -1.0;
    for (int k = 0; k <= 10; ++k) {
      const double d = sim::bend_displacement(geo(), k / 10.0, {100, 10}).norm();
      CHECK(d > prev);
      prev = d;
    }
    CHECK(sim::bend_displacement(geo(), 1.0, {100, 230}).norm() <
          sim::bend_displacement(geo(), 1.0, {100, 10}).norm());
  }
  SECTION("out of range bend is rejected") { CHECK_THROWS_AS(sim::bend_warp(geo(), 1.5), Error); }
}

TEST_CASE("sweep bends span [0, 1]", "[sim]") {
  CHECK(sim::sweep_bend(0, 20) == 0.0);
  CHECK(sim::sweep_bend(19, 20) == 1.0);
  CHECK(sim::sweep_bend(0, 1) == 0.0);
  CHECK(fixture::sweep_frames().size() == 20);
}

TEST_CASE("ground truth of the indenters", "[sim]") {
  const double k = geo().px_per_mm;
  SECTION("sphere peak equals the indentation depth") {
    const auto r = fixture::render(with(sim::Sphere{3.0, {0, 0}, 0.5}));
    CHECK(max_of(r.truth.depth) == Approx(0.5 * k).epsilon(0.01));
    CHECK_FALSE(r.truth.theta_deg.has_value());
    // Contact disk radius sqrt(R^2 - (R - d)^2) in px.
    const double rc = std::sqrt(9.0 - 2.5 * 2.5) * k;
    CHECK(static_cast<double>(count_true(r.truth.contact)) == Approx(std::numbers::pi * rc * rc).epsilon(0.05));
  }
  SECTION("stem reports its angle") {
    const auto r = fixture::render(with(sim::Stem{6.0, 12.0, -60.0, 1.0, {0, 0}}));
    REQUIRE(r.truth.theta_deg.has_value());
    CHECK(*r.truth.theta_deg == Approx(-60.0));
    CHECK(max_of(r.truth.depth) == Approx(1.0 * k).epsilon(0.01));
  }
  SECTION("screw head is flat-topped") {
    const auto r = fixture::render(with(sim::ScrewHead{3.0, 0.5, {0, 0}}));
    const Point2 c = geo().sensing_center();
    const int cx = static_cast<int>(c.x), cy = static_cast<int>(c.y);
    CHECK(r.truth.depth(cx + 10, cy) == Approx(5.0 * (1 - std::pow(10.0 / 30.0, 6))).epsilon(1e-3));
  }
  SECTION("gradients are the derivatives of depth") {
    const auto r = fixture::render(with(sim::Sphere{3.0, {0.3, -0.2}, 0.5}));
    const Point2 c = geo().sensing_center();
    for (int dy = -6; dy <= 6; dy += 3) {
      for (int dx = -6; dx <= 6; dx += 3) {
        const int x = static_cast<int>(c.x) + dx, y = static_cast<int>(c.y) + dy;
        CHECK(r.truth.gradients.gx(x, y) ==
              Approx(0.5 * (r.truth.depth(x + 1, y) - r.truth.depth(x - 1, y))).margin(2e-3));
        CHECK(r.truth.gradients.gy(x, y) ==
              Approx(0.5 * (r.truth.depth(x, y + 1) - r.truth.depth(x, y - 1))).margin(2e-3));
      }
    }
  }
}

TEST_CASE("scene validation", "[sim]") {
  CHECK(code_of(with(sim::Sphere{3.0, {15.0, 0.0}, 0.5})) == ErrorCode::InvalidScene);
  CHECK(code_of(with(sim::Sphere{3.0, {0.0, 0.0}, 4.0})) == ErrorCode::InvalidScene);
  CHECK(code_of(with(sim::Stem{6.0, 12.0, 0.0, 1.0, {0.0, 3.0}})) == ErrorCode::InvalidScene);
  CHECK(code_of(with(sim::Stem{6.0, 12.0, 95.0, 1.0, {0.0, 0.0}})) == ErrorCode::InvalidScene);
  sim::Scene s;
  s.bend = -0.1;
  CHECK(code_of(s) == ErrorCode::InvalidScene);
  s.bend = 0.0;
  s.noise_sigma = -1.0;
  CHECK(code_of(s) == ErrorCode::InvalidScene);
}

TEST_CASE("rendered appearance", "[sim]") {
  const auto r = fixture::render(sim::Scene{});
  SECTION("dots are drawn in their colour at the anchors") {
    for (const Point2& d : r.truth.dots) {
      CHECK(r.frame.at(static_cast<int>(d.x), static_cast<int>(d.y)) == geo().dot_color);
    }
  }
  SECTION("markers are darker than the gel around them") {
    for (const Point2& m : r.truth.markers) {
      const int x = static_cast<int>(std::lround(m.x)), y = static_cast<int>(std::lround(m.y));
      CHECK(lab_luminosity(r.frame.at(x, y)) + 20.0 < lab_luminosity(r.frame.at(x + 12, y)));
    }
  }
  SECTION("the marker grid covers the sensing region") {
    CHECK(r.truth.markers.size() == 40);
    for (const Point2& m : r.truth.markers) {
      CHECK(geo().sensing.contains(static_cast<int>(m.x), static_cast<int>(m.y)));
    }
  }
}

TEST_CASE("shear and torsion move markers and nothing else", "[sim]") {
  sim::Scene a;
  sim::Scene b = a;
  b.shear_px = {2.0, -1.0};
  b.torsion_deg = 3.0;
  const auto ra = fixture::render(a);
  const auto rb = fixture::render(b);
  CHECK(ra.truth.dots == rb.truth.dots);
  CHECK(ra.truth.depth == rb.truth.depth);
  CHECK_FALSE(ra.truth.markers == rb.truth.markers);
}

TEST_CASE("dot offset shifts only the proprioceptive dots", "[sim]") {
  sim::Scene s;
  s.dot_offset_px = {0.0, 3.0};
  const auto r = fixture::render(s);
  const auto base = fixture::render(sim::Scene{});
  for (std::size_t i = 0; i < r.truth.dots.size(); ++i) {
    CHECK(r.truth.dots[i].y == Approx(base.truth.dots[i].y + 3.0));
  }
  CHECK(r.truth.markers == base.truth.markers);
}
