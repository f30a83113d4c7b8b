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

#include "finray/dotref.hpp"
#include "../support/fixtures.hpp"

using namespace finray;
using Catch::Approx;

namespace {

double nearest(const std::vector<Point2>& pts, Point2 p) {
  double best = 1e300;
  for (const Point2& q : pts) best = std::min(best, distance(p, q));
  return best;
}

sim::Scene bent(double b) {
  sim::Scene s;
  s.bend = b;
  return s;
}

}  // namespace

TEST_CASE("dots are found at their rendered positions", "[dotref]") {
  for (double b : {0.0, 0.35, 1.0}) {
    const auto r = fixture::render(bent(b));
    const DotSet dots = extract_dots(r.frame, fixture::pipeline().dots, "f");
    REQUIRE(dots.centers.size() == r.truth.dots.size());
    for (const Point2& c : dots.centers) CHECK(nearest(r.truth.dots, c) < 0.25);
    CHECK(dots.width == 320);
    CHECK(dots.frame_id == "f");
  }
}

TEST_CASE("dot extraction ignores markers and the gel", "[dotref]") {
  const auto r = fixture::render(bent(0.5));
  const DotSet dots = extract_dots(r.frame, fixture::pipeline().dots);
  for (const Point2& c : dots.centers) {
    CHECK_FALSE(fixture::geometry().sensing.contains(static_cast<int>(c.x), static_cast<int>(c.y)));
  }
}

TEST_CASE("point matrix keeps one point per bin and band", "[dotref]") {
  DotSet d;
  d.width = 320;
  d.height = 240;
  d.centers = {{12, 10}, {14, 11}, {100, 10}, {100, 230}};
  const ReferencePointMatrix m = to_point_matrix(d, 32);
  CHECK(m.collisions == 1);
  CHECK(m.occupied() == 3);
  REQUIRE(m.tip[1].has_value());
  REQUIRE(m.base[10].has_value());
  CHECK(m.base[10]->y == 230);
  CHECK_FALSE(m.base[1].has_value());
}

TEST_CASE("match cost", "[dotref]") {
  DotSet ref;
  ref.width = 320;
  ref.height = 240;
  ref.centers = {{60, 10}, {108, 10}, {60, 230}};
  const ReferencePointMatrix m = to_point_matrix(ref, 32);

  SECTION("zero against itself") { CHECK(match_cost(ref, m, 20.0) == 0.0); }
  SECTION("mean distance for a uniform shift inside one bin") {
    DotSet live = ref;
    for (auto& c : live.centers) c.x += 3.0;
    CHECK(match_cost(live, m, 20.0) == Approx(3.0));
  }
  SECTION("bands are not mixed") {
    DotSet live = ref;
    live.centers = {{60, 115}};
    CHECK(match_cost(live, m, 20.0) == Approx(std::hypot(0.0, 105.0)));
    live.centers = {{60, 125}};
    CHECK(match_cost(live, m, 20.0) == Approx(105.0));
  }
  SECTION("dots without a candidate within one bin pay the miss penalty") {
    DotSet live = ref;
    live.centers = {{200, 10}};
    CHECK(match_cost(live, m, 20.0) == 20.0);
  }
}

TEST_CASE("every sweep frame retrieves its own entry", "[dotref]") {
  const auto& lib = fixture::library();
  const auto& frames = fixture::sweep_frames();
  REQUIRE(lib.entries.size() == frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const ReferenceMatch m = match_reference(frames[i], lib, fixture::pipeline().dots);
    CHECK(m.index == i);
    CHECK(m.cost == 0.0);
    CHECK(lib.entries[m.index].bend_id == static_cast<int>(i));
  }
}

TEST_CASE("noisy frames with contact still retrieve the right entry", "[dotref]") {
  const auto& lib = fixture::library();
  for (int k : {0, 7, 13, 19}) {
    sim::Scene s = bent(sim::sweep_bend(k, 20));
    s.indenter = sim::Sphere{};
    s.noise_sigma = 3.0;
    s.seed = static_cast<std::uint64_t>(k);
    const auto r = fixture::render(s);
    CHECK(match_reference(r.frame, lib, fixture::pipeline().dots).index == static_cast<std::size_t>(k));
  }
}

TEST_CASE("library building", "[dotref]") {
  const auto& frames = fixture::sweep_frames();
  const auto& cfg = fixture::pipeline();

  SECTION("duplicates collapse onto the first frame") {
    const std::vector<Frame> dup{frames[3], frames[3], frames[3], frames[10]};
    const ReferenceLibrary lib = build_library(dup, cfg.dots, cfg.markers);
    REQUIRE(lib.entries.size() == 2);
    CHECK(lib.entries[0].bend_id == 0);
    CHECK(lib.entries[1].bend_id == 3);
  }
  SECTION("frames without dots are rejected with a diagnostic") {
    const std::vector<Frame> mixed{Frame(320, 240), frames[0]};
    const ReferenceLibrary lib = build_library(mixed, cfg.dots, cfg.markers);
    REQUIRE(lib.entries.size() == 1);
    CHECK(lib.entries[0].bend_id == 1);
    REQUIRE(lib.metadata.diagnostics.size() == 1);
  }
  SECTION("nothing usable is an error") {
    CHECK_THROWS_AS(build_library({Frame(320, 240)}, cfg.dots, cfg.markers), Error);
    CHECK_THROWS_AS(build_library({}, cfg.dots, cfg.markers), Error);
  }
  SECTION("reference markers are stored per entry") {
    CHECK(fixture::library().entries.front().ref_markers.size() == fixture::geometry().marker_grid().size());
  }
}

TEST_CASE("ties go to the lowest bend id", "[dotref]") {
  const auto& frames = fixture::sweep_frames();
  const auto& cfg = fixture::pipeline();
  ReferenceLibrary lib = build_library({frames[2], frames[9]}, cfg.dots, cfg.markers);
  lib.entries[1].dots = lib.entries[0].dots;
  std::swap(lib.entries[0], lib.entries[1]);
  const ReferenceMatch m = match_reference(frames[2], lib, cfg.dots);
  CHECK(lib.entries[m.index].bend_id == 0);
}

TEST_CASE("a frame without dots has no proprioception", "[dotref]") {
  try {
    match_reference(Frame(320, 240), fixture::library(), fixture::pipeline().dots);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoProprioception);
  }
}
