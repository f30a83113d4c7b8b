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

#include <fstream>

#include "finray/finray.hpp"
#include "../support/fixtures.hpp"

using namespace finray;

namespace {

ErrorCode code_of_parse(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

void write_json(const std::filesystem::path& p, const json& j) { std::ofstream(p) << j.dump(1); }

}  // namespace

TEST_CASE("default config survives a JSON round trip", "[config]") {
  const Config c;
  const json j = c;
  const Config back = parse_config(j);
  CHECK(json(back) == j);
  CHECK(parse_config(json::object()).pipeline.markers.d_sig == c.pipeline.markers.d_sig);
}

TEST_CASE("partial configs keep defaults for missing keys", "[config]") {
  const Config c = parse_config(json::parse(R"({"markers": {"d_sig": 2.5}, "orientation": {"tau": 0.4}})"));
  CHECK(c.pipeline.markers.d_sig == 2.5);
  CHECK(c.pipeline.orientation.tau == 0.4);
  CHECK(c.pipeline.markers.median_kernel == 25);
  CHECK(c.placement.shear_threshold == 15.0);
}

TEST_CASE("config rejects unknown keys, bad types and bad values", "[config]") {
  CHECK(code_of_parse(json::parse(R"({"markers": {"dsig": 2}})")) == ErrorCode::Format);
  CHECK(code_of_parse(json::parse(R"({"unknown": {}})")) == ErrorCode::Format);
  CHECK(code_of_parse(json::parse(R"({"markers": {"d_sig": "wide"}})")) == ErrorCode::Format);
  CHECK(code_of_parse(json::parse(R"({"markers": {"median_kernel": 24}})")) == ErrorCode::InvalidArgument);
  CHECK(code_of_parse(json::parse(R"({"orientation": {"tau": 1.5}})")) == ErrorCode::InvalidArgument);
  CHECK(code_of_parse(json::parse(R"({"reconstruct": {"alpha": 0}})")) == ErrorCode::InvalidArgument);
  CHECK(code_of_parse(json::parse(R"([1, 2])")) == ErrorCode::Format);
}

TEST_CASE("command-line overrides", "[config]") {
  fixture::ScratchDir dir("cfg");
  write_json(dir / "c.json", json::parse(R"({"placement": {"shear_threshold": 20}})"));
  const Config c = load_config(dir / "c.json", {"placement.shear_threshold=9", "reconstruct.region=[0,10,300,210]"});
  CHECK(c.placement.shear_threshold == 9.0);
  CHECK(c.pipeline.reconstruct.region == Rect{0, 10, 300, 210});
  CHECK_THROWS_AS(load_config({}, {"shear_threshold=9"}), Error);
  CHECK_THROWS_AS(load_config({}, {"placement.shear_threshold"}), Error);
  CHECK_THROWS_AS(load_config({}, {"placement.shear_threshold=fast"}), Error);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), Error);
  std::ofstream(dir / "bad.json") << "{";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), Error);
}

TEST_CASE("scene JSON round trip", "[io]") {
  sim::Scene s;
  s.bend = 0.25;
  s.indenter = sim::Stem{5.0, 10.0, -12.5, 0.8, {1.0, -2.0}};
  s.shear_px = {1.5, -0.5};
  s.torsion_deg = 2.0;
  s.torsion_center_px = Point2{100, 120};
  s.noise_sigma = 1.0;
  s.seed = 99;
  const sim::Scene back = scene_from_json(scene_to_json(s));
  CHECK(scene_to_json(back) == scene_to_json(s));
  CHECK(std::get<sim::Stem>(back.indenter).angle_deg == -12.5);

  for (const char* type : {"sphere", "screwhead", "none"}) {
    const json j{{"type", type}};
    CHECK(indenter_to_json(indenter_from_json(j)).at("type") == type);
  }
  CHECK_THROWS_AS(indenter_from_json(json{{"type", "cube"}}), Error);
  CHECK_THROWS_AS(scene_from_json(json{{"bend", 0.1}, {"bendd", 0.2}}), Error);
}

TEST_CASE("scenario parsing", "[io]") {
  const auto sc = scenario_from_json(json::parse(R"({
      "handoff_angle_deg": {"min": -45, "max": 45}, "table_step": null, "trials": 4,
      "faults": {"slip_at_capture": 2, "slipped_depth_mm": 0.1}, "seed": 8})"));
  REQUIRE(sc.handoff_angle_range.has_value());
  CHECK(sc.handoff_angle_range->first == -45.0);
  CHECK_FALSE(sc.table_step.has_value());
  CHECK(sc.trials == 4);
  CHECK(*sc.slip_at_capture == 2);
  CHECK(sc.slipped_depth_mm == 0.1);
  CHECK(sc.seed == 8);
  CHECK(scenario_from_json(json::parse(R"({"handoff_angle_deg": 12})")).handoff_angle_deg == 12.0);
  CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"handoff_angle_deg": {"min": 50, "max": 10}})")), Error);
  CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"handoff_angle_deg": "up"})")), Error);
  CHECK_THROWS_AS(scenario_from_json(json::parse(R"({"trails": 3})")), Error);
}

TEST_CASE("marker field JSON round trip", "[io]") {
  MarkerField f;
  f.matches = {{{1, 2}, {3, 4}, {2, 2}}, {{5, 6}, {5, 6}, {0, 0}}};
  f.unmatched_ref = 1;
  f.unmatched_cur = 2;
  f.shear_magnitude = std::hypot(2.0, 2.0);
  const MarkerField back = marker_field_from_json(marker_record(f));
  CHECK(marker_record(back) == marker_record(f));
}

TEST_CASE("orientation records", "[io]") {
  const json ok = orientation_record(OrientationEstimate{12.5, 4.0, 900}, 900, {});
  CHECK(ok.at("theta_deg") == 12.5);
  const json none = orientation_record(std::nullopt, 40, {"no_contact"});
  CHECK(none.at("theta_deg").is_null());
  CHECK(none.at("area") == 40);
  CHECK(none.at("flags")[0] == "no_contact");
}

TEST_CASE("library save and load", "[io]") {
  fixture::ScratchDir dir("lib");
  const auto& lib = fixture::library();
  save_library(dir.path(), lib, Config{});

  SECTION("round trip preserves entries and retrieval") {
    const LoadedLibrary back = load_library(dir.path());
    REQUIRE(back.library.entries.size() == lib.entries.size());
    for (std::size_t i = 0; i < lib.entries.size(); ++i) {
      const auto& a = lib.entries[i];
      const auto& b = back.library.entries[i];
      CHECK(a.bend_id == b.bend_id);
      CHECK(a.frame == b.frame);
      CHECK(a.ref_markers == b.ref_markers);
      CHECK(a.dots.tip == b.dots.tip);
      CHECK(a.dots.base == b.dots.base);
    }
    const auto& frames = fixture::sweep_frames();
    CHECK(match_reference(frames[11], back.library, back.config.pipeline.dots).index == 11);
  }
  SECTION("wrong format version") {
    json m = read_json(dir / "manifest.json");
    m["format_version"] = kLibraryFormatVersion + 1;
    write_json(dir / "manifest.json", m);
    CHECK_THROWS_AS(load_library(dir.path()), Error);
  }
  SECTION("duplicate bend ids") {
    json m = read_json(dir / "manifest.json");
    m["entries"][1]["bend_id"] = m["entries"][0]["bend_id"];
    write_json(dir / "manifest.json", m);
    CHECK_THROWS_AS(load_library(dir.path()), Error);
  }
  SECTION("mismatched frame size") {
    json m = read_json(dir / "manifest.json");
    m["width"] = 100;
    write_json(dir / "manifest.json", m);
    CHECK_THROWS_AS(load_library(dir.path()), Error);
  }
  SECTION("missing directory") { CHECK_THROWS_AS(load_library(dir / "nowhere"), Error); }
}

TEST_CASE("trial report serialisation", "[io]") {
  TrialReport r;
  r.path = {PlacementState::WaitHandoff, PlacementState::Aborted};
  r.final_state = PlacementState::Aborted;
  r.diagnostics = {"x"};
  const json j = trial_report_to_json(r);
  CHECK(j.at("final_state") == "Aborted");
  CHECK(j.at("path").size() == 2);
  CHECK(j.at("estimated_theta_deg").is_null());
}
