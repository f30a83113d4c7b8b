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

// Reference library persistence: a directory holding manifest.json and one
// P6 frame per entry.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>

#include "finray/config.hpp"
#include "finray/dotref.hpp"
#include "finray/pnm.hpp"

namespace finray {

inline constexpr int kLibraryFormatVersion = 1;

namespace detail {

inline json bins_to_json(const std::vector<std::optional<Point2>>& bins) {
  json out = json::array();
  for (const auto& b : bins) out.push_back(b ? json(*b) : json(nullptr));
  return out;
}

inline std::vector<std::optional<Point2>> bins_from_json(const json& j, int n_columns) {
  if (!j.is_array() || static_cast<int>(j.size()) != n_columns) {
    throw Error(ErrorCode::Format, "point matrix band has the wrong number of columns");
  }
  std::vector<std::optional<Point2>> out;
  for (const auto& b : j) out.push_back(b.is_null() ? std::nullopt : std::optional<Point2>(b.get<Point2>()));
  return out;
}

inline std::string entry_filename(int bend_id) {
  std::ostringstream name;
  name << "entry_" << std::setw(4) << std::setfill('0') << bend_id << ".ppm";
  return name.str();
}

}  // namespace detail

/// Writes the library. `config` is stored as a snapshot for provenance.
inline void save_library(const std::filesystem::path& dir, const ReferenceLibrary& lib, const Config& config) {
  std::filesystem::create_directories(dir);
  json entries = json::array();
  for (const auto& e : lib.entries) {
    const std::string file = detail::entry_filename(e.bend_id);
    pnm::write_ppm(dir / file, e.frame);
    entries.push_back({{"bend_id", e.bend_id},
                       {"frame", file},
                       {"dots",
                        {{"n_columns", e.dots.n_columns},
                         {"collisions", e.dots.collisions},
                         {"tip", detail::bins_to_json(e.dots.tip)},
                         {"base", detail::bins_to_json(e.dots.base)}}},
                       {"ref_markers", e.ref_markers}});
  }
  const json manifest{{"format_version", kLibraryFormatVersion},
                      {"width", lib.metadata.width},
                      {"height", lib.metadata.height},
                      {"config", config},
                      {"diagnostics", lib.metadata.diagnostics},
                      {"entries", std::move(entries)}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(1) << '\n';
}

struct LoadedLibrary {
  ReferenceLibrary library;
  Config config;  // snapshot recorded at build time
};

inline LoadedLibrary load_library(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::Io, "no library manifest at " + manifest_path.string());
  const json m = json::parse(in, nullptr, false);
  if (m.is_discarded() || !m.is_object()) throw Error(ErrorCode::Format, "library manifest is not valid JSON");
  if (m.value("format_version", -1) != kLibraryFormatVersion) {
    throw Error(ErrorCode::Format, "unsupported library format version");
  }

  LoadedLibrary out;
  try {
    out.config = parse_config(m.at("config"));
    auto& lib = out.library;
    lib.metadata.width = m.at("width").get<int>();
    lib.metadata.height = m.at("height").get<int>();
    lib.metadata.dot_config = out.config.pipeline.dots;
    lib.metadata.marker_config = out.config.pipeline.markers;
    lib.metadata.diagnostics = m.value("diagnostics", std::vector<std::string>{});
    for (const auto& je : m.at("entries")) {
      LibraryEntry e;
      e.bend_id = je.at("bend_id").get<int>();
      e.frame = pnm::read_ppm(dir / je.at("frame").get<std::string>());
      if (e.frame.width() != lib.metadata.width || e.frame.height() != lib.metadata.height) {
        throw Error(ErrorCode::Format, "library frame " + std::to_string(e.bend_id) + " has the wrong size");
      }
      const json& jd = je.at("dots");
      e.dots.width = lib.metadata.width;
      e.dots.height = lib.metadata.height;
      e.dots.n_columns = jd.at("n_columns").get<int>();
      if (e.dots.n_columns < 1) throw Error(ErrorCode::Format, "n_columns must be >= 1");
      e.dots.collisions = jd.value("collisions", 0);
      e.dots.tip = detail::bins_from_json(jd.at("tip"), e.dots.n_columns);
      e.dots.base = detail::bins_from_json(jd.at("base"), e.dots.n_columns);
      e.ref_markers = je.at("ref_markers").get<std::vector<Point2>>();
      for (const auto& other : lib.entries) {
        if (other.bend_id == e.bend_id) throw Error(ErrorCode::Format, "duplicate bend_id in library");
      }
      lib.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("library manifest: ") + e.what());
  }
  if (out.library.entries.empty()) throw Error(ErrorCode::Format, "library has no entries");
  return out;
}

}  // namespace finray
