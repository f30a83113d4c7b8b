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

// Proprioceptive reference library: yellow-dot extraction, the per-column
// reference point matrix, and nearest-bend-state lookup.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "finray/color.hpp"
#include "finray/components.hpp"
#include "finray/image.hpp"
#include "finray/markers.hpp"
#include "finray/morphology.hpp"

namespace finray {

struct DotConfig {
  HsvWindow window{{40.0, 0.45, 0.45}, {75.0, 1.0, 1.0}};
  int morph_radius = 1;
  int min_area = 8;
  int max_area = 400;
  double min_dot_separation = 6.0;
  int n_columns = 32;
  double dedup_epsilon = 1.0;  // mean dot displacement, px
  int min_dots = 4;
  double miss_penalty = 20.0;  // px
};

struct DotSet {
  std::vector<Point2> centers;
  std::string frame_id;
  int width = 0;
  int height = 0;
};

enum class Band { Tip = 0, Base = 1 };

/// Sparse column-binned dot layout: per side band, at most one point per bin.
struct ReferencePointMatrix {
  int width = 0;
  int height = 0;
  int n_columns = 0;
  std::vector<std::optional<Point2>> tip;
  std::vector<std::optional<Point2>> base;
  int collisions = 0;

  double bin_width() const { return static_cast<double>(width) / n_columns; }
  int bin_of(double x) const {
    return std::clamp(static_cast<int>(std::floor(x / bin_width())), 0, n_columns - 1);
  }
  Band band_of(double y) const { return y < 0.5 * height ? Band::Tip : Band::Base; }

  std::vector<std::optional<Point2>>& bins(Band b) { return b == Band::Tip ? tip : base; }
  const std::vector<std::optional<Point2>>& bins(Band b) const { return b == Band::Tip ? tip : base; }

  std::size_t occupied() const {
    auto n = [](const auto& v) {
      return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](const auto& p) { return p.has_value(); }));
    };
    return n(tip) + n(base);
  }
};

struct LibraryEntry {
  int bend_id = 0;
  Frame frame;
  ReferencePointMatrix dots;
  std::vector<Point2> ref_markers;
};

struct LibraryMetadata {
  int width = 0;
  int height = 0;
  DotConfig dot_config;
  MarkerConfig marker_config;
  std::vector<std::string> diagnostics;
};

struct ReferenceLibrary {
  std::vector<LibraryEntry> entries;
  LibraryMetadata metadata;
};

struct ReferenceMatch {
  std::size_t index = 0;
  double cost = 0.0;
};

inline DotSet extract_dots(const Frame& frame, const DotConfig& cfg, std::string frame_id = {}) {
  BinaryMask mask = threshold_hsv(to_hsv(frame), cfg.window);
  mask = morph_close(morph_open(mask, cfg.morph_radius), cfg.morph_radius);
  auto blobs = connected_components(mask, cfg.min_area, cfg.max_area);

  // Enforce the minimum separation, larger blobs first.
  std::stable_sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) { return a.area > b.area; });
  DotSet dots{{}, std::move(frame_id), frame.width(), frame.height()};
  for (const Blob& b : blobs) {
    const bool crowded = std::any_of(dots.centers.begin(), dots.centers.end(), [&](Point2 c) {
      return distance(c, b.centroid) < cfg.min_dot_separation;
    });
    if (!crowded) dots.centers.push_back(b.centroid);
  }
  std::sort(dots.centers.begin(), dots.centers.end(), [](Point2 a, Point2 b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return dots;
}

inline ReferencePointMatrix to_point_matrix(const DotSet& dots, int n_columns) {
  if (n_columns < 1) throw Error(ErrorCode::InvalidArgument, "n_columns must be >= 1");
  ReferencePointMatrix m;
  m.width = dots.width;
  m.height = dots.height;
  m.n_columns = n_columns;
  m.tip.assign(static_cast<std::size_t>(n_columns), std::nullopt);
  m.base.assign(static_cast<std::size_t>(n_columns), std::nullopt);

  // Expected row of each band: median dot row within it.
  auto expected_row = [&](Band band) {
    std::vector<double> ys;
    for (const Point2& c : dots.centers) {
      if (m.band_of(c.y) == band) ys.push_back(c.y);
    }
    if (ys.empty()) return 0.0;
    std::nth_element(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(ys.size() / 2), ys.end());
    return ys[ys.size() / 2];
  };
  const double rows[2] = {expected_row(Band::Tip), expected_row(Band::Base)};

  for (const Point2& c : dots.centers) {
    const Band band = m.band_of(c.y);
    auto& slot = m.bins(band)[static_cast<std::size_t>(m.bin_of(c.x))];
    if (!slot) {
      slot = c;
      continue;
    }
    ++m.collisions;
    const double row = rows[static_cast<int>(band)];
    if (std::fabs(c.y - row) < std::fabs(slot->y - row)) slot = c;
  }
  return m;
}

/// Mean over live dots of the distance to the nearest matrix point within
/// +-1 column bin of the same band; dots with no candidate cost miss_penalty.
inline double match_cost(const DotSet& live, const ReferencePointMatrix& ref, double miss_penalty) {
  if (live.centers.empty()) return miss_penalty;
  double total = 0.0;
  for (const Point2& c : live.centers) {
    const auto& bins = ref.bins(ref.band_of(c.y));
    const int b = ref.bin_of(c.x);
    double best = std::numeric_limits<double>::infinity();
    for (int k = std::max(0, b - 1); k <= std::min(ref.n_columns - 1, b + 1); ++k) {
      if (const auto& p = bins[static_cast<std::size_t>(k)]) best = std::min(best, distance(c, *p));
    }
    total += std::isfinite(best) ? best : miss_penalty;
  }
  return total / static_cast<double>(live.centers.size());
}

inline ReferenceMatch match_reference(const DotSet& live, const ReferenceLibrary& lib,
                                      const DotConfig& cfg) {
  if (lib.entries.empty()) throw Error(ErrorCode::InvalidArgument, "reference library is empty");
  if (live.centers.empty()) {
    throw Error(ErrorCode::NoProprioception, "no proprioceptive dots found in frame");
  }
  ReferenceMatch best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < lib.entries.size(); ++i) {
    const double cost = match_cost(live, lib.entries[i].dots, cfg.miss_penalty);
    const bool better = cost < best.cost ||
                        (cost == best.cost && lib.entries[i].bend_id < lib.entries[best.index].bend_id);
    if (better) best = {i, cost};
  }
  return best;
}

inline ReferenceMatch match_reference(const Frame& frame, const ReferenceLibrary& lib,
                                      const DotConfig& cfg) {
  return match_reference(extract_dots(frame, cfg), lib, cfg);
}

/// Builds the library from a contact-free bend sweep. Frames too close to the
/// previously retained entry are dropped; frames with fewer than min_dots dots
/// are rejected with a diagnostic. bend_id is the frame's index in the input.
inline ReferenceLibrary build_library(const std::vector<Frame>& frames, const DotConfig& dot_cfg,
                                      const MarkerConfig& marker_cfg) {
  ReferenceLibrary lib;
  lib.metadata.dot_config = dot_cfg;
  lib.metadata.marker_config = marker_cfg;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Frame& f = frames[i];
    if (!lib.entries.empty() && !f.same_shape(lib.entries.front().frame)) {
      throw Error(ErrorCode::InvalidArgument, "reference frames differ in size");
    }
    DotSet dots = extract_dots(f, dot_cfg, std::to_string(i));
    if (static_cast<int>(dots.centers.size()) < dot_cfg.min_dots) {
      lib.metadata.diagnostics.push_back("frame " + std::to_string(i) + ": rejected, " +
                                         std::to_string(dots.centers.size()) + " dots < min_dots " +
                                         std::to_string(dot_cfg.min_dots));
      continue;
    }
    if (!lib.entries.empty() &&
        match_cost(dots, lib.entries.back().dots, dot_cfg.miss_penalty) <= dot_cfg.dedup_epsilon) {
      continue;
    }
    LibraryEntry e;
    e.bend_id = static_cast<int>(i);
    e.dots = to_point_matrix(dots, dot_cfg.n_columns);
    e.ref_markers = extract_markers(f, marker_cfg);
    e.frame = f;
    lib.entries.push_back(std::move(e));
  }
  if (lib.entries.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no usable reference frames");
  }
  lib.metadata.width = lib.entries.front().frame.width();
  lib.metadata.height = lib.entries.front().frame.height();
  return lib;
}

}  // namespace finray
