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

// Black-marker segmentation, reference matching and shear display.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "finray/color.hpp"
#include "finray/components.hpp"
#include "finray/filters.hpp"
#include "finray/image.hpp"

namespace finray {

struct MarkerConfig {
  int median_kernel = 25;
  double dark_threshold = 12.0;  // L* units
  double px_per_mm = 10.0;
  double pitch_mm = 4.0;
  double diameter_mm = 1.0;
  double min_area_fraction = 0.3;
  double max_area_fraction = 3.0;
  double r_max_fraction = 0.45;  // of pitch
  double d_sig = 1.5;            // px; longer arrows are drawn at 3x
  int border_margin = 8;

  double pitch_px() const { return pitch_mm * px_per_mm; }
  double nominal_area() const {
    const double r = 0.5 * diameter_mm * px_per_mm;
    return std::numbers::pi * r * r;
  }
  int min_area() const { return std::max(1, static_cast<int>(std::floor(min_area_fraction * nominal_area()))); }
  int max_area() const { return static_cast<int>(std::ceil(max_area_fraction * nominal_area())); }
  double r_max() const { return r_max_fraction * pitch_px(); }
};

struct MarkerMatch {
  Point2 ref;
  Point2 cur;
  Point2 disp;
};

struct MarkerField {
  std::vector<MarkerMatch> matches;
  int unmatched_ref = 0;
  int unmatched_cur = 0;
  double shear_magnitude = 0.0;  // sum of |disp|, px
};

struct Arrow {
  Point2 from;
  Point2 to;
};

struct MarkerOverlay {
  std::vector<Arrow> arrows;
};

/// Dark blobs of median(L) - L, excluding centroids inside the border margin.
inline std::vector<Point2> extract_markers(const Frame& frame, const MarkerConfig& cfg) {
  const GrayImage lum = to_lab_luminosity(frame);
  const GrayImage background = median_blur(lum, cfg.median_kernel);
  BinaryMask dark(frame.width(), frame.height(), 0);
  for (std::size_t i = 0; i < dark.size(); ++i) {
    dark.data()[i] = background.data()[i] - lum.data()[i] > cfg.dark_threshold ? 1 : 0;
  }
  std::vector<Point2> out;
  const double m = cfg.border_margin;
  for (const Blob& b : connected_components(dark, cfg.min_area(), cfg.max_area())) {
    const Point2 c = b.centroid;
    if (c.x < m || c.y < m || c.x > frame.width() - 1 - m || c.y > frame.height() - 1 - m) {
      continue;
    }
    out.push_back(c);
  }
  return out;
}

/// Greedy nearest-neighbour matching in ascending distance; pairs beyond
/// r_max stay unmatched.
inline MarkerField track_markers(const std::vector<Point2>& cur, const std::vector<Point2>& ref,
                                 const MarkerConfig& cfg) {
  const double r_max = cfg.r_max();
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = 0; j < cur.size(); ++j) {
      const double d = distance(ref[i], cur[j]);
      if (d <= r_max) pairs.emplace_back(d, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<bool> ref_used(ref.size(), false);
  std::vector<bool> cur_used(cur.size(), false);
  MarkerField field;
  for (const auto& [d, i, j] : pairs) {
    if (ref_used[i] || cur_used[j]) continue;
    ref_used[i] = true;
    cur_used[j] = true;
    field.matches.push_back({ref[i], cur[j], cur[j] - ref[i]});
    field.shear_magnitude += d;
  }
  // Report in reference order so output does not depend on distance ties.
  std::sort(field.matches.begin(), field.matches.end(), [](const MarkerMatch& a, const MarkerMatch& b) {
    return std::tie(a.ref.y, a.ref.x) < std::tie(b.ref.y, b.ref.x);
  });
  field.unmatched_ref = static_cast<int>(std::count(ref_used.begin(), ref_used.end(), false));
  field.unmatched_cur = static_cast<int>(std::count(cur_used.begin(), cur_used.end(), false));
  return field;
}

inline MarkerOverlay overlay_arrows(const MarkerField& field, const MarkerConfig& cfg) {
  MarkerOverlay overlay;
  for (const auto& m : field.matches) {
    const double scale = m.disp.norm() > cfg.d_sig ? 3.0 : 1.0;
    overlay.arrows.push_back({m.ref, m.ref + scale * m.disp});
  }
  return overlay;
}

namespace detail {

inline void draw_line(Frame& f, Point2 a, Point2 b, Rgb color) {
  const double len = distance(a, b);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    const int x = static_cast<int>(std::lround(a.x + t * (b.x - a.x)));
    const int y = static_cast<int>(std::lround(a.y + t * (b.y - a.y)));
    if (f.in_bounds(x, y)) f.set(x, y, color);
  }
}

}  // namespace detail

/// Draws one arrow per match (reference -> tracked position) in yellow.
inline Frame render_overlay(const Frame& frame, const MarkerField& field, const MarkerConfig& cfg) {
  constexpr Rgb yellow{255, 255, 0};
  Frame out = frame;
  for (const auto& a : overlay_arrows(field, cfg).arrows) {
    detail::draw_line(out, a.from, a.to, yellow);
    const Point2 d = a.to - a.from;
    const double len = d.norm();
    if (len < 1.0) continue;
    // Arrow head: two short strokes at +-30 degrees from the shaft.
    const double head = std::min(4.0, 0.4 * len);
    const Point2 u{d.x / len, d.y / len};
    for (const double s : {-1.0, 1.0}) {
      const double c = std::cos(std::numbers::pi / 6.0);
      const double sn = s * std::sin(std::numbers::pi / 6.0);
      const Point2 back{-(u.x * c - u.y * sn), -(u.x * sn + u.y * c)};
      detail::draw_line(out, a.to, a.to + head * back, yellow);
    }
  }
  return out;
}

}  // namespace finray
