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

#include <algorithm>
#include <vector>

#include "finray/image.hpp"

namespace finray {

/// 8-connected labeling. Returns blobs with area in [min_area, max_area],
/// sorted by (centroid.y, centroid.x).
inline std::vector<Blob> connected_components(const BinaryMask& mask, int min_area,
                                              int max_area) {
  std::vector<Blob> blobs;
  Plane<std::uint8_t> seen(mask.width(), mask.height(), 0);
  std::vector<std::pair<int, int>> stack;

  for (int y0 = 0; y0 < mask.height(); ++y0) {
    for (int x0 = 0; x0 < mask.width(); ++x0) {
      if (!mask(x0, y0) || seen(x0, y0)) continue;

      Blob b{{0.0, 0.0}, 0, x0, y0, x0, y0};
      double sx = 0.0;
      double sy = 0.0;
      stack.clear();
      stack.emplace_back(x0, y0);
      seen(x0, y0) = 1;
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        ++b.area;
        sx += x;
        sy += y;
        b.x_min = std::min(b.x_min, x);
        b.x_max = std::max(b.x_max, x);
        b.y_min = std::min(b.y_min, y);
        b.y_max = std::max(b.y_max, y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int u = x + dx;
            const int v = y + dy;
            if (mask.in_bounds(u, v) && mask(u, v) && !seen(u, v)) {
              seen(u, v) = 1;
              stack.emplace_back(u, v);
            }
          }
        }
      }
      if (b.area < min_area || b.area > max_area) continue;
      b.centroid = {sx / b.area, sy / b.area};
      blobs.push_back(b);
    }
  }

  std::sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) {
    if (a.centroid.y != b.centroid.y) return a.centroid.y < b.centroid.y;
    return a.centroid.x < b.centroid.x;
  });
  return blobs;
}

/// Member-pixel mask of the largest 8-connected region (empty mask when none).
inline BinaryMask largest_component(const BinaryMask& mask) {
  Plane<int> label(mask.width(), mask.height(), -1);
  std::vector<int> areas;
  std::vector<std::pair<int, int>> stack;
  for (int y0 = 0; y0 < mask.height(); ++y0) {
    for (int x0 = 0; x0 < mask.width(); ++x0) {
      if (!mask(x0, y0) || label(x0, y0) >= 0) continue;
      const int id = static_cast<int>(areas.size());
      areas.push_back(0);
      stack.assign(1, {x0, y0});
      label(x0, y0) = id;
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        ++areas[id];
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int u = x + dx;
            const int v = y + dy;
            if (mask.in_bounds(u, v) && mask(u, v) && label(u, v) < 0) {
              label(u, v) = id;
              stack.emplace_back(u, v);
            }
          }
        }
      }
    }
  }
  BinaryMask out(mask.width(), mask.height(), 0);
  if (areas.empty()) return out;
  // First-labelled (raster order) region wins ties.
  const int best = static_cast<int>(std::max_element(areas.begin(), areas.end()) - areas.begin());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = label.data()[i] == best ? 1 : 0;
  }
  return out;
}

}  // namespace finray
