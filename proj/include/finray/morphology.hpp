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
#include <utility>
#include <vector>

#include "finray/image.hpp"

namespace finray {

namespace detail {

inline std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
    }
  }
  return offsets;
}

// For a disk element, edge replication reduces to taking the extremum over
// the in-image part of the window: clamping never leaves the disk.
inline BinaryMask rank_filter(const BinaryMask& in, int radius, bool dilate) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "morphology radius must be >= 1");
  const auto offsets = disk_offsets(radius);
  BinaryMask out(in.width(), in.height(), 0);
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      bool hit = !dilate;
      for (const auto& [dx, dy] : offsets) {
        const int u = x + dx;
        const int v = y + dy;
        if (!in.in_bounds(u, v)) continue;
        if (dilate && in(u, v)) {
          hit = true;
          break;
        }
        if (!dilate && !in(u, v)) {
          hit = false;
          break;
        }
      }
      out(x, y) = hit ? 1 : 0;
    }
  }
  return out;
}

}  // namespace detail

inline BinaryMask erode(const BinaryMask& m, int radius) {
  return detail::rank_filter(m, radius, false);
}

inline BinaryMask dilate(const BinaryMask& m, int radius) {
  return detail::rank_filter(m, radius, true);
}

inline BinaryMask morph_open(const BinaryMask& m, int radius) {
  return dilate(erode(m, radius), radius);
}

inline BinaryMask morph_close(const BinaryMask& m, int radius) {
  return erode(dilate(m, radius), radius);
}

}  // namespace finray
