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
#include <cstdint>
#include <vector>

#include "finray/image.hpp"

namespace finray {

/// Square-window median with edge replication. kernel must be odd and >= 3.
///
/// Values are replaced by their rank among the image's distinct values, and
/// each row is swept with a two-level rank histogram, so the result is the
/// exact window median at O(kernel) cost per pixel.
inline GrayImage median_blur(const GrayImage& img, int kernel) {
  if (kernel < 3 || kernel % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "median kernel must be odd and >= 3");
  }
  GrayImage out(img.width(), img.height());
  if (img.empty()) return out;

  std::vector<double> values = img.data();
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  Plane<std::uint32_t> rank(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    rank.data()[i] = static_cast<std::uint32_t>(
        std::lower_bound(values.begin(), values.end(), img.data()[i]) - values.begin());
  }

  constexpr std::uint32_t bucket_shift = 6;
  const std::size_t n_ranks = values.size();
  std::vector<int> fine(n_ranks, 0);
  std::vector<int> coarse((n_ranks >> bucket_shift) + 1, 0);
  const int r = kernel / 2;
  const int mid = kernel * kernel / 2;  // 0-based order statistic

  for (int y = 0; y < img.height(); ++y) {
    std::size_t mb = 0;  // bucket holding the median
    int below = 0;       // count of window values in buckets < mb
    auto update = [&](std::uint32_t v, int delta) {
      fine[v] += delta;
      coarse[v >> bucket_shift] += delta;
      if ((v >> bucket_shift) < mb) below += delta;
    };
    auto column = [&](int x, int delta) {
      const int cx = std::clamp(x, 0, img.width() - 1);
      for (int dy = -r; dy <= r; ++dy) update(rank(cx, std::clamp(y + dy, 0, img.height() - 1)), delta);
    };

    for (int dx = -r; dx <= r; ++dx) column(dx, +1);
    for (int x = 0; x < img.width(); ++x) {
      if (x > 0) {
        column(x - r - 1, -1);
        column(x + r, +1);
      }
      while (below > mid) below -= coarse[--mb];
      while (below + coarse[mb] <= mid) below += coarse[mb++];
      std::size_t v = mb << bucket_shift;
      int seen = below;
      while (seen + fine[v] <= mid) seen += fine[v++];
      out(x, y) = values[v];
    }
    for (int dx = -r; dx <= r; ++dx) column(img.width() - 1 + dx, -1);
  }
  return out;
}

}  // namespace finray
