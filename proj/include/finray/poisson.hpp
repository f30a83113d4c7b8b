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

// Dirichlet Poisson integration of a gradient field over a rectangular
// region, solved exactly in the discrete sine basis.

#include <cmath>
#include <numbers>
#include <vector>

#include "finray/image.hpp"

namespace finray {

struct GradientField {
  GrayImage gx;  // dz/dx
  GrayImage gy;  // dz/dy
};

/// Uncalibrated relative depth; zero on and outside the region boundary.
struct DepthMap {
  GrayImage z;
  BinaryMask valid_mask;
};

/// Bounding rectangle of the mask, or throws if the set pixels do not fill it.
inline Rect mask_rectangle(const BinaryMask& mask) {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  std::size_t n = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y)) continue;
      ++n;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (n == 0) throw Error(ErrorCode::UnsupportedRegion, "sensing region mask is empty");
  const Rect r{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  if (n != static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height)) {
    throw Error(ErrorCode::UnsupportedRegion, "sensing region mask is not a rectangle");
  }
  return r;
}

/// Central-difference divergence of g at interior pixels of the region; zero elsewhere.
inline GrayImage divergence(const GradientField& g, const Rect& r) {
  GrayImage div(g.gx.width(), g.gx.height(), 0.0);
  for (int y = r.y + 1; y < r.y + r.height - 1; ++y) {
    for (int x = r.x + 1; x < r.x + r.width - 1; ++x) {
      div(x, y) = 0.5 * (g.gx(x + 1, y) - g.gx(x - 1, y)) + 0.5 * (g.gy(x, y + 1) - g.gy(x, y - 1));
    }
  }
  return div;
}

namespace detail {

// S[i][j] = sin(pi * (i+1) * (j+1) / (n+1)); symmetric, S*S = (n+1)/2 * I.
inline std::vector<double> sine_basis(int n) {
  std::vector<double> s(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      s[static_cast<std::size_t>(i) * n + j] = std::sin(std::numbers::pi * (i + 1) * (j + 1) / (n + 1));
    }
  }
  return s;
}

// In-place A (rows x cols, row-major) <- S_rows * A * S_cols.
inline void sine_transform_2d(std::vector<double>& a, int rows, int cols,
                              const std::vector<double>& s_rows, const std::vector<double>& s_cols) {
  std::vector<double> tmp(a.size(), 0.0);
  // Along each row: tmp = A * S_cols.
  for (int r = 0; r < rows; ++r) {
    const double* arow = &a[static_cast<std::size_t>(r) * cols];
    double* trow = &tmp[static_cast<std::size_t>(r) * cols];
    for (int k = 0; k < cols; ++k) {
      const double v = arow[k];
      if (v == 0.0) continue;
      const double* srow = &s_cols[static_cast<std::size_t>(k) * cols];
      for (int j = 0; j < cols; ++j) trow[j] += v * srow[j];
    }
  }
  // Along each column: a = S_rows * tmp.
  std::fill(a.begin(), a.end(), 0.0);
  for (int i = 0; i < rows; ++i) {
    double* arow = &a[static_cast<std::size_t>(i) * cols];
    for (int k = 0; k < rows; ++k) {
      const double s = s_rows[static_cast<std::size_t>(i) * rows + k];
      const double* trow = &tmp[static_cast<std::size_t>(k) * cols];
      for (int j = 0; j < cols; ++j) arow[j] += s * trow[j];
    }
  }
}

}  // namespace detail

/// Solves lap(z) = div(g) on the rectangle given by mask, with z = 0 on the
/// rectangle's border pixels and outside it. 5-point Laplacian, unit spacing.
inline DepthMap poisson_integrate(const GradientField& g, const BinaryMask& mask) {
  if (!g.gx.same_shape(g.gy) || !g.gx.same_shape(mask)) {
    throw Error(ErrorCode::InvalidArgument, "gradient field and mask differ in size");
  }
  const Rect r = mask_rectangle(mask);
  DepthMap out{GrayImage(mask.width(), mask.height(), 0.0), mask};
  const int cols = r.width - 2;
  const int rows = r.height - 2;
  if (cols < 1 || rows < 1) return out;

  const GrayImage div = divergence(g, r);
  std::vector<double> f(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) f[static_cast<std::size_t>(i) * cols + j] = div(r.x + 1 + j, r.y + 1 + i);
  }

  const auto s_rows = detail::sine_basis(rows);
  const auto s_cols = detail::sine_basis(cols);
  detail::sine_transform_2d(f, rows, cols, s_rows, s_cols);
  for (int i = 0; i < rows; ++i) {
    const double ly = 2.0 * std::cos(std::numbers::pi * (i + 1) / (rows + 1)) - 2.0;
    for (int j = 0; j < cols; ++j) {
      const double lx = 2.0 * std::cos(std::numbers::pi * (j + 1) / (cols + 1)) - 2.0;
      f[static_cast<std::size_t>(i) * cols + j] /= (lx + ly);
    }
  }
  detail::sine_transform_2d(f, rows, cols, s_rows, s_cols);
  const double norm = 4.0 / (static_cast<double>(rows + 1) * static_cast<double>(cols + 1));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out.z(r.x + 1 + j, r.y + 1 + i) = norm * f[static_cast<std::size_t>(i) * cols + j];
    }
  }
  return out;
}

/// ||lap(z) - div(g)||_2 / ||div(g)||_2 over the region interior (0 when div g = 0).
inline double poisson_relative_residual(const DepthMap& depth, const GradientField& g) {
  const Rect r = mask_rectangle(depth.valid_mask);
  const GrayImage div = divergence(g, r);
  double num = 0.0;
  double den = 0.0;
  const GrayImage& z = depth.z;
  for (int y = r.y + 1; y < r.y + r.height - 1; ++y) {
    for (int x = r.x + 1; x < r.x + r.width - 1; ++x) {
      const double lap = z(x + 1, y) + z(x - 1, y) + z(x, y + 1) + z(x, y - 1) - 4.0 * z(x, y);
      num += (lap - div(x, y)) * (lap - div(x, y));
      den += div(x, y) * div(x, y);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace finray
