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
#include <cmath>
#include <numbers>

#include "finray/components.hpp"
#include "finray/poisson.hpp"

namespace finray {

struct OrientationConfig {
  double tau = 0.3;              // contact threshold, fraction of max depth
  double z_noise_floor = 1.0;    // below this max depth there is no contact
  int min_contact_area = 200;    // px
  double min_elongation = 2.0;   // principal / secondary eigenvalue
};

/// theta: degrees in (-90, 90], from the tip direction (-y) toward +x.
struct OrientationEstimate {
  double theta_deg = 0.0;
  double confidence = 1.0;
  int region_area = 0;
};

/// Maps any axis angle into (-90, 90].
inline double wrap_axis_angle(double deg) {
  double t = std::fmod(deg, 180.0);
  if (t > 90.0) t -= 180.0;
  if (t <= -90.0) t += 180.0;
  return t;
}

inline BinaryMask contact_mask(const DepthMap& depth, double tau, double z_noise_floor) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in (0, 1)");
  BinaryMask m(depth.z.width(), depth.z.height(), 0);
  double z_max = 0.0;
  for (double v : depth.z.data()) z_max = std::max(z_max, v);
  if (z_max <= z_noise_floor) return m;
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = depth.z.data()[i] > tau * z_max ? 1 : 0;
  return m;
}

inline BinaryMask contact_mask(const DepthMap& depth, const OrientationConfig& cfg) {
  return contact_mask(depth, cfg.tau, cfg.z_noise_floor);
}

/// Unweighted PCA of the set pixels of a region.
inline OrientationEstimate principal_axis(const BinaryMask& region) {
  double n = 0.0, sx = 0.0, sy = 0.0;
  for (int y = 0; y < region.height(); ++y) {
    for (int x = 0; x < region.width(); ++x) {
      if (!region(x, y)) continue;
      n += 1.0;
      sx += x;
      sy += y;
    }
  }
  OrientationEstimate est;
  est.region_area = static_cast<int>(n);
  if (n < 2.0) return est;
  const double mx = sx / n;
  const double my = sy / n;
  double cxx = 0.0, cyy = 0.0, cxy = 0.0;
  for (int y = 0; y < region.height(); ++y) {
    for (int x = 0; x < region.width(); ++x) {
      if (!region(x, y)) continue;
      cxx += (x - mx) * (x - mx);
      cyy += (y - my) * (y - my);
      cxy += (x - mx) * (y - my);
    }
  }
  cxx /= n;
  cyy /= n;
  cxy /= n;
  const double half_trace = 0.5 * (cxx + cyy);
  const double root = std::hypot(0.5 * (cxx - cyy), cxy);
  const double l1 = half_trace + root;
  const double l2 = std::max(half_trace - root, 1e-12);
  // Dominant eigenvector angle from +x (image coordinates, y down).
  const double phi = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
  const double vx = std::cos(phi);
  const double vy = std::sin(phi);
  est.theta_deg = wrap_axis_angle(std::atan2(vx, -vy) * 180.0 / std::numbers::pi);
  est.confidence = std::min(l1 / l2, 1e12);
  return est;
}

/// Largest contact region's area (0 without contact).
inline int contact_area(const DepthMap& depth, const OrientationConfig& cfg) {
  return static_cast<int>(count_true(largest_component(contact_mask(depth, cfg))));
}

inline OrientationEstimate estimate_orientation(const DepthMap& depth, const OrientationConfig& cfg) {
  const BinaryMask region = largest_component(contact_mask(depth, cfg));
  const OrientationEstimate est = principal_axis(region);
  if (est.region_area < cfg.min_contact_area) {
    throw Error(ErrorCode::NoContact, "contact region of " + std::to_string(est.region_area) +
                                          " px is below min_contact_area");
  }
  if (est.confidence < cfg.min_elongation) {
    throw Error(ErrorCode::AmbiguousOrientation, "contact region has no dominant axis");
  }
  return est;
}

}  // namespace finray
