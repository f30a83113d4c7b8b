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

// Forward model of the sensorized finger. The shading model is the exact
// inverse of gradients_from_difference, so every pipeline stage has an
// analytic ground truth to be checked against.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "finray/image.hpp"
#include "finray/orientation.hpp"
#include "finray/reconstruct.hpp"

namespace finray::sim {

struct SensorGeometry {
  int width = 320;
  int height = 240;
  double px_per_mm = 10.0;
  double marker_pitch_mm = 4.0;
  double marker_diameter_mm = 1.0;
  Rect sensing{0, 20, 320, 200};
  std::vector<Point2> tip_dots{{60, 10}, {108, 10}, {156, 10}, {204, 10}, {252, 10}, {300, 10}};
  std::vector<Point2> base_dots{{60, 230}, {108, 230}, {156, 230}, {204, 230}, {252, 230}, {300, 230}};
  double dot_radius_px = 4.0;
  int border_margin = 8;

  double max_bend_px = 40.0;
  double bend_pivot_row = 720.0;      // virtual finger base, far below the image
  Point2 bend_direction{-1.0, 0.0};
  double marker_bend_coupling = 0.1;  // gel markers follow the bend warp weakly

  std::array<double, 3> base_rgb{110.0, 100.0, 120.0};
  double lateral_ramp = 12.0;  // red brighter on the left, green on the right
  double bend_ramp = 30.0;     // bend-dependent brightness change along y
  double marker_albedo = 0.2;
  Rgb dot_color{235, 215, 40};

  Point2 sensing_center() const {
    return {sensing.x + 0.5 * (sensing.width - 1), sensing.y + 0.5 * (sensing.height - 1)};
  }
  double marker_radius_px() const { return 0.5 * marker_diameter_mm * px_per_mm; }

  /// Nominal marker grid, centred in the sensing region.
  std::vector<Point2> marker_grid() const {
    const double pitch = marker_pitch_mm * px_per_mm;
    const int nx = static_cast<int>(std::floor(sensing.width / pitch));
    const int ny = static_cast<int>(std::floor(sensing.height / pitch));
    const double x0 = sensing.x + 0.5 * (sensing.width - (nx - 1) * pitch);
    const double y0 = sensing.y + 0.5 * (sensing.height - (ny - 1) * pitch);
    std::vector<Point2> grid;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) grid.push_back({x0 + i * pitch, y0 + j * pitch});
    }
    return grid;
  }

  std::vector<Point2> dot_anchors() const {
    std::vector<Point2> all = tip_dots;
    all.insert(all.end(), base_dots.begin(), base_dots.end());
    return all;
  }
};

struct NoIndenter {};

/// Spherical cap; positions in mm relative to the sensing-region centre.
struct Sphere {
  double radius_mm = 3.0;
  Point2 center_mm{0.0, 0.0};
  double depth_mm = 0.5;
};

/// Cylindrical stem of finite length (capsule footprint).
struct Stem {
  double width_mm = 6.0;
  double length_mm = 12.0;
  double angle_deg = 0.0;
  double depth_mm = 1.0;
  Point2 center_mm{0.0, 0.0};
};

/// Flat-topped pan head, z = d (1 - (r/R)^6).
struct ScrewHead {
  double radius_mm = 3.0;
  double depth_mm = 0.5;
  Point2 center_mm{0.0, 0.0};
};

using Indenter = std::variant<NoIndenter, Sphere, Stem, ScrewHead>;

struct Scene {
  double bend = 0.0;
  Indenter indenter = NoIndenter{};
  Point2 shear_px{0.0, 0.0};
  double torsion_deg = 0.0;
  std::optional<Point2> torsion_center_px;
  /// Extra rigid offset of the proprioceptive dots (finger twist the
  /// reference sweep cannot represent).
  Point2 dot_offset_px{0.0, 0.0};
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  GrayImage depth;
  GradientField gradients;
  BinaryMask contact;
  std::vector<Point2> dots;
  std::vector<Point2> markers;
  std::optional<double> theta_deg;
};

struct SurfaceSample {
  double z = 0.0;
  double gx = 0.0;
  double gy = 0.0;
};

/// Quadratic-in-row bend field; tip-row anchors move exactly b * max_bend_px.
inline Point2 bend_displacement(const SensorGeometry& g, double b, Point2 p) {
  double tip_row = g.bend_pivot_row;
  for (const Point2& a : g.dot_anchors()) tip_row = std::min(tip_row, a.y);
  const double s = (g.bend_pivot_row - p.y) / (g.bend_pivot_row - tip_row);
  return (b * g.max_bend_px * s * s) * g.bend_direction;
}

inline std::vector<Point2> bend_warp(const SensorGeometry& g, double b) {
  if (!(b >= 0.0 && b <= 1.0)) throw Error(ErrorCode::InvalidScene, "bend must lie in [0, 1]");
  std::vector<Point2> out;
  for (const Point2& a : g.dot_anchors()) out.push_back(a + bend_displacement(g, b, a));
  return out;
}

namespace detail {

inline SurfaceSample cap_profile(double rho, double depth, Point2 w) {
  const double r2 = w.x * w.x + w.y * w.y;
  const double chord2 = rho * rho - (rho - depth) * (rho - depth);
  if (depth <= 0.0 || r2 >= chord2) return {};
  const double s = std::sqrt(rho * rho - r2);
  return {s - (rho - depth), -w.x / s, -w.y / s};
}

inline Point2 to_px(const SensorGeometry& g, Point2 mm) {
  return g.sensing_center() + g.px_per_mm * mm;
}

inline Point2 stem_axis(double angle_deg) {
  const double t = angle_deg * std::numbers::pi / 180.0;
  return {std::sin(t), -std::cos(t)};
}

struct Footprint {
  Point2 lo;
  Point2 hi;
  bool any = false;
};

inline Footprint footprint(const SensorGeometry& g, const Indenter& ind) {
  const double k = g.px_per_mm;
  auto cap_half_chord = [](double rho, double d) { return std::sqrt(std::max(0.0, rho * rho - (rho - d) * (rho - d))); };
  return std::visit(
      [&](const auto& v) -> Footprint {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoIndenter>) {
          return {};
        } else if constexpr (std::is_same_v<T, Sphere>) {
          const double a = cap_half_chord(v.radius_mm * k, v.depth_mm * k);
          const Point2 c = to_px(g, v.center_mm);
          return {{c.x - a, c.y - a}, {c.x + a, c.y + a}, v.depth_mm > 0.0};
        } else if constexpr (std::is_same_v<T, Stem>) {
          const double a = cap_half_chord(0.5 * v.width_mm * k, v.depth_mm * k);
          const Point2 c = to_px(g, v.center_mm);
          const Point2 h = (0.5 * v.length_mm * k) * stem_axis(v.angle_deg);
          return {{c.x - std::fabs(h.x) - a, c.y - std::fabs(h.y) - a},
                  {c.x + std::fabs(h.x) + a, c.y + std::fabs(h.y) + a}, v.depth_mm > 0.0};
        } else {
          const double a = v.radius_mm * k;
          const Point2 c = to_px(g, v.center_mm);
          return {{c.x - a, c.y - a}, {c.x + a, c.y + a}, v.depth_mm > 0.0};
        }
      },
      ind);
}

}  // namespace detail

/// Analytic surface (z in px, dimensionless gradients) at a pixel centre.
inline SurfaceSample surface_at(const SensorGeometry& g, const Indenter& ind, Point2 p) {
  const double k = g.px_per_mm;
  return std::visit(
      [&](const auto& v) -> SurfaceSample {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoIndenter>) {
          return {};
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return detail::cap_profile(v.radius_mm * k, v.depth_mm * k, p - detail::to_px(g, v.center_mm));
        } else if constexpr (std::is_same_v<T, Stem>) {
          const Point2 c = detail::to_px(g, v.center_mm);
          const Point2 u = detail::stem_axis(v.angle_deg);
          const double half = 0.5 * v.length_mm * k;
          const Point2 rel = p - c;
          const double t = std::clamp(rel.x * u.x + rel.y * u.y, -half, half);
          return detail::cap_profile(0.5 * v.width_mm * k, v.depth_mm * k, rel - t * u);
        } else {
          const double big_r = v.radius_mm * k;
          const double d = v.depth_mm * k;
          const Point2 rel = p - detail::to_px(g, v.center_mm);
          const double r = rel.norm();
          if (d <= 0.0 || r >= big_r) return {};
          const double rho = r / big_r;
          const double rho5 = rho * rho * rho * rho * rho;
          const double dzdr = -6.0 * d * rho5 / big_r;
          SurfaceSample s{d * (1.0 - rho5 * rho), 0.0, 0.0};
          if (r > 0.0) {
            s.gx = dzdr * rel.x / r;
            s.gy = dzdr * rel.y / r;
          }
          return s;
        }
      },
      ind);
}

inline void validate(const Scene& scene, const SensorGeometry& g) {
  if (!(scene.bend >= 0.0 && scene.bend <= 1.0)) throw Error(ErrorCode::InvalidScene, "bend must lie in [0, 1]");
  if (!(scene.noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidScene, "noise sigma must be >= 0");
  const bool bad = std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoIndenter>) {
          return false;
        } else if constexpr (std::is_same_v<T, Stem>) {
          return !(v.depth_mm >= 0.0 && v.depth_mm <= 0.5 * v.width_mm && v.width_mm > 0.0 && v.length_mm >= 0.0 &&
                   v.angle_deg > -90.0 && v.angle_deg <= 90.0);
        } else {
          return !(v.depth_mm >= 0.0 && v.depth_mm <= v.radius_mm && v.radius_mm > 0.0);
        }
      },
      scene.indenter);
  if (bad) throw Error(ErrorCode::InvalidScene, "indenter parameters out of range");
  const auto fp = detail::footprint(g, scene.indenter);
  if (fp.any) {
    const Rect& s = g.sensing;
    if (fp.lo.x <= s.x || fp.lo.y <= s.y || fp.hi.x >= s.x + s.width - 1 || fp.hi.y >= s.y + s.height - 1) {
      throw Error(ErrorCode::InvalidScene, "indenter footprint leaves the sensing region");
    }
  }
}

/// Marker centres after the weak bend coupling, torsion, and uniform shear.
inline std::vector<Point2> displaced_markers(const Scene& scene, const SensorGeometry& g) {
  const Point2 center = scene.torsion_center_px.value_or(g.sensing_center());
  const double t = scene.torsion_deg * std::numbers::pi / 180.0;
  const double c = std::cos(t);
  const double s = std::sin(t);
  std::vector<Point2> out;
  for (const Point2& m : g.marker_grid()) {
    const Point2 bent = m + g.marker_bend_coupling * bend_displacement(g, scene.bend, m);
    const Point2 rel = bent - center;
    const Point2 rotated = center + Point2{c * rel.x - s * rel.y, s * rel.x + c * rel.y};
    const Point2 p = rotated + scene.shear_px;
    if (p.x >= 0.0 && p.y >= 0.0 && p.x <= g.width - 1 && p.y <= g.height - 1) out.push_back(p);
  }
  return out;
}

namespace detail {

// Calls fn(x, y, coverage) for pixels a disk touches, 4x4 supersampled.
template <class Fn>
void for_disk_coverage(const SensorGeometry& g, Point2 c, double radius, Fn&& fn) {
  const int x0 = std::max(0, static_cast<int>(std::floor(c.x - radius - 1)));
  const int x1 = std::min(g.width - 1, static_cast<int>(std::ceil(c.x + radius + 1)));
  const int y0 = std::max(0, static_cast<int>(std::floor(c.y - radius - 1)));
  const int y1 = std::min(g.height - 1, static_cast<int>(std::ceil(c.y + radius + 1)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      int hits = 0;
      for (int sy = 0; sy < 4; ++sy) {
        for (int sx = 0; sx < 4; ++sx) {
          const double px = x + (sx + 0.5) / 4.0 - 0.5 - c.x;
          const double py = y + (sy + 0.5) / 4.0 - 0.5 - c.y;
          if (px * px + py * py <= r2) ++hits;
        }
      }
      if (hits > 0) fn(x, y, hits / 16.0);
    }
  }
}

}  // namespace detail

struct Rendered {
  Frame frame;
  GroundTruth truth;
};

inline Rendered render(const Scene& scene, const SensorGeometry& g, const PhotometricConfig& photo) {
  validate(scene, g);
  const int w = g.width;
  const int h = g.height;
  Rendered out;
  GroundTruth& gt = out.truth;
  gt.depth = GrayImage(w, h, 0.0);
  gt.gradients = {GrayImage(w, h, 0.0), GrayImage(w, h, 0.0)};
  gt.contact = BinaryMask(w, h, 0);
  if (const auto* stem = std::get_if<Stem>(&scene.indenter)) gt.theta_deg = wrap_axis_angle(stem->angle_deg);

  std::vector<std::array<double, 3>> rgb(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double fx = static_cast<double>(x) / w - 0.5;
      const double fy = static_cast<double>(y) / h - 0.5;
      const double bend_term = g.bend_ramp * scene.bend * fy;
      auto& px = rgb[static_cast<std::size_t>(y) * w + x];
      px = {g.base_rgb[0] - g.lateral_ramp * fx + bend_term, g.base_rgb[1] + g.lateral_ramp * fx + bend_term,
            g.base_rgb[2] + bend_term};
      if (!g.sensing.contains(x, y)) continue;
      const SurfaceSample s = surface_at(g, scene.indenter, {static_cast<double>(x), static_cast<double>(y)});
      gt.depth(x, y) = s.z;
      gt.gradients.gx(x, y) = s.gx;
      gt.gradients.gy(x, y) = s.gy;
      gt.contact(x, y) = s.z > 0.0 ? 1 : 0;
      px[0] += s.gx / (2.0 * photo.alpha);
      px[1] -= s.gx / (2.0 * photo.alpha);
      px[2] += s.gy / photo.beta;
    }
  }

  gt.markers = displaced_markers(scene, g);
  const double attenuation = 1.0 - g.marker_albedo;
  for (const Point2& m : gt.markers) {
    detail::for_disk_coverage(g, m, g.marker_radius_px(), [&](int x, int y, double cov) {
      for (double& c : rgb[static_cast<std::size_t>(y) * w + x]) c *= 1.0 - cov * attenuation;
    });
  }

  for (const Point2& d : bend_warp(g, scene.bend)) gt.dots.push_back(d + scene.dot_offset_px);
  for (const Point2& d : gt.dots) {
    detail::for_disk_coverage(g, d, g.dot_radius_px, [&](int x, int y, double cov) {
      auto& px = rgb[static_cast<std::size_t>(y) * w + x];
      for (int c = 0; c < 3; ++c) px[c] = (1.0 - cov) * px[c] + cov * g.dot_color[c];
    });
  }

  out.frame = Frame(w, h);
  std::mt19937_64 rng(scene.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto& data = out.frame.data();
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      double v = rgb[i][c];
      if (scene.noise_sigma > 0.0) v += scene.noise_sigma * noise(rng);
      data[3 * i + c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

/// Contact-free frames at b = 0, 1/(n-1), ..., 1.
inline std::vector<Frame> render_sweep(const SensorGeometry& g, int n_states, const PhotometricConfig& photo) {
  if (n_states < 1) throw Error(ErrorCode::InvalidArgument, "n_states must be >= 1");
  std::vector<Frame> frames;
  for (int k = 0; k < n_states; ++k) {
    Scene s;
    s.bend = n_states == 1 ? 0.0 : static_cast<double>(k) / (n_states - 1);
    frames.push_back(render(s, g, photo).frame);
  }
  return frames;
}

inline double sweep_bend(int state, int n_states) {
  return n_states <= 1 ? 0.0 : static_cast<double>(state) / (n_states - 1);
}

}  // namespace finray::sim
