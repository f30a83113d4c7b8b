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

#include "finray/image.hpp"

namespace finray {

struct Hsv {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

struct HsvImage {
  GrayImage h;
  GrayImage s;
  GrayImage v;

  int width() const { return h.width(); }
  int height() const { return h.height(); }
  Hsv at(int x, int y) const { return {h(x, y), s(x, y), v(x, y)}; }
};

inline Hsv rgb_to_hsv(Rgb c) {
  const double r = c[0] / 255.0;
  const double g = c[1] / 255.0;
  const double b = c[2] / 255.0;
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double chroma = hi - lo;

  Hsv out;
  out.v = hi;
  out.s = hi > 0.0 ? chroma / hi : 0.0;
  if (chroma > 0.0) {
    double h;
    if (hi == r) {
      h = std::fmod((g - b) / chroma, 6.0);
    } else if (hi == g) {
      h = (b - r) / chroma + 2.0;
    } else {
      h = (r - g) / chroma + 4.0;
    }
    h *= 60.0;
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
  }
  return out;
}

inline Rgb hsv_to_rgb(Hsv c) {
  const double chroma = c.v * c.s;
  const double hp = std::fmod(c.h, 360.0) / 60.0;
  const double x = chroma * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  const double m = c.v - chroma;
  auto to8 = [m](double u) {
    return static_cast<std::uint8_t>(std::clamp(std::lround((u + m) * 255.0), 0L, 255L));
  };
  return {to8(r), to8(g), to8(b)};
}

inline HsvImage to_hsv(const Frame& frame) {
  HsvImage out{GrayImage(frame.width(), frame.height()),
               GrayImage(frame.width(), frame.height()),
               GrayImage(frame.width(), frame.height())};
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const Hsv p = rgb_to_hsv(frame.at(x, y));
      out.h(x, y) = p.h;
      out.s(x, y) = p.s;
      out.v(x, y) = p.v;
    }
  }
  return out;
}

/// Inverse of to_hsv, used for round-trip checks and rendering.
inline Frame from_hsv(const HsvImage& img) {
  Frame out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out.set(x, y, hsv_to_rgb(img.at(x, y)));
  }
  return out;
}

namespace detail {

inline double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

}  // namespace detail

/// CIE L* (D65) of an sRGB triple, in [0, 100].
inline double lab_luminosity(Rgb c) {
  const double r = detail::srgb_to_linear(c[0] / 255.0);
  const double g = detail::srgb_to_linear(c[1] / 255.0);
  const double b = detail::srgb_to_linear(c[2] / 255.0);
  // Y row of the sRGB -> XYZ matrix; Y_n = 1 for D65.
  const double y = 0.212671 * r + 0.715160 * g + 0.072169 * b;
  constexpr double eps = 216.0 / 24389.0;
  constexpr double kappa = 24389.0 / 27.0;
  const double l = y > eps ? 116.0 * std::cbrt(y) - 16.0 : kappa * y;
  return std::clamp(l, 0.0, 100.0);
}

inline GrayImage to_lab_luminosity(const Frame& frame) {
  GrayImage out(frame.width(), frame.height());
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) out(x, y) = lab_luminosity(frame.at(x, y));
  }
  return out;
}

/// Inclusive HSV window. lo.h > hi.h selects the hue interval that wraps through 0.
struct HsvWindow {
  Hsv lo;
  Hsv hi;

  bool contains(const Hsv& p) const {
    const bool hue_ok = lo.h <= hi.h ? (p.h >= lo.h && p.h <= hi.h)
                                     : (p.h >= lo.h || p.h <= hi.h);
    return hue_ok && p.s >= lo.s && p.s <= hi.s && p.v >= lo.v && p.v <= hi.v;
  }
};

inline BinaryMask threshold_hsv(const HsvImage& img, const HsvWindow& window) {
  BinaryMask out(img.width(), img.height(), 0);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out(x, y) = window.contains(img.at(x, y)) ? 1 : 0;
  }
  return out;
}

}  // namespace finray
