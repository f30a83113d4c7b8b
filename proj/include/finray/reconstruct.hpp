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

// Live frame + matched reference -> difference image -> gradients -> depth.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>

#include "finray/dotref.hpp"
#include "finray/image.hpp"
#include "finray/morphology.hpp"
#include "finray/pnm.hpp"
#include "finray/poisson.hpp"

namespace finray {

/// Linear photometric model shared with the simulator:
///   gx = alpha * (dR - dG),  gy = beta * dB.
struct PhotometricConfig {
  double alpha = 0.01;
  double beta = 0.02;
};

struct ReconstructConfig {
  PhotometricConfig photometric;
  Rect region{0, 20, 320, 200};  // sensing region, cropped rectangle
  double max_match_cost = 8.0;   // px
  // Shading moves R and G in opposite directions, so |dR + dG| above this
  // marks an occlusion (a moved marker) rather than surface slope. 0 disables.
  double occlusion_threshold = 30.0;
  int occlusion_radius = 1;  // px, dilation of the occlusion mask
};

struct DifferenceImage {
  GrayImage dr;
  GrayImage dg;
  GrayImage db;
};

/// live - ref per channel, each channel's global mean offset removed, clamped to [-255, 255].
inline DifferenceImage difference_image(const Frame& live, const Frame& ref) {
  if (!live.same_shape(ref)) throw Error(ErrorCode::InvalidArgument, "difference of frames with different sizes");
  const int w = live.width();
  const int h = live.height();
  DifferenceImage d{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  GrayImage* planes[3] = {&d.dr, &d.dg, &d.db};
  const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (n == 0) return d;
  for (int c = 0; c < 3; ++c) {
    auto& p = planes[c]->data();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<double>(live.data()[3 * i + c]) - static_cast<double>(ref.data()[3 * i + c]);
      sum += p[i];
    }
    const double mean = sum / static_cast<double>(n);
    for (auto& v : p) v = std::clamp(v - mean, -255.0, 255.0);
  }
  return d;
}

inline GradientField gradients_from_difference(const DifferenceImage& d, const PhotometricConfig& cfg) {
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha and beta must be positive");
  }
  GradientField g{GrayImage(d.dr.width(), d.dr.height()), GrayImage(d.dr.width(), d.dr.height())};
  for (std::size_t i = 0; i < g.gx.size(); ++i) {
    g.gx.data()[i] = cfg.alpha * (d.dr.data()[i] - d.dg.data()[i]);
    g.gy.data()[i] = cfg.beta * d.db.data()[i];
  }
  return g;
}

/// Pixels whose red-plus-green change cannot come from shading.
inline BinaryMask occlusion_mask(const DifferenceImage& d, double threshold, int radius) {
  BinaryMask m(d.dr.width(), d.dr.height(), 0);
  if (threshold <= 0.0) return m;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.data()[i] = std::fabs(d.dr.data()[i] + d.dg.data()[i]) > threshold ? 1 : 0;
  }
  return radius > 0 ? dilate(m, radius) : m;
}

inline BinaryMask region_mask(int width, int height, const Rect& region) {
  if (region.empty()) return BinaryMask(width, height, 1);
  if (region.x < 0 || region.y < 0 || region.x + region.width > width || region.y + region.height > height) {
    throw Error(ErrorCode::InvalidArgument, "sensing region exceeds the frame");
  }
  return rect_mask(width, height, region);
}

struct Reconstruction {
  DepthMap depth;
  GradientField gradients;
  std::size_t entry_index = 0;
  int bend_id = 0;
  double match_cost = 0.0;
  bool low_confidence = false;
  int occluded_pixels = 0;
};

inline Reconstruction reconstruct(const Frame& live, const ReferenceLibrary& lib, const DotConfig& dot_cfg,
                                  const ReconstructConfig& cfg) {
  const ReferenceMatch m = match_reference(live, lib, dot_cfg);
  const LibraryEntry& entry = lib.entries[m.index];
  Reconstruction out;
  const DifferenceImage diff = difference_image(live, entry.frame);
  out.gradients = gradients_from_difference(diff, cfg.photometric);
  const BinaryMask occluded = occlusion_mask(diff, cfg.occlusion_threshold, cfg.occlusion_radius);
  for (std::size_t i = 0; i < occluded.size(); ++i) {
    if (!occluded.data()[i]) continue;
    out.gradients.gx.data()[i] = 0.0;
    out.gradients.gy.data()[i] = 0.0;
    ++out.occluded_pixels;
  }
  out.depth = poisson_integrate(out.gradients, region_mask(live.width(), live.height(), cfg.region));
  out.entry_index = m.index;
  out.bend_id = entry.bend_id;
  out.match_cost = m.cost;
  out.low_confidence = m.cost > cfg.max_match_cost;
  return out;
}

/// Min/max-scaled 16-bit P5 with a `<path>.txt` sidecar holding the scale.
inline void write_scaled_pgm(const std::filesystem::path& path, const GrayImage& img) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : img.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (img.empty()) lo = hi = 0.0;
  Plane<std::uint16_t> q(img.width(), img.height(), 0);
  const double span = hi - lo;
  for (std::size_t i = 0; i < img.size(); ++i) {
    q.data()[i] = span > 0.0 ? static_cast<std::uint16_t>(std::lround((img.data()[i] - lo) / span * 65535.0)) : 0;
  }
  pnm::write_pgm16(path, q);
  std::ofstream side(path.string() + ".txt");
  if (!side) throw Error(ErrorCode::Io, "cannot write sidecar for " + path.string());
  side << std::setprecision(17) << "min " << lo << "\nmax " << hi << '\n';
}

struct ScaledPgm {
  GrayImage values;
  double min = 0.0;
  double max = 0.0;
};

inline ScaledPgm read_scaled_pgm(const std::filesystem::path& path) {
  const auto q = pnm::read_pgm16(path);
  std::ifstream side(path.string() + ".txt");
  std::string key_lo, key_hi;
  ScaledPgm out;
  if (!(side >> key_lo >> out.min >> key_hi >> out.max) || key_lo != "min" || key_hi != "max") {
    throw Error(ErrorCode::Format, "bad sidecar for " + path.string());
  }
  out.values = GrayImage(q.width(), q.height());
  for (std::size_t i = 0; i < q.size(); ++i) {
    out.values.data()[i] = out.min + (out.max - out.min) * q.data()[i] / 65535.0;
  }
  return out;
}

inline void write_depth(const std::filesystem::path& path, const DepthMap& depth) {
  write_scaled_pgm(path, depth.z);
}

inline void write_gradients(const std::filesystem::path& gx_path, const std::filesystem::path& gy_path,
                            const GradientField& g) {
  write_scaled_pgm(gx_path, g.gx);
  write_scaled_pgm(gy_path, g.gy);
}

}  // namespace finray
