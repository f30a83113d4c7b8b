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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "finray/error.hpp"

namespace finray {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

/// Axis-aligned pixel rectangle, half-open: [x, x + width) x [y, y + height).
struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool contains(int px, int py) const {
    return px >= x && px < x + width && py >= y && py < y + height;
  }
  bool empty() const { return width <= 0 || height <= 0; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Row-major single-channel raster. Origin top-left, x = column, y = row.
template <class T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw Error(ErrorCode::InvalidArgument, "negative raster dimensions");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  /// Edge-replicated access for windowed filters.
  const T& clamped(int x, int y) const {
    return (*this)(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
  }

  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  template <class U>
  bool same_shape(const Plane<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using GrayImage = Plane<double>;
/// 0 = false, 1 = true. A byte plane instead of vector<bool> keeps raw access.
using BinaryMask = Plane<std::uint8_t>;

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit interleaved RGB raster; row 0 is the finger tip.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, Rgb fill = {0, 0, 0}) : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw Error(ErrorCode::InvalidArgument, "negative frame dimensions");
    }
    data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
      data_[i] = fill[0];
      data_[i + 1] = fill[1];
      data_[i + 2] = fill[2];
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }

  Rgb at(int x, int y) const {
    const std::size_t i = offset(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = offset(x, y);
    data_[i] = c[0];
    data_[i + 1] = c[1];
    data_[i + 2] = c[2];
  }
  std::uint8_t channel(int x, int y, int c) const { return data_[offset(x, y) + c]; }

  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::vector<std::uint8_t>& data() { return data_; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  bool same_shape(const Frame& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

struct Blob {
  Point2 centroid;
  int area = 0;
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;
};

inline BinaryMask rect_mask(int width, int height, const Rect& r) {
  BinaryMask m(width, height, 0);
  for (int y = std::max(r.y, 0); y < std::min(r.y + r.height, height); ++y) {
    for (int x = std::max(r.x, 0); x < std::min(r.x + r.width, width); ++x) m(x, y) = 1;
  }
  return m;
}

inline std::size_t count_true(const BinaryMask& m) {
  return static_cast<std::size_t>(std::count(m.data().begin(), m.data().end(), std::uint8_t{1}));
}

}  // namespace finray
