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

// Binary Netpbm I/O: P6 frames, P4 masks, P5 16-bit gray.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "finray/image.hpp"

namespace finray::pnm {

namespace detail {

inline void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline int read_header_int(std::istream& in) {
  skip_space_and_comments(in);
  int value = -1;
  if (!(in >> value) || value < 0) throw Error(ErrorCode::Format, "bad netpbm header field");
  return value;
}

struct Header {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 1;
};

inline Header read_header(std::istream& in, bool has_maxval) {
  Header h;
  char m[2];
  if (!in.read(m, 2)) throw Error(ErrorCode::Format, "truncated netpbm magic");
  h.magic.assign(m, 2);
  h.width = read_header_int(in);
  h.height = read_header_int(in);
  if (has_maxval) h.maxval = read_header_int(in);
  // Exactly one whitespace byte separates header from raster.
  const int sep = in.get();
  if (sep == EOF || !std::isspace(sep)) throw Error(ErrorCode::Format, "bad netpbm header terminator");
  return h;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

}  // namespace detail

inline void write_ppm(std::ostream& out, const Frame& f) {
  out << "P6\n" << f.width() << ' ' << f.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size()));
}

/// Reads one P6 image. Returns nullopt on clean end of stream, which lets
/// callers consume concatenated frames.
inline std::optional<Frame> read_ppm_stream(std::istream& in) {
  detail::skip_space_and_comments(in);
  if (in.peek() == EOF) return std::nullopt;
  const auto h = detail::read_header(in, true);
  if (h.magic != "P6") throw Error(ErrorCode::Format, "expected P6, got " + h.magic);
  if (h.maxval != 255) throw Error(ErrorCode::Format, "only maxval 255 is supported");
  Frame f(h.width, h.height);
  if (!in.read(reinterpret_cast<char*>(f.data().data()),
               static_cast<std::streamsize>(f.data().size()))) {
    throw Error(ErrorCode::Format, "truncated P6 raster");
  }
  return f;
}

inline Frame read_ppm(std::istream& in) {
  auto f = read_ppm_stream(in);
  if (!f) throw Error(ErrorCode::Format, "empty P6 stream");
  return std::move(*f);
}

inline void write_ppm(const std::filesystem::path& path, const Frame& f) {
  auto out = detail::open_out(path);
  write_ppm(out, f);
}

inline Frame read_ppm(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_ppm(in);
}

/// P4: rows packed MSB-first, padded to whole bytes; 1 = set.
inline void write_pbm(std::ostream& out, const BinaryMask& m) {
  out << "P4\n" << m.width() << ' ' << m.height() << '\n';
  const int row_bytes = (m.width() + 7) / 8;
  std::string row(static_cast<std::size_t>(row_bytes), '\0');
  for (int y = 0; y < m.height(); ++y) {
    std::fill(row.begin(), row.end(), '\0');
    for (int x = 0; x < m.width(); ++x) {
      if (m(x, y)) row[static_cast<std::size_t>(x / 8)] |= static_cast<char>(0x80 >> (x % 8));
    }
    out.write(row.data(), row_bytes);
  }
}

inline BinaryMask read_pbm(std::istream& in) {
  const auto h = detail::read_header(in, false);
  if (h.magic != "P4") throw Error(ErrorCode::Format, "expected P4, got " + h.magic);
  BinaryMask m(h.width, h.height, 0);
  const int row_bytes = (h.width + 7) / 8;
  std::string row(static_cast<std::size_t>(row_bytes), '\0');
  for (int y = 0; y < h.height; ++y) {
    if (!in.read(row.data(), row_bytes)) throw Error(ErrorCode::Format, "truncated P4 raster");
    for (int x = 0; x < h.width; ++x) {
      const auto byte = static_cast<unsigned char>(row[static_cast<std::size_t>(x / 8)]);
      m(x, y) = (byte >> (7 - x % 8)) & 1U;
    }
  }
  return m;
}

inline void write_pbm(const std::filesystem::path& path, const BinaryMask& m) {
  auto out = detail::open_out(path);
  write_pbm(out, m);
}

inline BinaryMask read_pbm(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_pbm(in);
}

/// P5 with maxval 65535, big-endian samples.
inline void write_pgm16(std::ostream& out, const Plane<std::uint16_t>& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n65535\n";
  for (const std::uint16_t v : img.data()) {
    const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xFF)};
    out.write(bytes, 2);
  }
}

inline Plane<std::uint16_t> read_pgm16(std::istream& in) {
  const auto h = detail::read_header(in, true);
  if (h.magic != "P5") throw Error(ErrorCode::Format, "expected P5, got " + h.magic);
  if (h.maxval != 65535) throw Error(ErrorCode::Format, "only 16-bit P5 is supported");
  Plane<std::uint16_t> img(h.width, h.height, 0);
  for (auto& v : img.data()) {
    unsigned char bytes[2];
    if (!in.read(reinterpret_cast<char*>(bytes), 2)) {
      throw Error(ErrorCode::Format, "truncated P5 raster");
    }
    v = static_cast<std::uint16_t>((bytes[0] << 8) | bytes[1]);
  }
  return img;
}

inline void write_pgm16(const std::filesystem::path& path, const Plane<std::uint16_t>& img) {
  auto out = detail::open_out(path);
  write_pgm16(out, img);
}

inline Plane<std::uint16_t> read_pgm16(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return read_pgm16(in);
}

}  // namespace finray::pnm
