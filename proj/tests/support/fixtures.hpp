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

// Shared fixtures: a contact-free 20-state sweep library built once per
// process, plus small helpers for scratch directories.

#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <string>

#include "finray/finray.hpp"

namespace fixture {

inline const finray::sim::SensorGeometry& geometry() {
  static const finray::sim::SensorGeometry g;
  return g;
}

inline const finray::PipelineConfig& pipeline() {
  static const finray::PipelineConfig p;
  return p;
}

inline const std::vector<finray::Frame>& sweep_frames() {
  static const std::vector<finray::Frame> frames =
      finray::sim::render_sweep(geometry(), 20, pipeline().reconstruct.photometric);
  return frames;
}

inline const finray::ReferenceLibrary& library() {
  static const finray::ReferenceLibrary lib =
      finray::build_library(sweep_frames(), pipeline().dots, pipeline().markers);
  return lib;
}

inline finray::sim::Rendered render(const finray::sim::Scene& s) {
  return finray::sim::render(s, geometry(), pipeline().reconstruct.photometric);
}

/// Fresh, empty directory under the system temp dir; removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("finray_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixture
