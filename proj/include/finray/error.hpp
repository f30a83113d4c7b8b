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

#include <stdexcept>
#include <string>

namespace finray {

enum class ErrorCode {
  InvalidArgument,
  NoProprioception,
  UnsupportedRegion,
  NoContact,
  AmbiguousOrientation,
  InvalidScene,
  EstimationFailed,
  TableNotFound,
  PortFailure,
  Format,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::NoProprioception: return "no_proprioception";
    case ErrorCode::UnsupportedRegion: return "unsupported_region";
    case ErrorCode::NoContact: return "no_contact";
    case ErrorCode::AmbiguousOrientation: return "ambiguous_orientation";
    case ErrorCode::InvalidScene: return "invalid_scene";
    case ErrorCode::EstimationFailed: return "estimation_failed";
    case ErrorCode::TableNotFound: return "table_not_found";
    case ErrorCode::PortFailure: return "port_failure";
    case ErrorCode::Format: return "format";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace finray
