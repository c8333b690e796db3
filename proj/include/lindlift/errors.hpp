// Copyright 2026 The lindlift authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lindlift {

enum class ErrorCode {
  NonHermitianInput,
  ShapeMismatch,
  InvalidDensity,
  NegativeKossakowski,
  OutOfInterval,
  NotADensity,
  NonIncreasingTimes,
  DimensionCap,
  NotInTangentCone,
  ResidualTooLarge,
  WindowTooWide,
  IdenticalEndpoints,
  GridMismatch,
  RangeError,
  ParameterBound,
  Infeasible,
  InvalidInput,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::NegativeKossakowski: return "NegativeKossakowski";
    case ErrorCode::OutOfInterval: return "OutOfInterval";
    case ErrorCode::NotADensity: return "NotADensity";
    case ErrorCode::NonIncreasingTimes: return "NonIncreasingTimes";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::NotInTangentCone: return "NotInTangentCone";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::WindowTooWide: return "WindowTooWide";
    case ErrorCode::IdenticalEndpoints: return "IdenticalEndpoints";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::ParameterBound: return "ParameterBound";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace lindlift
