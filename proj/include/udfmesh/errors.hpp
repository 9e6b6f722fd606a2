// Copyright 2026 The udfmesh Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace udfmesh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The k-neighborhood of a point cannot support a patch fit.
class DegenerateNeighborhoodError : public Error {
 public:
  explicit DegenerateNeighborhoodError(std::size_t point_id)
      : Error("degenerate neighborhood at point " + std::to_string(point_id)), point_id_(point_id) {}
  std::size_t point_id() const noexcept { return point_id_; }

 private:
  std::size_t point_id_;
};

class DegenerateJacobianError : public Error {
 public:
  DegenerateJacobianError() : Error("patch Jacobian columns are linearly dependent") {}
};

/// Aligned normals cancel out, typically halfway between two sheets.
class AmbiguousGradientError : public Error {
 public:
  AmbiguousGradientError() : Error("ambiguous gradient: weighted normal sum vanishes") {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t location)
      : Error(what), location_(location) {}
  /// 1-based line number (text formats) or element number (binary formats).
  std::size_t location() const noexcept { return location_; }

 private:
  std::size_t location_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace udfmesh
