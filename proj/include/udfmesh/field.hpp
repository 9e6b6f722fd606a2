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

#include <functional>
#include <utility>

#include "udfmesh/geometry.hpp"

namespace udfmesh {

/// One evaluation of an unsigned distance field.
struct FieldSample {
  double phi = 0.0;
  Vec3 grad = Vec3::Zero();
  /// Gradient could not be determined; `grad` is zero.
  bool ambiguous = false;
};

/// Anything that can be queried for (phi, grad) at a point. Implementations
/// must be safe to call concurrently.
class UdfSource {
 public:
  virtual ~UdfSource() = default;
  virtual FieldSample sample(const Point3& q) const = 0;
  virtual double value(const Point3& q) const { return sample(q).phi; }
};

class CallbackField final : public UdfSource {
 public:
  explicit CallbackField(std::function<FieldSample(const Point3&)> fn) : fn_(std::move(fn)) {}
  FieldSample sample(const Point3& q) const override { return fn_(q); }

 private:
  std::function<FieldSample(const Point3&)> fn_;
};

}  // namespace udfmesh
