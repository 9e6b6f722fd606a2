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
#include <functional>

namespace udfmesh {

/// Number of hardware threads, at least 1.
unsigned hardware_threads();

/// Runs `body(begin, end)` over contiguous chunks of [0, n) on up to
/// `threads` workers (0 = hardware_threads()). Chunks are fixed by (n, threads)
/// only, and callers write results by index, so output never depends on
/// scheduling. If any chunk throws, one of the exceptions is rethrown
/// after all workers have joined.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace udfmesh
