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

#include <array>
#include <cstdint>

// Standard 256-case Marching Cubes triangle table (Paul Bourke's public
// domain tables).
//
// Corner numbering, as offsets (dx, dy, dz) from the cube's minimum corner:
//   0:(0,0,0) 1:(1,0,0) 2:(1,1,0) 3:(0,1,0)
//   4:(0,0,1) 5:(1,0,1) 6:(1,1,1) 7:(0,1,1)
// Edge numbering, as corner pairs:
//   0:(0,1) 1:(1,2) 2:(2,3)  3:(3,0)
//   4:(4,5) 5:(5,6) 6:(6,7)  7:(7,4)
//   8:(0,4) 9:(1,5) 10:(2,6) 11:(3,7)
// Case index bit i is set when corner i is on the "inside".
namespace udfmesh::mc {

inline constexpr std::array<std::array<int, 3>, 8> kCornerOffsets{{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}};

inline constexpr std::array<std::array<int, 2>, 12> kEdgeCorners{{
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}};

/// Edge lists, three per triangle, terminated by -1.
extern const std::int8_t kTriangleTable[256][16];

/// Number of triangles emitted for each case.
int triangle_count(unsigned cube_case);

}  // namespace udfmesh::mc
