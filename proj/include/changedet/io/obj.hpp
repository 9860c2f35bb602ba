// Copyright 2026 The changedet Authors
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

#include <filesystem>

#include "changedet/mesh.hpp"

namespace changedet {

/// Wavefront OBJ subset: `v` and `f` directives plus `#` comments; everything
/// else is ignored. Faces with more than three vertices are fan-triangulated
/// as (v0, vi, vi+1); negative indices resolve relative to the vertices seen
/// so far. Degenerate triangles are dropped after parsing.
TriangleMesh load_obj(const std::filesystem::path& path);

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace changedet
