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

#include "changedet/image.hpp"

namespace changedet {

/// Binary PGM (P5), maxval 255 only. Throws MalformedHeader, UnsupportedMaxval
/// or TruncatedData.
GrayImage load_pgm(const std::filesystem::path& path);

/// Writes a canonical P5 file; load_pgm(save_pgm(img)) is byte-identical.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace changedet
