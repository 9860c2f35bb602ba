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

#include <stdexcept>
#include <string>

namespace changedet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CHANGEDET_DEFINE_ERROR(name)  \
  struct name : Error {               \
    using Error::Error;               \
  }

// Geometry.
CHANGEDET_DEFINE_ERROR(NotARotation);
CHANGEDET_DEFINE_ERROR(InvalidIntrinsics);
CHANGEDET_DEFINE_ERROR(EmptyMesh);
CHANGEDET_DEFINE_ERROR(DegenerateGeometry);
CHANGEDET_DEFINE_ERROR(BehindCamera);
CHANGEDET_DEFINE_ERROR(NonPsdCovariance);
CHANGEDET_DEFINE_ERROR(NonPositiveDefiniteCovariance);

// Parsing and serialization.
CHANGEDET_DEFINE_ERROR(MalformedHeader);
CHANGEDET_DEFINE_ERROR(TruncatedData);
CHANGEDET_DEFINE_ERROR(UnsupportedMaxval);
CHANGEDET_DEFINE_ERROR(IndexOutOfRange);
CHANGEDET_DEFINE_ERROR(NonPolygonalFace);
CHANGEDET_DEFINE_ERROR(WrongCount);
CHANGEDET_DEFINE_ERROR(ParseError);
CHANGEDET_DEFINE_ERROR(IoError);

// Images and sequences.
CHANGEDET_DEFINE_ERROR(ImageTooSmall);
CHANGEDET_DEFINE_ERROR(DimensionMismatch);
CHANGEDET_DEFINE_ERROR(NotEnoughImages);

// Synthetic scenes.
CHANGEDET_DEFINE_ERROR(ObjectOutsideRoom);
CHANGEDET_DEFINE_ERROR(CameraOutsideRoom);

#undef CHANGEDET_DEFINE_ERROR

}  // namespace changedet
