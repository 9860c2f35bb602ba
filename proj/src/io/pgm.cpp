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

#include "changedet/io/pgm.hpp"

#include <fstream>
#include <string>

#include "changedet/errors.hpp"

namespace changedet {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) {
        break;
      }
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

int parse_positive_int(const std::string& token, const char* what) {
  if (token.empty()) {
    throw MalformedHeader(std::string("missing ") + what);
  }
  std::size_t pos = 0;
  long value = 0;
  try {
    value = std::stol(token, &pos);
  } catch (const std::exception&) {
    throw MalformedHeader(std::string("non-numeric ") + what + ": " + token);
  }
  if (pos != token.size() || value <= 0) {
    throw MalformedHeader(std::string("invalid ") + what + ": " + token);
  }
  return static_cast<int>(value);
}

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }

  if (next_token(in) != "P5") {
    throw MalformedHeader("not a binary PGM (expected P5 magic): " + path.string());
  }
  const int width = parse_positive_int(next_token(in), "width");
  const int height = parse_positive_int(next_token(in), "height");
  const int maxval = parse_positive_int(next_token(in), "maxval");
  if (maxval != 255) {
    throw UnsupportedMaxval("only maxval 255 is supported, got " + std::to_string(maxval));
  }
  // next_token consumed exactly one whitespace byte after the maxval, so the
  // stream is positioned at the first sample.

  GrayImage img(width, height);
  in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.data.size()) {
    throw TruncatedData("pixel payload shorter than width*height in " + path.string());
  }
  return img;
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

}  // namespace changedet
