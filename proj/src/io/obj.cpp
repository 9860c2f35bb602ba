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

#include "changedet/io/obj.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "changedet/errors.hpp"

namespace changedet {

namespace {

// Face tokens look like "i", "i/j", "i//k" or "i/j/k"; only the vertex index
// matters here.
int parse_face_index(const std::string& token, int vertex_count) {
  const std::string head = token.substr(0, token.find('/'));
  long index = 0;
  std::size_t pos = 0;
  try {
    index = std::stol(head, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad face index token: " + token);
  }
  if (pos != head.size()) {
    throw ParseError("bad face index token: " + token);
  }
  if (index < 0) {
    index = vertex_count + index + 1;  // -1 refers to the last vertex so far
  }
  if (index <= 0 || index > vertex_count) {
    throw IndexOutOfRange("face index " + token + " outside 1.." + std::to_string(vertex_count));
  }
  return static_cast<int>(index - 1);
}

}  // namespace

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }

  TriangleMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string directive;
    if (!(ls >> directive)) {
      continue;
    }
    if (directive == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z())) {
        throw ParseError("vertex line with fewer than 3 coordinates: " + line);
      }
      mesh.vertices.push_back(v);
    } else if (directive == "f") {
      std::vector<int> indices;
      std::string token;
      while (ls >> token) {
        indices.push_back(parse_face_index(token, static_cast<int>(mesh.vertices.size())));
      }
      if (indices.size() < 3) {
        throw NonPolygonalFace("face with fewer than 3 indices: " + line);
      }
      for (std::size_t i = 1; i + 1 < indices.size(); ++i) {
        mesh.triangles.push_back({indices[0], indices[i], indices[i + 1]});
      }
    }
    // All other directives (vn, vt, usemtl, o, g, s, ...) are ignored.
  }

  mesh.remove_degenerate_triangles();
  return mesh;
}

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.precision(17);
  for (const Vec3& v : mesh.vertices) {
    out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

}  // namespace changedet
