// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ndeq/mesh.hpp"

namespace ndeq {

// Plain text: "V T", V lines "x y z", T lines "v0 v1 v2 v3 tag".
// Reading goes through build_mesh, so conformity is validated.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

struct CellScalar {
  std::string name;
  std::vector<double> values;  // one per tet
};

// Legacy ASCII VTK unstructured grid with optional per-tet scalars.
void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<CellScalar>& cell_data = {});
void write_vtk_file(const std::string& path, const Mesh& mesh,
                    const std::vector<CellScalar>& cell_data = {});

}  // namespace ndeq
