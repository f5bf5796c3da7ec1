// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

namespace ndeq {

Mesh read_mesh(std::istream& in) {
  long nv = -1, nt = -1;
  if (!(in >> nv >> nt) || nv < 0 || nt < 0) throw Error(ErrorCode::Io, "bad mesh header");
  std::vector<Vec3> vertices(nv);
  for (auto& v : vertices) {
    if (!(in >> v.x() >> v.y() >> v.z())) throw Error(ErrorCode::Io, "truncated vertex list");
  }
  std::vector<std::array<int, 4>> tets(nt);
  std::vector<int> tags(nt);
  for (long t = 0; t < nt; ++t) {
    auto& c = tets[t];
    if (!(in >> c[0] >> c[1] >> c[2] >> c[3] >> tags[t])) {
      throw Error(ErrorCode::Io, "truncated tet list");
    }
  }
  return build_mesh(std::move(vertices), std::move(tets), std::move(tags));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_tets() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto& c = mesh.tet(static_cast<int>(t));
    out << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << ' '
        << mesh.subdomain_tag(static_cast<int>(t)) << '\n';
  }
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_mesh(out, mesh);
}

void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<CellScalar>& cell_data) {
  const std::size_t nt = mesh.num_tets();
  out << "# vtk DataFile Version 3.0\nndeq mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n" << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  out << "CELLS " << nt << ' ' << 5 * nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& c = mesh.tet(static_cast<int>(t));
    out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  }
  out << "CELL_TYPES " << nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) out << "10\n";
  out << "CELL_DATA " << nt << '\n';
  out << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (std::size_t t = 0; t < nt; ++t) out << mesh.subdomain_tag(static_cast<int>(t)) << '\n';
  for (const auto& s : cell_data) {
    if (s.values.size() != nt) {
      throw Error(ErrorCode::InvalidArgument, "cell data '" + s.name + "' has wrong length");
    }
    out << "SCALARS " << s.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : s.values) out << v << '\n';
  }
}

void write_vtk_file(const std::string& path, const Mesh& mesh,
                    const std::vector<CellScalar>& cell_data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_vtk(out, mesh, cell_data);
}

}  // namespace ndeq
