// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <vector>

#include "ndeq/mesh.hpp"

namespace ndeq {

namespace {

// The six Kuhn tets of the cube with corner c: walk from c to c + (1,1,1)
// adding one axis at a time. All cubes share the same diagonal direction,
// so neighbouring cubes split their common faces identically.
constexpr std::array<std::array<int, 3>, 6> kAxisOrders{
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

struct Grid {
  int nx, ny, nz;
  Vec3 origin;
  double h;
  int id(int i, int j, int k) const { return i + (nx + 1) * (j + (ny + 1) * k); }
  Vec3 point(int i, int j, int k) const { return origin + h * Vec3(i, j, k); }
};

using CellFilter = std::function<bool(int, int, int)>;

Mesh kuhn_mesh(const Grid& g, const CellFilter& keep, const SubdomainTagger& tagger) {
  const int total = (g.nx + 1) * (g.ny + 1) * (g.nz + 1);
  std::vector<int> remap(total, -1);
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  auto vid = [&](int i, int j, int k) {
    int& r = remap[g.id(i, j, k)];
    if (r < 0) {
      r = static_cast<int>(vertices.size());
      vertices.push_back(g.point(i, j, k));
    }
    return r;
  };
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (keep && !keep(i, j, k)) continue;
        for (const auto& order : kAxisOrders) {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> t{};
          t[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[order[s]];
            t[s + 1] = vid(c[0], c[1], c[2]);
          }
          if (signed_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]) < 0) {
            std::swap(t[2], t[3]);
          }
          tets.push_back(t);
        }
      }
    }
  }
  std::vector<int> tags(tets.size(), 0);
  if (tagger) {
    for (std::size_t t = 0; t < tets.size(); ++t) {
      const auto& v = tets[t];
      tags[t] = tagger(0.25 * (vertices[v[0]] + vertices[v[1]] + vertices[v[2]] + vertices[v[3]]));
    }
  }
  return build_mesh(std::move(vertices), std::move(tets), std::move(tags));
}

void check_resolution(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "mesh resolution must be >= 1");
}

}  // namespace

Mesh unit_cube_mesh(int n, const SubdomainTagger& tagger) {
  check_resolution(n);
  const Grid g{n, n, n, Vec3::Zero(), 1.0 / n};
  return kuhn_mesh(g, {}, tagger);
}

Mesh l_brick_mesh(int n, const SubdomainTagger& tagger) {
  check_resolution(n);
  const Grid g{2 * n, 2 * n, n, Vec3(-1.0, -1.0, 0.0), 1.0 / n};
  // Drop the cells of the quadrant x > 0, y < 0.
  auto keep = [n](int i, int j, int) { return !(i >= n && j < n); };
  return kuhn_mesh(g, keep, tagger);
}

}  // namespace ndeq
