// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <unordered_map>

#include "ndeq/mesh.hpp"

namespace ndeq {

namespace {

constexpr int kMaxClosurePasses = 200;
constexpr double kTieTol = 1e-12;

std::uint64_t key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

struct WorkTet {
  std::array<int, 4> v;
  int tag;
  int level;
  int origin;  // index in the input mesh
};

// Local indices (i, j) of the refinement edge: longest, ties to the
// lexicographically smaller sorted vertex pair.
std::array<int, 2> refinement_edge(const std::vector<Vec3>& x, const std::array<int, 4>& v) {
  std::array<int, 2> best{-1, -1};
  double best_len = -1.0;
  std::pair<int, int> best_ids{0, 0};
  for (const auto& e : kLocalEdges) {
    const double len = (x[v[e[0]]] - x[v[e[1]]]).squaredNorm();
    const std::pair<int, int> ids = std::minmax(v[e[0]], v[e[1]]);
    const bool longer = best[0] < 0 || len > best_len * (1.0 + kTieTol);
    const bool tie = !longer && len >= best_len * (1.0 - kTieTol);
    if (longer || (tie && ids < best_ids)) {
      best = e;
      best_len = std::max(best_len, len);
      best_ids = ids;
    }
  }
  return best;
}

}  // namespace

Mesh refine(const Mesh& mesh, const std::set<int>& marked) {
  const int nt = static_cast<int>(mesh.num_tets());
  for (int t : marked) {
    if (t < 0 || t >= nt) throw Error(ErrorCode::InvalidArgument, "marked tet out of range");
  }
  std::vector<Vec3> x = mesh.vertices();
  std::vector<WorkTet> tets(nt);
  for (int t = 0; t < nt; ++t) {
    tets[t] = {mesh.tet(t), mesh.subdomain_tag(t), mesh.refinement_level(t), t};
  }
  std::unordered_map<std::uint64_t, int> midpoint;
  auto has_hanging = [&](const WorkTet& w) {
    for (const auto& e : kLocalEdges) {
      if (midpoint.count(key(w.v[e[0]], w.v[e[1]]))) return true;
    }
    return false;
  };

  std::vector<char> flag(nt, 0);
  for (int t : marked) flag[t] = 1;
  for (int pass = 0;; ++pass) {
    if (pass >= kMaxClosurePasses) {
      throw Error(ErrorCode::ClosureOverflow, "bisection closure did not terminate");
    }
    std::vector<WorkTet> next;
    next.reserve(tets.size() * 2);
    bool changed = false;
    for (std::size_t i = 0; i < tets.size(); ++i) {
      const WorkTet& w = tets[i];
      const bool split = (pass == 0 && flag[i]) || has_hanging(w);
      if (!split) {
        next.push_back(w);
        continue;
      }
      changed = true;
      const auto e = refinement_edge(x, w.v);
      const int a = w.v[e[0]];
      const int b = w.v[e[1]];
      auto [it, inserted] = midpoint.try_emplace(key(a, b), static_cast<int>(x.size()));
      if (inserted) x.push_back(0.5 * (x[a] + x[b]));
      const int m = it->second;
      // Replacing an endpoint by the midpoint keeps the orientation sign.
      WorkTet c0 = w, c1 = w;
      c0.v[e[1]] = m;
      c1.v[e[0]] = m;
      c0.level = c1.level = w.level + 1;
      next.push_back(c0);
      next.push_back(c1);
    }
    tets.swap(next);
    if (!changed) break;
  }

  std::vector<std::array<int, 4>> tv(tets.size());
  std::vector<int> tags(tets.size()), levels(tets.size()), parents(tets.size());
  for (std::size_t i = 0; i < tets.size(); ++i) {
    tv[i] = tets[i].v;
    tags[i] = tets[i].tag;
    levels[i] = tets[i].level;
    parents[i] = tets[i].origin;
  }
  return build_mesh(std::move(x), std::move(tv), std::move(tags), std::move(levels),
                    std::move(parents));
}

}  // namespace ndeq
