// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ndeq/mesh.hpp"

namespace ndeq {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::array<int, 3> sorted3(int a, int b, int c) {
  std::array<int, 3> s{a, b, c};
  std::sort(s.begin(), s.end());
  return s;
}

constexpr double kVolumeEps = 1e-12;

}  // namespace

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

Mesh build_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                std::optional<std::vector<int>> subdomain_tags,
                std::optional<std::vector<int>> levels,
                std::optional<std::vector<int>> parents) {
  Mesh m;
  const int nv = static_cast<int>(vertices.size());
  const std::size_t nt = tets.size();
  m.vertices_ = std::move(vertices);
  m.tets_ = std::move(tets);
  m.tags_ = subdomain_tags ? std::move(*subdomain_tags) : std::vector<int>(nt, 0);
  m.levels_ = levels ? std::move(*levels) : std::vector<int>(nt, 0);
  m.parents_ = parents ? std::move(*parents) : std::vector<int>(nt, -1);
  if (m.tags_.size() != nt || m.levels_.size() != nt || m.parents_.size() != nt) {
    throw Error(ErrorCode::InvalidArgument, "per-tet attribute length mismatch");
  }

  std::vector<char> used(nv, 0);
  m.sorted_.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tv = m.tets_[t];
    for (int v : tv) {
      if (v < 0 || v >= nv) {
        throw Error(ErrorCode::NonConforming, "tet " + std::to_string(t) + " references invalid vertex");
      }
      used[v] = 1;
    }
    auto s = tv;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw Error(ErrorCode::DegenerateTet, "tet " + std::to_string(t) + " repeats a vertex");
    }
    m.sorted_[t] = s;
    const Vec3& a = m.vertices_[tv[0]];
    const Vec3& b = m.vertices_[tv[1]];
    const Vec3& c = m.vertices_[tv[2]];
    const Vec3& d = m.vertices_[tv[3]];
    double h = 0.0;
    for (const auto& e : kLocalEdges) {
      h = std::max(h, (m.vertices_[tv[e[0]]] - m.vertices_[tv[e[1]]]).norm());
    }
    const double vol = signed_volume(a, b, c, d);
    if (!(vol > kVolumeEps * h * h * h)) {
      std::ostringstream os;
      os << "tet " << t << " has signed volume " << vol;
      throw Error(ErrorCode::DegenerateTet, os.str());
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (!used[v]) throw Error(ErrorCode::NonConforming, "dangling vertex " + std::to_string(v));
  }

  // Faces, in order of first appearance; the first tet seen is the smaller index.
  m.tet_faces_.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& s = m.sorted_[t];
    for (int lf = 0; lf < 4; ++lf) {
      const auto& loc = kLocalFaces[lf];
      const std::array<int, 3> key{s[loc[0]], s[loc[1]], s[loc[2]]};
      auto it = m.face_lookup_.find(key);
      if (it == m.face_lookup_.end()) {
        const int id = static_cast<int>(m.faces_.size());
        m.face_lookup_.emplace(key, id);
        Face f;
        f.v = key;
        f.plus = static_cast<int>(t);
        m.faces_.push_back(f);
        m.tet_faces_[t][lf] = id;
      } else {
        Face& f = m.faces_[it->second];
        if (f.minus != kBoundary) {
          throw Error(ErrorCode::NonConforming,
                      "face shared by more than two tets (tet " + std::to_string(t) + ")");
        }
        f.minus = static_cast<int>(t);
        m.tet_faces_[t][lf] = it->second;
      }
    }
  }
  for (auto& f : m.faces_) {
    const Vec3& a = m.vertices_[f.v[0]];
    const Vec3 cr = (m.vertices_[f.v[1]] - a).cross(m.vertices_[f.v[2]] - a);
    f.area = 0.5 * cr.norm();
    Vec3 n = cr.normalized();
    const auto& s = m.sorted_[f.plus];
    int opposite = -1;
    for (int v : s) {
      if (v != f.v[0] && v != f.v[1] && v != f.v[2]) opposite = v;
    }
    if (n.dot(m.vertices_[opposite] - a) > 0.0) n = -n;
    f.normal = n;
    if (!f.is_boundary()) ++m.num_internal_faces_;
  }

  // Edges.
  m.tet_edges_.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& s = m.sorted_[t];
    for (int le = 0; le < 6; ++le) {
      const int a = s[kLocalEdges[le][0]];
      const int b = s[kLocalEdges[le][1]];
      const auto key = edge_key(a, b);
      auto it = m.edge_lookup_.find(key);
      int id;
      if (it == m.edge_lookup_.end()) {
        id = static_cast<int>(m.edges_.size());
        m.edge_lookup_.emplace(key, id);
        Edge e;
        e.v = {a, b};
        m.edges_.push_back(e);
      } else {
        id = it->second;
      }
      m.tet_edges_[t][le] = id;
      m.edges_[id].tets.push_back(static_cast<int>(t));
    }
  }
  m.vertex_boundary_.assign(nv, 0);
  for (std::size_t fi = 0; fi < m.faces_.size(); ++fi) {
    const Face& f = m.faces_[fi];
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        Edge& e = m.edges_[m.edge_lookup_.at(edge_key(f.v[i], f.v[j]))];
        e.faces.push_back(static_cast<int>(fi));
        if (f.is_boundary()) e.on_boundary = true;
      }
      if (f.is_boundary()) m.vertex_boundary_[f.v[i]] = 1;
    }
  }
  return m;
}

int Mesh::find_edge(int a, int b) const {
  auto it = edge_lookup_.find(edge_key(a, b));
  return it == edge_lookup_.end() ? -1 : it->second;
}

int Mesh::find_face(int a, int b, int c) const {
  auto it = face_lookup_.find(sorted3(a, b, c));
  return it == face_lookup_.end() ? -1 : it->second;
}

double Mesh::tet_volume(int t) const {
  const auto& v = tets_[t];
  return signed_volume(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]], vertices_[v[3]]);
}

double Mesh::tet_diameter(int t) const {
  const auto& v = tets_[t];
  double h = 0.0;
  for (const auto& e : kLocalEdges) h = std::max(h, (vertices_[v[e[0]]] - vertices_[v[e[1]]]).norm());
  return h;
}

double Mesh::face_diameter(int f) const {
  const auto& v = faces_[f].v;
  return std::max({(vertices_[v[0]] - vertices_[v[1]]).norm(),
                   (vertices_[v[0]] - vertices_[v[2]]).norm(),
                   (vertices_[v[1]] - vertices_[v[2]]).norm()});
}

Vec3 Mesh::tet_centroid(int t) const {
  const auto& v = tets_[t];
  return 0.25 * (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]] + vertices_[v[3]]);
}

double Mesh::h_max() const {
  double h = 0.0;
  for (std::size_t t = 0; t < tets_.size(); ++t) h = std::max(h, tet_diameter(static_cast<int>(t)));
  return h;
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (std::size_t t = 0; t < tets_.size(); ++t) v += tet_volume(static_cast<int>(t));
  return v;
}

FaceFrame face_frame(const Mesh& mesh, int f) {
  const Face& face = mesh.face(f);
  FaceFrame fr;
  fr.n = face.normal;
  Vec3 t1 = mesh.vertex(face.v[1]) - mesh.vertex(face.v[0]);
  t1 -= t1.dot(fr.n) * fr.n;
  fr.t1 = t1.normalized();
  fr.t2 = fr.n.cross(fr.t1);
  return fr;
}

Vec3 edge_tangent(const Mesh& mesh, int e) {
  const Edge& ed = mesh.edge(e);
  return (mesh.vertex(ed.v[1]) - mesh.vertex(ed.v[0])).normalized();
}

EdgeFaceNormals edge_face_normals(const Mesh& mesh, int e, int f) {
  const Edge& ed = mesh.edge(e);
  const Face& face = mesh.face(f);
  int third = -1;
  int hits = 0;
  for (int v : face.v) {
    if (v == ed.v[0] || v == ed.v[1]) {
      ++hits;
    } else {
      third = v;
    }
  }
  if (hits != 2) {
    throw Error(ErrorCode::NotAdjacent,
                "face " + std::to_string(f) + " does not contain edge " + std::to_string(e));
  }
  const Vec3 t = edge_tangent(mesh, e);
  Vec3 w = mesh.vertex(ed.v[0]) - mesh.vertex(third);
  w -= w.dot(t) * t;
  EdgeFaceNormals out;
  out.n_ef = w.normalized();
  out.n_fe = t.cross(out.n_ef);
  return out;
}

EdgeCycle edge_cycle(const Mesh& mesh, int e) {
  const Edge& ed = mesh.edge(e);
  EdgeCycle cyc;
  if (ed.tets.empty()) return cyc;
  auto faces_of_tet_on_edge = [&](int t) {
    std::array<int, 2> out{-1, -1};
    int k = 0;
    for (int f : mesh.tet_faces(t)) {
      const auto& v = mesh.face(f).v;
      const bool has0 = std::find(v.begin(), v.end(), ed.v[0]) != v.end();
      const bool has1 = std::find(v.begin(), v.end(), ed.v[1]) != v.end();
      if (has0 && has1 && k < 2) out[k++] = f;
    }
    return out;
  };
  // Start an open chain at a tet with a boundary face on the edge.
  int start = ed.tets.front();
  int entry_face = -1;
  if (ed.on_boundary) {
    for (int t : ed.tets) {
      for (int f : faces_of_tet_on_edge(t)) {
        if (mesh.face(f).is_boundary()) {
          start = t;
          entry_face = f;
          break;
        }
      }
      if (entry_face >= 0) break;
    }
  }
  int cur = start;
  int came_through = entry_face;
  std::set<int> visited;
  while (true) {
    cyc.tets.push_back(cur);
    visited.insert(cur);
    const auto fs = faces_of_tet_on_edge(cur);
    const int next_face = (fs[0] == came_through) ? fs[1] : fs[0];
    if (came_through == -1 && cyc.tets.size() == 1) {
      // Closed ring: either face works as the exit; take the first.
    }
    const Face& nf = mesh.face(next_face);
    if (nf.is_boundary()) break;
    const int next = (nf.plus == cur) ? nf.minus : nf.plus;
    cyc.faces.push_back(next_face);
    if (next == start) {
      cyc.closed = true;
      break;
    }
    if (visited.count(next)) break;
    cur = next;
    came_through = next_face;
  }
  return cyc;
}

}  // namespace ndeq
