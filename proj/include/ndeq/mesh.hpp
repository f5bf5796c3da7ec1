// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "ndeq/common.hpp"

namespace ndeq {

inline constexpr int kBoundary = -1;

// Local numbering on a tet whose vertices are listed in ascending global id.
// Edge (a, b) has a < b; face i is the face opposite local vertex i.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces{
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

struct Face {
  std::array<int, 3> v;  // ascending global vertex ids
  int plus = kBoundary;  // adjacent tet with the smaller index
  int minus = kBoundary; // other tet, or kBoundary
  Vec3 normal;           // unit normal pointing out of `plus`
  double area = 0.0;
  bool is_boundary() const { return minus == kBoundary; }
};

struct Edge {
  std::array<int, 2> v;  // ascending; tangent points from v[0] to v[1]
  std::vector<int> faces;
  std::vector<int> tets;
  bool on_boundary = false;
};

struct FaceFrame {
  Vec3 t1, t2, n;
};

class Mesh {
 public:
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_tets() const { return tets_.size(); }
  std::size_t num_faces() const { return faces_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_internal_faces() const { return num_internal_faces_; }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const Vec3& vertex(int i) const { return vertices_[i]; }
  // Positively oriented vertex list as supplied.
  const std::array<int, 4>& tet(int t) const { return tets_[t]; }
  // Vertex ids in ascending order; all element maps use this order.
  const std::array<int, 4>& sorted_tet(int t) const { return sorted_[t]; }
  const std::array<int, 4>& tet_faces(int t) const { return tet_faces_[t]; }
  const std::array<int, 6>& tet_edges(int t) const { return tet_edges_[t]; }
  const Face& face(int f) const { return faces_[f]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int subdomain_tag(int t) const { return tags_[t]; }
  const std::vector<int>& subdomain_tags() const { return tags_; }
  int refinement_level(int t) const { return levels_[t]; }
  const std::vector<int>& refinement_levels() const { return levels_; }
  // Index of the parent tet in the mesh this one was refined from, or -1.
  int parent(int t) const { return parents_[t]; }
  bool vertex_on_boundary(int v) const { return vertex_boundary_[v] != 0; }

  // -1 when absent. Arguments may be in any order.
  int find_edge(int a, int b) const;
  int find_face(int a, int b, int c) const;

  double tet_volume(int t) const;
  double tet_diameter(int t) const;
  double face_diameter(int f) const;
  Vec3 tet_centroid(int t) const;
  double h_max() const;
  double total_volume() const;

  friend Mesh build_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                         std::optional<std::vector<int>> subdomain_tags,
                         std::optional<std::vector<int>> levels,
                         std::optional<std::vector<int>> parents);

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<std::array<int, 4>> sorted_;
  std::vector<int> tags_;
  std::vector<int> levels_;
  std::vector<int> parents_;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 4>> tet_faces_;
  std::vector<std::array<int, 6>> tet_edges_;
  std::vector<char> vertex_boundary_;
  std::unordered_map<std::uint64_t, int> edge_lookup_;
  std::map<std::array<int, 3>, int> face_lookup_;
  std::size_t num_internal_faces_ = 0;
};

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Builds all derived topology. Throws NonConforming or DegenerateTet.
Mesh build_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                std::optional<std::vector<int>> subdomain_tags = std::nullopt,
                std::optional<std::vector<int>> levels = std::nullopt,
                std::optional<std::vector<int>> parents = std::nullopt);

// Assigns a subdomain tag from a tet centroid.
using SubdomainTagger = std::function<int(const Vec3& centroid)>;

// Kuhn split of (0,1)^3 into 6 n^3 tets.
Mesh unit_cube_mesh(int n, const SubdomainTagger& tagger = {});
// (-1,1) x (-1,1) x (0,1) minus [0,1] x [-1,0] x [0,1]; three blocks, each a
// Kuhn-split n x n x n grid.
Mesh l_brick_mesh(int n, const SubdomainTagger& tagger = {});

// Longest-edge bisection of the marked tets followed by conformity closure.
// Throws ClosureOverflow if the closure does not terminate.
Mesh refine(const Mesh& mesh, const std::set<int>& marked);

// t1 along the face edge (v0, v1), t2 = n x t1, n the face normal.
FaceFrame face_frame(const Mesh& mesh, int f);

struct EdgeFaceNormals {
  Vec3 n_ef;  // in-plane outward normal of the face boundary along the edge
  Vec3 n_fe;  // t_e x n_ef
};
// Throws NotAdjacent if f does not contain e.
EdgeFaceNormals edge_face_normals(const Mesh& mesh, int e, int f);

Vec3 edge_tangent(const Mesh& mesh, int e);

struct EdgeCycle {
  std::vector<int> tets;   // ring order
  std::vector<int> faces;  // faces[i] separates tets[i] and tets[i+1] (cyclically when closed)
  bool closed = false;
};
// Walks the tets around an edge through shared faces.
EdgeCycle edge_cycle(const Mesh& mesh, int e);

}  // namespace ndeq
