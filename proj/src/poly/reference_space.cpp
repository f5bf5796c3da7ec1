// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/reference_space.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "ndeq/mesh.hpp"
#include "ndeq/quadrature.hpp"

namespace ndeq {

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::P_scalar_tet: return "P_scalar_tet";
    case SpaceKind::Nedelec1_tet: return "Nedelec1_tet";
    case SpaceKind::RT_tet: return "RT_tet";
    case SpaceKind::P_scalar_tri: return "P_scalar_tri";
    case SpaceKind::RTtangential_tri: return "RTtangential_tri";
  }
  return "unknown";
}

int space_dimension(SpaceKind kind, int k) {
  switch (kind) {
    case SpaceKind::P_scalar_tet: return (k + 1) * (k + 2) * (k + 3) / 6;
    case SpaceKind::Nedelec1_tet: return k * (k + 2) * (k + 3) / 2;
    case SpaceKind::RT_tet: return k * (k + 1) * (k + 3) / 2;
    case SpaceKind::P_scalar_tri: return (k + 1) * (k + 2) / 2;
    case SpaceKind::RTtangential_tri: return k * (k + 2);
  }
  return 0;
}

namespace {

const std::array<Vec3, 4> kRefVertex{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
constexpr std::array<std::array<int, 2>, 3> kTriEdges{{{0, 1}, {0, 2}, {1, 2}}};

bool is_tri(SpaceKind k) { return k == SpaceKind::P_scalar_tri || k == SpaceKind::RTtangential_tri; }
bool is_scalar(SpaceKind k) { return k == SpaceKind::P_scalar_tet || k == SpaceKind::P_scalar_tri; }

// Shifted Legendre polynomial on [0, 1].
double legendre01(int m, double s) {
  const double x = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = x;
  if (m == 0) return p0;
  for (int n = 1; n < m; ++n) {
    const double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Accumulates functionals as rows over a growing point list.
class DofBuilder {
 public:
  explicit DofBuilder(int ncomp) : ncomp_(ncomp) {}

  // Adds a functional sum_q weight_q * (dir_q . u(points_q)).
  void add(const std::vector<Vec3>& pts, const std::vector<double>& w,
           const std::vector<Vec3>& dir, DofEntity ent) {
    const int base = static_cast<int>(points_.size());
    points_.insert(points_.end(), pts.begin(), pts.end());
    Row row;
    for (std::size_t q = 0; q < pts.size(); ++q) {
      for (int c = 0; c < ncomp_; ++c) {
        if (dir[q][c] != 0.0) row.push_back({(base + static_cast<int>(q)) * ncomp_ + c, w[q] * dir[q][c]});
      }
    }
    rows_.push_back(std::move(row));
    entities_.push_back(ent);
  }

  DofFunctionals finish(std::vector<DofEntity>& ents) {
    DofFunctionals d;
    d.points = points_;
    d.weights = Eigen::MatrixXd::Zero(rows_.size(), points_.size() * ncomp_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (const auto& [col, v] : rows_[i]) d.weights(i, col) += v;
    }
    ents = entities_;
    return d;
  }

 private:
  using Row = std::vector<std::pair<int, double>>;
  int ncomp_;
  std::vector<Vec3> points_;
  std::vector<Row> rows_;
  std::vector<DofEntity> entities_;
};

// Tangential edge moments against shifted Legendre polynomials.
void edge_moments(DofBuilder& b, const Vec3& a, const Vec3& t, int k, int local) {
  const auto& qr = quadrature(QuadDomain::Segment, 2 * k);
  for (int m = 0; m < k; ++m) {
    std::vector<Vec3> pts, dir;
    std::vector<double> w;
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const double s = qr.points[q].x();
      pts.push_back(a + s * t);
      w.push_back(qr.weights[q] * legendre01(m, s));
      dir.push_back(t);
    }
    b.add(pts, w, dir, {1, local});
  }
}

// Moments over a parametrised triangle a + s*t1 + t*t2 of (u . d) p(s, t)
// for every 2D monomial p of degree <= deg.
void face_moments(DofBuilder& b, const Vec3& a, const Vec3& t1, const Vec3& t2, const Vec3& d,
                  int deg, int qdeg, DofEntity ent) {
  if (deg < 0) return;
  const auto& qr = quadrature(QuadDomain::Triangle, qdeg);
  const auto& mb = monomials(2, deg);
  for (int i = 0; i < mb.size(); ++i) {
    std::vector<Vec3> pts, dir;
    std::vector<double> w;
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Vec3& p = qr.points[q];
      pts.push_back(a + p.x() * t1 + p.y() * t2);
      w.push_back(qr.weights[q] * mb.eval(p)[i]);
      dir.push_back(d);
    }
    b.add(pts, w, dir, ent);
  }
}

// Moments of each component against monomials of degree <= deg over the
// reference cell.
void cell_moments(DofBuilder& b, int ncomp, int deg, int qdeg, bool tri, int local_cell) {
  if (deg < 0) return;
  const auto& qr = quadrature(tri ? QuadDomain::Triangle : QuadDomain::Tet, qdeg);
  const auto& mb = monomials(tri ? 2 : 3, deg);
  const DofEntity ent{tri ? 2 : 3, local_cell};
  for (int c = 0; c < ncomp; ++c) {
    for (int i = 0; i < mb.size(); ++i) {
      std::vector<Vec3> pts, dir;
      std::vector<double> w;
      for (std::size_t q = 0; q < qr.size(); ++q) {
        pts.push_back(qr.points[q]);
        w.push_back(qr.weights[q] * mb.eval(qr.points[q])[i]);
        dir.push_back(Vec3::Unit(c));
      }
      b.add(pts, w, dir, ent);
    }
  }
}

struct TriLattice {
  std::vector<std::array<int, 3>> index;
  std::vector<Vec3> points;
  std::vector<DofEntity> ents;
};

TriLattice tri_lattice(int k) {
  struct Item {
    int cls, local;
    std::array<int, 3> idx;
  };
  std::vector<Item> items;
  for (int i1 = 0; i1 <= k; ++i1) {
    for (int i2 = 0; i1 + i2 <= k; ++i2) {
      const std::array<int, 3> idx{k - i1 - i2, i1, i2};
      const int nz = (idx[0] > 0) + (idx[1] > 0) + (idx[2] > 0);
      int local = 0;
      if (nz == 1) {
        local = idx[1] > 0 ? 1 : (idx[2] > 0 ? 2 : 0);
      } else if (nz == 2) {
        for (int e = 0; e < 3; ++e) {
          if (idx[kTriEdges[e][0]] > 0 && idx[kTriEdges[e][1]] > 0) local = e;
        }
      }
      items.push_back({3 - nz, local, idx});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.cls != b.cls) return a.cls > b.cls;
    if (a.local != b.local) return a.local < b.local;
    return a.idx > b.idx;
  });
  TriLattice out;
  for (const auto& it : items) {
    out.index.push_back(it.idx);
    out.points.emplace_back(static_cast<double>(it.idx[1]) / k, static_cast<double>(it.idx[2]) / k, 0.0);
    const int nz = 3 - it.cls;
    out.ents.push_back({nz - 1, it.local});
  }
  return out;
}

}  // namespace

ReferenceSpace::ReferenceSpace(SpaceKind kind, int degree) : kind_(kind), degree_(degree) {
  const int lo = is_scalar(kind) ? 0 : 1;
  if (degree < lo || degree > 4) {
    throw Error(ErrorCode::UnsupportedDegree,
                std::string(to_string(kind)) + " degree " + std::to_string(degree) + " not supported");
  }
  const int k = degree;
  domain_dim_ = is_tri(kind) ? 2 : 3;
  ncomp_ = is_scalar(kind) ? 1 : domain_dim_;
  dim_ = space_dimension(kind, k);
  mono_ = &ndeq::monomials(domain_dim_, k);
  const MonomialBasis& mb = *mono_;
  const int nm = mb.size();

  // Generators.
  std::vector<Eigen::VectorXd> gens;
  auto unit = [&](int c, int i) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(ncomp_ * nm);
    g[c * nm + i] = 1.0;
    return g;
  };
  if (is_scalar(kind)) {
    for (int i = 0; i < nm; ++i) gens.push_back(unit(0, i));
  } else {
    for (int c = 0; c < ncomp_; ++c) {
      for (int i = 0; i < nm; ++i) {
        if (mb.total_degree(i) <= k - 1) gens.push_back(unit(c, i));
      }
    }
    std::array<Eigen::MatrixXd, 3> mul;
    for (int a = 0; a < domain_dim_; ++a) mul[a] = mb.multiply(a);
    for (int i = 0; i < nm; ++i) {
      if (mb.total_degree(i) != k - 1) continue;
      const Eigen::VectorXd m = Eigen::VectorXd::Unit(nm, i);
      if (kind == SpaceKind::Nedelec1_tet) {
        // x × (e_c m)
        for (int c = 0; c < 3; ++c) {
          Eigen::VectorXd g = Eigen::VectorXd::Zero(3 * nm);
          const int c1 = (c + 1) % 3, c2 = (c + 2) % 3;
          // (x × e_c)_{c2} = x_{c1}, (x × e_c)_{c1} = -x_{c2}
          g.segment(c2 * nm, nm) = mul[c1] * m;
          g.segment(c1 * nm, nm) = -mul[c2] * m;
          gens.push_back(g);
        }
      } else if (kind == SpaceKind::RT_tet) {
        Eigen::VectorXd g(3 * nm);
        for (int c = 0; c < 3; ++c) g.segment(c * nm, nm) = mul[c] * m;
        gens.push_back(g);
      } else {
        // rotated x m = (-y m, x m)
        Eigen::VectorXd g(2 * nm);
        g.segment(0, nm) = -mul[1] * m;
        g.segment(nm, nm) = mul[0] * m;
        gens.push_back(g);
      }
    }
  }
  Eigen::MatrixXd G(ncomp_ * nm, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) G.col(j) = gens[j];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
  if (qr.rank() != dim_) {
    throw Error(ErrorCode::InvalidArgument, std::string("generator rank mismatch for ") + to_string(kind));
  }
  const Eigen::MatrixXd Q =
      qr.householderQ() * Eigen::MatrixXd::Identity(G.rows(), dim_);

  // Degree-of-freedom functionals.
  DofBuilder b(ncomp_);
  const int qd = 2 * k;
  switch (kind) {
    case SpaceKind::P_scalar_tet: {
      if (k == 0) {
        b.add({Vec3(0.25, 0.25, 0.25)}, {1.0}, {Vec3(1, 0, 0)}, {3, 0});
        break;
      }
      const auto& nodes = lagrange_nodes(k);
      for (std::size_t n = 0; n < nodes.size(); ++n) {
        const auto& idx = nodes.index[n];
        DofEntity ent{0, 0};
        std::vector<int> nz;
        for (int a = 0; a < 4; ++a) {
          if (idx[a] > 0) nz.push_back(a);
        }
        ent.dim = static_cast<int>(nz.size()) - 1;
        if (ent.dim == 0) ent.local = nz[0];
        if (ent.dim == 1) {
          for (int e = 0; e < 6; ++e) {
            if (kLocalEdges[e][0] == nz[0] && kLocalEdges[e][1] == nz[1]) ent.local = e;
          }
        }
        if (ent.dim == 2) {
          for (int a = 0; a < 4; ++a) {
            if (idx[a] == 0) ent.local = a;
          }
        }
        b.add({nodes.points[n]}, {1.0}, {Vec3(1, 0, 0)}, ent);
      }
      break;
    }
    case SpaceKind::P_scalar_tri: {
      if (k == 0) {
        b.add({Vec3(1.0 / 3, 1.0 / 3, 0)}, {1.0}, {Vec3(1, 0, 0)}, {2, 0});
        break;
      }
      const auto lat = tri_lattice(k);
      for (std::size_t n = 0; n < lat.points.size(); ++n) {
        b.add({lat.points[n]}, {1.0}, {Vec3(1, 0, 0)}, lat.ents[n]);
      }
      break;
    }
    case SpaceKind::Nedelec1_tet: {
      for (int e = 0; e < 6; ++e) {
        const Vec3& a = kRefVertex[kLocalEdges[e][0]];
        edge_moments(b, a, kRefVertex[kLocalEdges[e][1]] - a, k, e);
      }
      for (int f = 0; f < 4; ++f) {
        const auto& fv = kLocalFaces[f];
        const Vec3& a = kRefVertex[fv[0]];
        const Vec3 t1 = kRefVertex[fv[1]] - a, t2 = kRefVertex[fv[2]] - a;
        face_moments(b, a, t1, t2, t1, k - 2, qd, {2, f});
        face_moments(b, a, t1, t2, t2, k - 2, qd, {2, f});
      }
      cell_moments(b, 3, k - 3, qd, false, 0);
      break;
    }
    case SpaceKind::RT_tet: {
      for (int f = 0; f < 4; ++f) {
        const auto& fv = kLocalFaces[f];
        const Vec3& a = kRefVertex[fv[0]];
        const Vec3 t1 = kRefVertex[fv[1]] - a, t2 = kRefVertex[fv[2]] - a;
        face_moments(b, a, t1, t2, t1.cross(t2), k - 1, qd, {2, f});
      }
      cell_moments(b, 3, k - 2, qd, false, 0);
      break;
    }
    case SpaceKind::RTtangential_tri: {
      const std::array<Vec3, 3> tv{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
      for (int e = 0; e < 3; ++e) {
        const Vec3& a = tv[kTriEdges[e][0]];
        edge_moments(b, a, tv[kTriEdges[e][1]] - a, k, e);
      }
      cell_moments(b, 2, k - 2, qd, true, 0);
      break;
    }
  }
  dofs_ = b.finish(entities_);
  if (static_cast<int>(entities_.size()) != dim_) {
    throw Error(ErrorCode::InvalidArgument, std::string("dof count mismatch for ") + to_string(kind));
  }

  // Generator values at dof points, then D = L Q and basis = Q D^{-1}.
  auto values_at_points = [&](const Eigen::MatrixXd& coef) {
    const Eigen::MatrixXd M = mb.table(dofs_.points);
    Eigen::MatrixXd V(dofs_.points.size() * ncomp_, coef.cols());
    for (int c = 0; c < ncomp_; ++c) {
      const Eigen::MatrixXd vc = M.transpose() * coef.middleRows(c * nm, nm);
      for (std::size_t q = 0; q < dofs_.points.size(); ++q) V.row(q * ncomp_ + c) = vc.row(q);
    }
    return V;
  };
  const Eigen::MatrixXd D = dofs_.weights * values_at_points(Q);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
  const auto& sv = svd.singularValues();
  gen_cond_ = sv[0] / sv[sv.size() - 1];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::InvalidArgument, std::string("dofs not unisolvent for ") + to_string(kind));
  }
  coef_ = Q * lu.inverse();

  // Derived coefficient sets.
  auto block = [&](int c) { return coef_.middleRows(c * nm, nm); };
  const auto& Dx = mb.derivative(0);
  const auto& Dy = mb.derivative(1);
  const auto& Dz = mb.derivative(2);
  if (kind == SpaceKind::Nedelec1_tet) {
    curl_.resize(3 * nm, dim_);
    curl_.middleRows(0, nm) = Dy * block(2) - Dz * block(1);
    curl_.middleRows(nm, nm) = Dz * block(0) - Dx * block(2);
    curl_.middleRows(2 * nm, nm) = Dx * block(1) - Dy * block(0);
  }
  if (is_scalar(kind)) {
    grad_.resize(domain_dim_ * nm, dim_);
    for (int a = 0; a < domain_dim_; ++a) grad_.middleRows(a * nm, nm) = mb.derivative(a) * coef_;
    if (kind == SpaceKind::P_scalar_tri) {
      curl_.resize(2 * nm, dim_);
      curl_.middleRows(0, nm) = Dy * coef_;
      curl_.middleRows(nm, nm) = -Dx * coef_;
    }
  }
  if (kind == SpaceKind::RT_tet || kind == SpaceKind::RTtangential_tri) {
    div_ = Eigen::MatrixXd::Zero(nm, dim_);
    for (int c = 0; c < ncomp_; ++c) div_ += mb.derivative(c) * block(c);
  }
}

const Eigen::MatrixXd& ReferenceSpace::curl_coefficients() const {
  if (curl_.size() == 0) throw Error(ErrorCode::WrongKind, std::string("no curl for ") + to_string(kind_));
  return curl_;
}

const Eigen::MatrixXd& ReferenceSpace::grad_coefficients() const {
  if (grad_.size() == 0) throw Error(ErrorCode::WrongKind, std::string("no gradient for ") + to_string(kind_));
  return grad_;
}

const Eigen::MatrixXd& ReferenceSpace::div_coefficients() const {
  if (div_.size() == 0) throw Error(ErrorCode::WrongKind, std::string("no divergence for ") + to_string(kind_));
  return div_;
}

BasisTable ReferenceSpace::table_from(const Eigen::MatrixXd& coef, int ncomp,
                                      const std::vector<Vec3>& points) const {
  const int nm = mono_->size();
  const Eigen::MatrixXd M = mono_->table(points);
  BasisTable t;
  t.comp.resize(ncomp);
  for (int c = 0; c < ncomp; ++c) t.comp[c] = coef.middleRows(c * nm, nm).transpose() * M;
  return t;
}

BasisTable ReferenceSpace::eval(const std::vector<Vec3>& points) const {
  return table_from(coef_, ncomp_, points);
}

BasisTable ReferenceSpace::eval_curl(const std::vector<Vec3>& points) const {
  const auto& c = curl_coefficients();
  return table_from(c, static_cast<int>(c.rows() / mono_->size()), points);
}

BasisTable ReferenceSpace::eval_grad(const std::vector<Vec3>& points) const {
  return table_from(grad_coefficients(), domain_dim_, points);
}

BasisTable ReferenceSpace::eval_div(const std::vector<Vec3>& points) const {
  return table_from(div_coefficients(), 1, points);
}

Eigen::MatrixXd ReferenceSpace::unisolvence_matrix() const {
  Eigen::MatrixXd out(dim_, dim_);
  for (int j = 0; j < dim_; ++j) out.col(j) = dofs_of(coef_.col(j));
  return out;
}

Eigen::VectorXd ReferenceSpace::dofs_of(const Eigen::VectorXd& coeffs) const {
  const int nm = mono_->size();
  const int src_nm = static_cast<int>(coeffs.size()) / ncomp_;
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(ncomp_ * nm);
  for (int c = 0; c < ncomp_; ++c) padded.segment(c * nm, src_nm) = coeffs.segment(c * src_nm, src_nm);
  Eigen::VectorXd v(dofs_.points.size() * ncomp_);
  for (std::size_t q = 0; q < dofs_.points.size(); ++q) {
    const Eigen::VectorXd m = mono_->eval(dofs_.points[q]);
    for (int c = 0; c < ncomp_; ++c) v[q * ncomp_ + c] = padded.segment(c * nm, nm).dot(m);
  }
  return dofs_.weights * v;
}

Eigen::VectorXd ReferenceSpace::interpolate(
    const std::function<Eigen::VectorXd(const Vec3&)>& f) const {
  Eigen::VectorXd v(dofs_.points.size() * ncomp_);
  for (std::size_t q = 0; q < dofs_.points.size(); ++q) v.segment(q * ncomp_, ncomp_) = f(dofs_.points[q]);
  return dofs_.weights * v;
}

const ReferenceSpace& reference_space(SpaceKind kind, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<ReferenceSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{static_cast<int>(kind), degree}];
  if (!slot) slot = std::make_unique<ReferenceSpace>(kind, degree);
  return *slot;
}

const LagrangeNodeSet& lagrange_nodes(int degree) {
  if (degree < 1 || degree > 8) {
    throw Error(ErrorCode::UnsupportedDegree, "Lagrange node degree " + std::to_string(degree));
  }
  static std::mutex mu;
  static std::map<int, std::unique_ptr<LagrangeNodeSet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[degree];
  if (slot) return *slot;
  const int k = degree;
  struct Item {
    int cls, local;
    std::array<int, 4> idx;
  };
  std::vector<Item> items;
  for (int i1 = 0; i1 <= k; ++i1) {
    for (int i2 = 0; i1 + i2 <= k; ++i2) {
      for (int i3 = 0; i1 + i2 + i3 <= k; ++i3) {
        const std::array<int, 4> idx{k - i1 - i2 - i3, i1, i2, i3};
        int nz = 0;
        for (int v : idx) nz += v > 0;
        int local = 0;
        if (nz == 1) {
          for (int a = 0; a < 4; ++a) {
            if (idx[a] > 0) local = a;
          }
        } else if (nz == 2) {
          for (int e = 0; e < 6; ++e) {
            if (idx[kLocalEdges[e][0]] > 0 && idx[kLocalEdges[e][1]] > 0) local = e;
          }
        } else if (nz == 3) {
          for (int a = 0; a < 4; ++a) {
            if (idx[a] == 0) local = a;
          }
        }
        items.push_back({nz, local, idx});
      }
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.cls != b.cls) return a.cls < b.cls;
    if (a.local != b.local) return a.local < b.local;
    return a.idx > b.idx;
  });
  auto set = std::make_unique<LagrangeNodeSet>();
  set->degree = k;
  for (const auto& it : items) {
    set->index.push_back(it.idx);
    set->points.emplace_back(static_cast<double>(it.idx[1]) / k, static_cast<double>(it.idx[2]) / k,
                             static_cast<double>(it.idx[3]) / k);
    set->cls.push_back(static_cast<NodeClass>(it.cls - 1));
  }
  slot = std::move(set);
  return *slot;
}

}  // namespace ndeq
