#include "acyl/dec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>
#include <sstream>
#include <tuple>

#include "acyl/error.hpp"

namespace acyl::dec {

FlatTorus::FlatTorus(const Eigen::Matrix2d& basis) : basis_(basis) {
  const double det = basis.determinant();
  const double scale = basis.cwiseAbs().maxCoeff();
  if (!std::isfinite(det) || scale == 0.0 || std::abs(det) <= 1e-14 * scale * scale) {
    throw Error(ErrorCode::kDegenerateLattice, "lattice basis has (numerically) zero determinant");
  }
  dual_basis_ = 2.0 * std::numbers::pi * basis_.transpose().inverse();
}

FlatTorus FlatTorus::from_row_major(const std::array<double, 4>& entries) {
  Eigen::Matrix2d b;
  b << entries[0], entries[1], entries[2], entries[3];
  return FlatTorus(b);
}

FlatTorus FlatTorus::square(double side) {
  return FlatTorus(Eigen::Matrix2d::Identity() * side);
}

std::vector<Wavevector> half_dual_lattice(const FlatTorus& torus, double cutoff) {
  if (!(cutoff > 0.0)) throw Error(ErrorCode::kInvalidArgument, "cutoff must be positive");
  const Eigen::Matrix2d& k = torus.dual_basis();
  const double sigma_min = Eigen::JacobiSVD<Eigen::Matrix2d>(k).singularValues()(1);
  const int reach = static_cast<int>(std::ceil(std::sqrt(cutoff) / sigma_min)) + 1;
  std::vector<Wavevector> out;
  for (int a = 0; a <= reach; ++a) {
    for (int b = -reach; b <= reach; ++b) {
      if (a == 0 && b <= 0) continue;
      const Eigen::Vector2i n(a, b);
      const Eigen::Vector2d kv = k * n.cast<double>();
      const double norm2 = kv.squaredNorm();
      if (norm2 <= cutoff) out.push_back({n, kv, norm2});
    }
  }
  std::sort(out.begin(), out.end(), [](const Wavevector& x, const Wavevector& y) {
    if (x.norm2 != y.norm2) return x.norm2 < y.norm2;
    return std::tie(x.n[0], x.n[1]) < std::tie(y.n[0], y.n[1]);
  });
  return out;
}

std::vector<FourierLevel> torus_fourier_spectrum(const FlatTorus& torus, double cutoff) {
  std::vector<FourierLevel> levels{{0.0, 1}};
  for (const Wavevector& w : half_dual_lattice(torus, cutoff)) {
    FourierLevel& last = levels.back();
    if (std::abs(w.norm2 - last.eigenvalue) <= 1e-12 * std::max(1.0, last.eigenvalue)) {
      last.multiplicity += 2;
    } else {
      levels.push_back({w.norm2, 2});
    }
  }
  return levels;
}

namespace {

using EdgeKey = std::tuple<int, int, int, int>;

struct OrientedKey {
  EdgeKey key;
  int sign;
};

OrientedKey edge_key(int va, const LatticeShift& sa, int vb, const LatticeShift& sb) {
  const int r0 = sb[0] - sa[0];
  const int r1 = sb[1] - sa[1];
  if (va == vb && r0 == 0 && r1 == 0) {
    throw Error(ErrorCode::kDegenerateTriangle, "triangle has a repeated corner");
  }
  const bool forward = va < vb || (va == vb && std::make_pair(r0, r1) > std::make_pair(0, 0));
  if (forward) return {{va, vb, r0, r1}, +1};
  return {{vb, va, -r0, -r1}, -1};
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

TriangulatedSurface::TriangulatedSurface(std::vector<Eigen::Vector3d> positions,
                                         std::vector<Triangle> triangles)
    : positions_(std::move(positions)), triangles_(std::move(triangles)) {
  shifts_.assign(triangles_.size(), {LatticeShift{0, 0}, LatticeShift{0, 0}, LatticeShift{0, 0}});
  build_topology();
}

TriangulatedSurface::TriangulatedSurface(std::vector<Eigen::Vector3d> positions,
                                         std::vector<Triangle> triangles, PeriodicFrame frame,
                                         std::vector<std::array<LatticeShift, 3>> corner_shifts)
    : positions_(std::move(positions)),
      triangles_(std::move(triangles)),
      frame_(frame),
      shifts_(std::move(corner_shifts)) {
  if (shifts_.size() != triangles_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one shift triple per triangle is required");
  }
  build_topology();
}

Eigen::Vector3d TriangulatedSurface::corner(int t, int c) const {
  Eigen::Vector3d p = positions_[triangles_[t][c]];
  if (frame_) {
    const LatticeShift& s = shifts_[t][c];
    p += s[0] * frame_->first + s[1] * frame_->second;
  }
  return p;
}

void TriangulatedSurface::build_topology() {
  const int nv = vertex_count();
  if (triangles_.empty()) throw Error(ErrorCode::kInvalidArgument, "surface has no triangles");
  std::map<EdgeKey, int> index;
  std::vector<std::array<int, 2>> usage;  // [+1 count, -1 count]
  triangle_edges_.resize(triangles_.size());
  triangle_signs_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int v : triangles_[t]) {
      if (v < 0 || v >= nv) throw Error(ErrorCode::kInvalidArgument, "triangle vertex out of range");
    }
    for (int c = 0; c < 3; ++c) {
      const int a = c;
      const int b = (c + 1) % 3;
      const OrientedKey ok =
          edge_key(triangles_[t][a], shifts_[t][a], triangles_[t][b], shifts_[t][b]);
      auto [it, inserted] = index.try_emplace(ok.key, static_cast<int>(edges_.size()));
      if (inserted) {
        const auto& [tail, head, r0, r1] = ok.key;
        edges_.push_back({tail, head, {r0, r1}});
        usage.push_back({0, 0});
      }
      triangle_edges_[t][c] = it->second;
      triangle_signs_[t][c] = ok.sign;
      usage[it->second][ok.sign > 0 ? 0 : 1] += 1;
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const int faces = usage[e][0] + usage[e][1];
    if (faces != 2) {
      std::ostringstream msg;
      msg << "edge (" << edges_[e].tail << "," << edges_[e].head << ") has " << faces << " faces";
      throw Error(ErrorCode::kNonManifoldEdge, msg.str());
    }
    if (usage[e][0] != 1) {
      std::ostringstream msg;
      msg << "edge (" << edges_[e].tail << "," << edges_[e].head
          << ") is traversed twice in the same direction";
      throw Error(ErrorCode::kNonOrientable, msg.str());
    }
  }
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<bool> used(nv, false);
  for (const Edge& e : edges_) {
    used[e.tail] = used[e.head] = true;
    parent[find_root(parent, e.tail)] = find_root(parent, e.head);
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error(ErrorCode::kInvalidArgument, "surface has isolated vertices");
  }
  components_ = 0;
  for (int v = 0; v < nv; ++v) components_ += find_root(parent, v) == v ? 1 : 0;
}

std::string_view star_kind_name(StarKind kind) {
  switch (kind) {
    case StarKind::kAutomatic: return "automatic";
    case StarKind::kCircumcentric: return "circumcentric";
    case StarKind::kBarycentric: return "barycentric";
  }
  return "unknown";
}

namespace {

struct TriangleGeometry {
  std::array<Eigen::Vector3d, 3> p;
  double area;
  std::array<double, 3> cot;  // cotangent of the angle at each corner
  bool acute;
};

TriangleGeometry triangle_geometry(const TriangulatedSurface& s, int t) {
  TriangleGeometry g;
  for (int c = 0; c < 3; ++c) g.p[c] = s.corner(t, c);
  const double cross = (g.p[1] - g.p[0]).cross(g.p[2] - g.p[0]).norm();
  g.area = 0.5 * cross;
  double scale = 0.0;
  for (int c = 0; c < 3; ++c) scale = std::max(scale, (g.p[(c + 1) % 3] - g.p[c]).squaredNorm());
  if (!(g.area > 1e-12 * scale)) {
    std::ostringstream msg;
    msg << "triangle " << t << " has zero area";
    throw Error(ErrorCode::kDegenerateTriangle, msg.str());
  }
  g.acute = true;
  for (int c = 0; c < 3; ++c) {
    const Eigen::Vector3d u = g.p[(c + 1) % 3] - g.p[c];
    const Eigen::Vector3d v = g.p[(c + 2) % 3] - g.p[c];
    const double dot = u.dot(v);
    g.cot[c] = dot / cross;
    if (dot <= 1e-10 * u.norm() * v.norm()) g.acute = false;
  }
  return g;
}

}  // namespace

CochainComplex build_dec(const TriangulatedSurface& surface, StarKind kind) {
  CochainComplex cc;
  cc.n0 = surface.vertex_count();
  cc.n1 = surface.edge_count();
  cc.n2 = surface.triangle_count();
  cc.genus = surface.genus();

  std::vector<TriangleGeometry> geometry;
  geometry.reserve(cc.n2);
  bool all_acute = true;
  for (int t = 0; t < cc.n2; ++t) {
    geometry.push_back(triangle_geometry(surface, t));
    all_acute = all_acute && geometry.back().acute;
  }
  if (kind == StarKind::kAutomatic) {
    kind = all_acute ? StarKind::kCircumcentric : StarKind::kBarycentric;
  }
  cc.kind = kind;

  std::vector<Eigen::Triplet<double>> d0;
  d0.reserve(2 * cc.n1);
  for (int e = 0; e < cc.n1; ++e) {
    d0.emplace_back(e, surface.edges()[e].tail, -1.0);
    d0.emplace_back(e, surface.edges()[e].head, 1.0);
  }
  cc.d0.resize(cc.n1, cc.n0);
  cc.d0.setFromTriplets(d0.begin(), d0.end());

  std::vector<Eigen::Triplet<double>> d1;
  d1.reserve(3 * cc.n2);
  for (int t = 0; t < cc.n2; ++t) {
    for (int c = 0; c < 3; ++c) {
      d1.emplace_back(t, surface.triangle_edges(t)[c], surface.triangle_edge_signs(t)[c]);
    }
  }
  cc.d1.resize(cc.n2, cc.n1);
  cc.d1.setFromTriplets(d1.begin(), d1.end());
  cc.boundary_edges.resize(cc.n2);
  cc.boundary_signs.resize(cc.n2);
  for (int t = 0; t < cc.n2; ++t) {
    cc.boundary_edges[t] = surface.triangle_edges(t);
    cc.boundary_signs[t] = surface.triangle_edge_signs(t);
  }

  cc.star0 = Eigen::VectorXd::Zero(cc.n0);
  cc.star1 = Eigen::VectorXd::Zero(cc.n1);
  cc.star2 = Eigen::VectorXd::Zero(cc.n2);
  for (int t = 0; t < cc.n2; ++t) {
    const TriangleGeometry& g = geometry[t];
    const Triangle& tri = surface.triangles()[t];
    cc.star2[t] = 1.0 / g.area;
    if (kind == StarKind::kCircumcentric) {
      for (int c = 0; c < 3; ++c) {
        const int j = (c + 1) % 3;
        const int k = (c + 2) % 3;
        // Voronoi share of corner c: edges (c,j) and (c,k) weighted by the
        // cotangents of their opposite angles.
        cc.star0[tri[c]] += ((g.p[j] - g.p[c]).squaredNorm() * g.cot[k] +
                             (g.p[k] - g.p[c]).squaredNorm() * g.cot[j]) /
                            8.0;
        // Edge (c, j) is opposite corner k.
        cc.star1[surface.triangle_edges(t)[c]] += 0.5 * g.cot[k];
      }
    } else {
      const Eigen::Vector3d bary = (g.p[0] + g.p[1] + g.p[2]) / 3.0;
      for (int c = 0; c < 3; ++c) {
        const int j = (c + 1) % 3;
        cc.star0[tri[c]] += g.area / 3.0;
        const Eigen::Vector3d mid = 0.5 * (g.p[c] + g.p[j]);
        cc.star1[surface.triangle_edges(t)[c]] += (bary - mid).norm() / (g.p[j] - g.p[c]).norm();
      }
    }
  }
  if ((cc.star0.array() <= 0.0).any() || (cc.star1.array() <= 0.0).any()) {
    throw Error(ErrorCode::kDegenerateTriangle, "Hodge star has non-positive entries");
  }
  return cc;
}

SymmetricOperator laplacian0(const CochainComplex& cc) {
  const Eigen::VectorXd inv0 = cc.star0.cwiseInverse();
  SymmetricOperator op;
  op.matrix = inv0.asDiagonal() * SparseMatrix(cc.d0.transpose()) * cc.star1.asDiagonal() * cc.d0;
  op.mass = cc.star0;
  return op;
}

SymmetricOperator dual_laplacian0(const CochainComplex& cc) {
  const Eigen::VectorXd inv1 = cc.star1.cwiseInverse();
  SymmetricOperator op;
  op.matrix = cc.star2.asDiagonal() * cc.d1 * inv1.asDiagonal() * SparseMatrix(cc.d1.transpose());
  op.mass = cc.star2.cwiseInverse();
  return op;
}

SymmetricOperator laplacian1(const CochainComplex& cc) {
  const Eigen::VectorXd inv0 = cc.star0.cwiseInverse();
  const Eigen::VectorXd inv1 = cc.star1.cwiseInverse();
  const SparseMatrix d0t = cc.d0.transpose();
  const SparseMatrix d1t = cc.d1.transpose();
  SymmetricOperator op;
  op.matrix = cc.d0 * inv0.asDiagonal() * d0t * cc.star1.asDiagonal() +
              inv1.asDiagonal() * d1t * cc.star2.asDiagonal() * cc.d1;
  op.mass = cc.star1;
  return op;
}

}  // namespace acyl::dec
