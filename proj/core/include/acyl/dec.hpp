#pragma once

// Discrete geometric carriers for the model curves: flat tori (handled in
// Fourier space) and closed oriented triangulated surfaces (handled with
// discrete exterior calculus).

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "acyl/linalg.hpp"

namespace acyl::dec {

/// Flat torus R^2 / (basis * Z^2). Columns of the basis are the lattice
/// generators.
class FlatTorus {
 public:
  /// Throws kDegenerateLattice when det(basis) vanishes.
  explicit FlatTorus(const Eigen::Matrix2d& basis);

  /// Row-major (b00, b01, b10, b11), the layout used by configs.
  static FlatTorus from_row_major(const std::array<double, 4>& entries);
  static FlatTorus square(double side);

  const Eigen::Matrix2d& basis() const { return basis_; }
  /// 2*pi * basis^{-T}: dual lattice whose vectors k give eigenvalues |k|^2.
  const Eigen::Matrix2d& dual_basis() const { return dual_basis_; }
  double area() const { return std::abs(basis_.determinant()); }

 private:
  Eigen::Matrix2d basis_;
  Eigen::Matrix2d dual_basis_;
};

struct FourierLevel {
  double eigenvalue;
  int multiplicity;  // real multiplicity
};

/// Dual-lattice wavevector k = dual_basis * n with n in Z^2.
struct Wavevector {
  Eigen::Vector2i n;
  Eigen::Vector2d k;
  double norm2;
};

/// One representative per antipodal pair {k, -k}, k != 0, with |k|^2 <= cutoff,
/// sorted by |k|^2 (ties by lattice index).
std::vector<Wavevector> half_dual_lattice(const FlatTorus& torus, double cutoff);

/// Eigenvalues |k|^2 <= cutoff of the flat Laplacian with real multiplicities.
std::vector<FourierLevel> torus_fourier_spectrum(const FlatTorus& torus, double cutoff);

using Triangle = std::array<int, 3>;
using LatticeShift = std::array<int, 2>;

/// Translations identifying a periodic (flat-torus) mesh with its cover.
struct PeriodicFrame {
  Eigen::Vector3d first;
  Eigen::Vector3d second;
};

struct Edge {
  int tail;
  int head;
  LatticeShift shift;  // head corner sits at positions[head] + shift * frame
};

/// Closed oriented triangle mesh. A periodic mesh stores per-corner lattice
/// shifts so triangles can straddle the fundamental domain.
class TriangulatedSurface {
 public:
  TriangulatedSurface(std::vector<Eigen::Vector3d> positions, std::vector<Triangle> triangles);
  TriangulatedSurface(std::vector<Eigen::Vector3d> positions, std::vector<Triangle> triangles,
                      PeriodicFrame frame, std::vector<std::array<LatticeShift, 3>> corner_shifts);

  int vertex_count() const { return static_cast<int>(positions_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int euler_characteristic() const { return vertex_count() - edge_count() + triangle_count(); }
  int component_count() const { return components_; }
  int genus() const { return (2 * components_ - euler_characteristic()) / 2; }

  const std::vector<Eigen::Vector3d>& positions() const { return positions_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool periodic() const { return frame_.has_value(); }

  /// Unwrapped position of corner `corner` of triangle `t`.
  Eigen::Vector3d corner(int t, int corner) const;

  /// For triangle t: global edge index and orientation sign of the boundary
  /// edges (c0 c1), (c1 c2), (c2 c0).
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
  const std::array<int, 3>& triangle_edge_signs(int t) const { return triangle_signs_[t]; }

 private:
  void build_topology();

  std::vector<Eigen::Vector3d> positions_;
  std::vector<Triangle> triangles_;
  std::optional<PeriodicFrame> frame_;
  std::vector<std::array<LatticeShift, 3>> shifts_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::array<int, 3>> triangle_signs_;
  int components_ = 0;
};

enum class StarKind { kAutomatic, kCircumcentric, kBarycentric };

std::string_view star_kind_name(StarKind kind);

/// Primal cochains with signed incidence operators and diagonal Hodge stars.
struct CochainComplex {
  int n0 = 0;
  int n1 = 0;
  int n2 = 0;
  SparseMatrix d0;  // n1 x n0
  SparseMatrix d1;  // n2 x n1
  Eigen::VectorXd star0;  // dual cell areas
  Eigen::VectorXd star1;  // dual length / primal length
  Eigen::VectorXd star2;  // 1 / triangle area
  StarKind kind = StarKind::kCircumcentric;
  int genus = 0;
  /// Boundary edges (c0c1, c1c2, c2c0) of each triangle with orientation signs.
  std::vector<std::array<int, 3>> boundary_edges;
  std::vector<std::array<int, 3>> boundary_signs;

  double total_area() const { return star0.sum(); }
};

/// Throws kDegenerateTriangle for zero-area triangles. kAutomatic selects
/// circumcentric stars when every triangle is strictly acute and falls back
/// to barycentric stars otherwise.
CochainComplex build_dec(const TriangulatedSurface& surface, StarKind kind = StarKind::kAutomatic);

/// Delta0 = star0^{-1} d0^T star1 d0 with mass star0.
SymmetricOperator laplacian0(const CochainComplex& cc);

/// Laplacian on dual 0-forms (values per triangle, mass = triangle area):
/// star2 d1 star1^{-1} d1^T. Conjugate to the primal 2-form Laplacian.
SymmetricOperator dual_laplacian0(const CochainComplex& cc);

/// Delta1 = d0 star0^{-1} d0^T star1 + star1^{-1} d1^T star2 d1 with mass star1.
SymmetricOperator laplacian1(const CochainComplex& cc);

}  // namespace acyl::dec
