#pragma once

// Finite-dimensional (D, J) pairs standing in for the Dirac operator of a
// holomorphic curve and the complex structure of its normal bundle.

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "acyl/dec.hpp"
#include "acyl/linalg.hpp"

namespace acyl::dirac {

enum class ModelKind { kTorus, kSpecialLagrangian, kSynthetic };

/// Block layout of the special Lagrangian model: primal 0-forms, dual
/// 0-forms (one value per triangle), primal 1-forms.
struct SlLayout {
  int n0 = 0;
  int n2 = 0;
  int n1 = 0;
  int genus = 0;
  /// max |R - U| between the discrete rotation on harmonic 1-forms and its
  /// nearest orthogonal anti-involution U.
  double hodge_correction = 0.0;
};

/// D is self-adjoint and J-anti-linear with respect to the diagonal mass M;
/// A = J D is the self-adjoint operator whose spectrum carries the indicial
/// roots.
struct DiracModel {
  std::string label;
  ModelKind kind = ModelKind::kSynthetic;
  Eigen::VectorXd mass;
  Eigen::MatrixXd dirac;
  Eigen::MatrixXd complex_structure;
  double area = 1.0;
  /// Eigenvalues of A with |lambda| below this radius are all represented.
  double completeness_radius = std::numeric_limits<double>::infinity();
  /// Torus models store a C^4-valued Fourier expansion: index = mode * 4 + r.
  int fiber_dim = 0;
  std::optional<SlLayout> sl;

  Eigen::Index dim() const { return dirac.rows(); }
  Eigen::MatrixXd a_operator() const { return complex_structure * dirac; }
};

/// Left multiplication by i, j, k on H = R^4 in the basis (1, i, j, k).
Eigen::Matrix4d quaternion_i();
Eigen::Matrix4d quaternion_j();
Eigen::Matrix4d quaternion_k();

/// Quaternionic torus model on the real Fourier modes |k|^2 <= cutoff
/// tensored with R^4: D = I1 d/dtheta + I2 d/ds, J = I3.
DiracModel build_torus_model(const dec::FlatTorus& torus, double cutoff);

/// Coefficient vector of the constant section with value v.
Eigen::VectorXd torus_constant_section(const DiracModel& model, const Eigen::Vector4d& v);

/// Sparse special Lagrangian operator
///   [ 0    0    d0*  ]
///   [ 0    0    *d1  ]
///   [ d0  -*d   0    ]
/// on primal 0-forms (+) dual 0-forms (+) 1-forms.
struct SlOperator {
  SparseMatrix dirac;
  Eigen::VectorXd mass;
  SlLayout layout;
};

SlOperator sl_operator(const dec::CochainComplex& cc);

/// max |D^2 - (Delta0 (+) Delta0_dual (+) Delta1)|.
double sl_square_residual(const dec::CochainComplex& cc);

/// Dense special Lagrangian model with its complex structure. Cost is cubic
/// in the number of cochains.
DiracModel build_sl_model(const dec::CochainComplex& cc);

/// Diagonal model with A = diag(lambda) on clusters (lambda, multiplicity),
/// identity mass, and J pairing the lambda and -lambda clusters. Clusters
/// must be symmetric with an even multiplicity at 0.
DiracModel synthetic_model(const std::vector<std::pair<double, int>>& clusters);

struct ModelDiagnostics {
  double self_adjoint = 0.0;    // max |M D - D^T M|
  double j_square = 0.0;        // max |J^2 + I|
  double j_orthogonal = 0.0;    // max |J^T M J - M|
  double anticommutation = 0.0; // max |D J + J D|
  double a_self_adjoint = 0.0;  // max |M A - A^T M|
  bool passed = false;
};

ModelDiagnostics check_model(const DiracModel& model);

}  // namespace acyl::dirac
