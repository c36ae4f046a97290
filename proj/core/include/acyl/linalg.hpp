#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace acyl {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Linear operator that is self-adjoint with respect to a positive diagonal
/// mass inner product <u, v>_M = u^T diag(mass) v.
struct SymmetricOperator {
  SparseMatrix matrix;
  Eigen::VectorXd mass;

  Eigen::Index dim() const { return matrix.rows(); }

  /// max |M L - L^T M|.
  double symmetry_residual() const;
};

struct MassEigensystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns, aligned with values
};

/// Eigenvalues (ascending) of an M-self-adjoint operator with diagonal mass.
Eigen::VectorXd mass_eigenvalues(const SymmetricOperator& op);

/// Full eigensystem of an M-self-adjoint dense operator with diagonal mass,
/// computed on the conjugated symmetric matrix M^{1/2} L M^{-1/2}.
MassEigensystem mass_eigensystem(const Eigen::MatrixXd& op, const Eigen::VectorXd& mass,
                                 bool with_vectors = true);

/// Number of eigenvalues counted as numerical kernel: |lambda| below
/// 1e-6 times the first |lambda| that exceeds 1e-6.
int kernel_dimension_by_gap(const Eigen::VectorXd& values);

double max_abs(const Eigen::MatrixXd& m);
double max_abs(const SparseMatrix& m);

}  // namespace acyl
