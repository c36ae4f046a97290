#include "acyl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "acyl/error.hpp"

namespace acyl {

double SymmetricOperator::symmetry_residual() const {
  const SparseMatrix ml = mass.asDiagonal() * matrix;
  const SparseMatrix mt = SparseMatrix(ml.transpose());
  return max_abs(SparseMatrix(ml - mt));
}

namespace {

Eigen::MatrixXd conjugate_by_mass(const Eigen::MatrixXd& op, const Eigen::VectorXd& mass) {
  const Eigen::VectorXd s = mass.cwiseSqrt();
  const Eigen::VectorXd si = s.cwiseInverse();
  Eigen::MatrixXd sym = s.asDiagonal() * op * si.asDiagonal();
  // Symmetrize away rounding so the solver sees an exactly symmetric matrix.
  return 0.5 * (sym + sym.transpose());
}

}  // namespace

MassEigensystem mass_eigensystem(const Eigen::MatrixXd& op, const Eigen::VectorXd& mass,
                                 bool with_vectors) {
  if (op.rows() != op.cols() || op.rows() != mass.size()) {
    throw Error(ErrorCode::kInvalidArgument, "operator and mass dimensions disagree");
  }
  if ((mass.array() <= 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument, "mass must be strictly positive");
  }
  MassEigensystem out;
  if (op.rows() == 0) return out;
  const Eigen::MatrixXd sym = conjugate_by_mass(op, mass);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      sym, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, "symmetric eigensolver did not converge");
  }
  out.values = solver.eigenvalues();
  if (with_vectors) {
    out.vectors = mass.cwiseSqrt().cwiseInverse().asDiagonal() * solver.eigenvectors();
  }
  return out;
}

Eigen::VectorXd mass_eigenvalues(const SymmetricOperator& op) {
  return mass_eigensystem(Eigen::MatrixXd(op.matrix), op.mass, false).values;
}

int kernel_dimension_by_gap(const Eigen::VectorXd& values) {
  std::vector<double> mags(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
  std::sort(mags.begin(), mags.end());
  constexpr double kFloor = 1e-6;
  auto first_above = std::find_if(mags.begin(), mags.end(), [](double v) { return v > kFloor; });
  if (first_above == mags.end()) return static_cast<int>(mags.size());
  const double threshold = kFloor * *first_above;
  return static_cast<int>(std::count_if(mags.begin(), mags.end(),
                                        [threshold](double v) { return v < threshold; }));
}

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  }
  return best;
}

}  // namespace acyl
