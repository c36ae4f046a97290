#pragma once

// Weighted Fredholm index combinatorics on ends with known indicial roots,
// and the symplectic structure on the kernel of D.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acyl/dirac_models.hpp"
#include "acyl/spectral.hpp"

namespace acyl::index {

struct EndSystem {
  std::vector<spectral::Spectrum> ends;

  int size() const { return static_cast<int>(ends.size()); }
};

/// Exponential weights, one per end.
using RateVector = std::vector<double>;

struct Root {
  double lambda = 0.0;
  int multiplicity = 0;
};

struct EndContribution {
  int end_id = 0;
  int contribution = 0;
  std::vector<Root> crossed_roots;
};

struct IndexReport {
  RateVector rates;
  int index = 0;
  std::vector<EndContribution> per_end;
  std::string formula_tag;
};

/// Criticality tolerance of an end: 1e-8 times its spectral radius.
double default_tolerance(const spectral::Spectrum& end);

/// Per end: distance from the rate to the root set <= tol (default per end).
std::vector<bool> is_critical(const RateVector& rate, const EndSystem& ends,
                              std::optional<double> tol = std::nullopt);

/// Roots of one end strictly between a and b.
std::vector<Root> roots_between(const spectral::Spectrum& end, double a, double b);

/// Throws kCriticalRate, kWindowExceedsCutoff, kOddKernelDimension.
IndexReport fredholm_index(const RateVector& rate, const EndSystem& ends);

struct WallCrossing {
  int jump = 0;
  std::vector<EndContribution> crossed;  // contribution = sum of d over crossed roots
};

/// Requires rate1 < rate2 componentwise (kNotOrdered otherwise).
WallCrossing wall_crossing(const RateVector& rate1, const RateVector& rate2, const EndSystem& ends);

/// Fixed asymptotics: -sum d0/2 - sum_{lambda in (mu, 0)} d_lambda; rates must be negative.
int fixed_moduli_vdim(const RateVector& rate, const EndSystem& ends);

/// Varying asymptotics: sum d0/2.
int varying_moduli_vdim(const EndSystem& ends);

/// Stratum of asymptotic cross-sections: dim E - d0/2.
int stratum_vdim(int stratum_dim, const spectral::Spectrum& end);

/// Omega_ab = form(basis_a, basis_b) for a bilinear form on the ambient space.
struct SymplecticKernel {
  Eigen::MatrixXd basis;
  Eigen::MatrixXd form;  // ambient matrix F with omega(x, y) = x^T F y
  Eigen::MatrixXd gram;
  double area_weight = 1.0;

  Eigen::Index dim() const { return basis.cols(); }
};

/// Integrated fiber pairing for torus models: omega(xi, eta) = sum over
/// Fourier modes of |phi_m|^2 * xi_m^T P eta_m, i.e. the integral of
/// P(xi, eta) over the torus. P is a skew 4x4 matrix.
SymplecticKernel symplectic_form(const dirac::DiracModel& model, const Eigen::MatrixXd& basis,
                                 const Eigen::Matrix4d& fiber_pairing);

/// Kähler pairing omega(xi, eta) = <J xi, eta>_M for any model.
SymplecticKernel symplectic_form(const dirac::DiracModel& model, const Eigen::MatrixXd& basis);

/// Isotropic within tol and of half the kernel dimension. The subspace is
/// given by ambient vectors, which must lie in the span of sk.basis.
bool is_lagrangian(const Eigen::MatrixXd& subspace, const SymplecticKernel& sk, double tol = 1e-9);

}  // namespace acyl::index
