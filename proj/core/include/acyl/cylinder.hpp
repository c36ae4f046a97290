#pragma once

// Model operator D_C = J d/dt + D on the half-cylinder [0, T] x Sigma,
// reduced to scalar ODEs in the eigenbasis of A = J D.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "acyl/dirac_models.hpp"
#include "acyl/spectral.hpp"

namespace acyl::cylinder {

/// Uniform grid t_n = n h, n = 0..steps.
struct TimeGrid {
  double h = 0.01;
  int steps = 3000;

  static TimeGrid with_length(double length, double h = 0.01);
  double length() const { return h * steps; }
  int samples() const { return steps + 1; }
  double time(int n) const { return h * n; }
  Eigen::VectorXd times() const;
};

/// Decaying coupling eps * exp(mu t) * A0 with A0 symmetric of unit norm in
/// mode coordinates, drawn from a seeded generator.
struct Perturbation {
  double epsilon = 0.0;
  double mu = -1.0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd a0;
};

/// Symmetric matrix of spectral norm 1 with entries from a 64-bit Mersenne
/// twister; identical across platforms for a given seed.
Eigen::MatrixXd seeded_coupling(Eigen::Index dim, std::uint64_t seed);

/// Fields on the grid are stored as (modes x samples) coefficient matrices
/// in the M-orthonormal eigenbasis of the spectrum.
class CylinderOperator {
 public:
  CylinderOperator(const dirac::DiracModel& model, const spectral::Spectrum& spectrum);

  CylinderOperator with_perturbation(double epsilon, double mu, std::uint64_t seed) const;

  Eigen::Index modes() const { return lambdas_.size(); }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  /// J and D written in the eigenbasis (orthogonal and symmetric).
  const Eigen::MatrixXd& j_modes() const { return j_modes_; }
  const Eigen::MatrixXd& d_modes() const { return d_modes_; }
  const spectral::Spectrum& spectrum() const { return spectrum_; }
  const std::optional<Perturbation>& perturbation() const { return perturbation_; }
  /// Weight tolerance: 1e-8 times the spectral radius.
  double tolerance() const;

  /// Coupling matrix at time t (zero when unperturbed).
  Eigen::MatrixXd coupling(double t) const;

 private:
  spectral::Spectrum spectrum_;
  Eigen::VectorXd lambdas_;
  Eigen::MatrixXd j_modes_;
  Eigen::MatrixXd d_modes_;
  std::optional<Perturbation> perturbation_;
};

/// 4th-order finite-difference time derivative (one-sided near the ends).
Eigen::MatrixXd time_derivative(const Eigen::MatrixXd& u, const TimeGrid& grid);

/// D_C u (plus the coupling when perturbed), derivative by time_derivative.
Eigen::MatrixXd apply_cylinder(const CylinderOperator& op, const Eigen::MatrixXd& u,
                               const TimeGrid& grid);

/// max |J (D_C u) - (-u' + A u)| with the same stencil on both sides.
double reduction_residual(const CylinderOperator& op, const Eigen::MatrixXd& u,
                          const TimeGrid& grid);

struct HomogeneousCheck {
  double identity_residual = 0.0;  // max discrepancy between the two sides
  double image_norm = 0.0;         // max_t |D_C(e^{lambda t} t^j nu)|_M
  double image_norm_at_zero = 0.0;
};

/// Evaluates D_C(e^{lambda t} t^j nu) directly and through the expansion
/// e^{lambda t} t^j (lambda J nu + D nu) + j e^{lambda t} t^{j-1} J nu.
HomogeneousCheck homogeneous_apply(const dirac::DiracModel& model, double lambda, int j,
                                   const Eigen::VectorXd& nu, const std::vector<double>& times);

struct CylinderSolution {
  Eigen::MatrixXd modes;  // modes x samples
  TimeGrid grid;
  double weight = 0.0;
  double residual = 0.0;      // weighted sup of D_C u - f over the interior
  double weighted_sup = 0.0;  // max_t e^{-weight t} |u(t)|
};

/// max_t e^{-weight t} |u(t)|.
double weighted_sup(const Eigen::MatrixXd& u, const TimeGrid& grid, double weight);

/// Weighted Green's operator: modes with lambda_j > weight integrate back
/// from u(T) = 0, the others forward from u(0) = 0. Throws kCriticalWeight.
CylinderSolution solve_cylinder(const CylinderOperator& op, const Eigen::MatrixXd& rhs,
                                const TimeGrid& grid, double weight);

struct KernelWindow {
  int dimension = 0;
  std::vector<int> modes;
  Eigen::VectorXd rates;
  Eigen::MatrixXd nu;  // ambient vectors, one column per mode
};

/// Kernel elements e^{lambda_j t} nu_j with lambda_j in (lo, hi).
KernelWindow kernel_in_window(const CylinderOperator& op, double lo, double hi);

/// Field e^{lambda t} * coefficients on the grid.
Eigen::MatrixXd exponential_field(const Eigen::VectorXd& coefficients, double lambda,
                                  const TimeGrid& grid);

/// Smoothstep cutoff: 0 for s <= 0, 3s^2 - 2s^3 on [0, 1], 1 for s >= 1.
double smoothstep(double s);

/// e_{P,lambda}(c) = chi(t - t0) e^{lambda t} c.
Eigen::MatrixXd cutoff_extension(const Eigen::VectorXd& coefficients, double lambda, double t0,
                                 const TimeGrid& grid);

struct AsymptoticLimit {
  Eigen::VectorXd coefficient;  // mode coordinates, supported on V_lambda
  double remainder_rate = 0.0;
  int fit_points = 0;
};

/// Leading V_lambda coefficient of u and the decay rate of u - e_{P,lambda}(c).
/// Throws kInsufficientTail when T < 20 / |lambda - lambda1| or fewer than
/// 10 grid points carry a measurable remainder.
AsymptoticLimit asymptotic_limit(const CylinderOperator& op, const CylinderSolution& u,
                                 double lambda, double lambda1, double t0 = 0.0);

struct KernelCount {
  int count = 0;
  int free_modes = 0;  // modes with lambda_j < weight
  Eigen::VectorXd singular_values;
  double threshold = 0.0;
  std::vector<int> boundary_set;
};

/// Modes with lambda_j < 0: the boundary set used by the reports.
std::vector<int> negative_modes(const CylinderOperator& op);

/// Dimension of solutions of (D_C + coupling) u = 0 with u_j(0) = 0 for
/// j in S and e^{-weight t} u bounded. Throws kCriticalWeight,
/// kPerturbationTooLarge, kIllConditionedMatching.
KernelCount perturbed_kernel_count(const CylinderOperator& op, double weight,
                                   const std::vector<int>& boundary_set, const TimeGrid& grid);

}  // namespace acyl::cylinder
