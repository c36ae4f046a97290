#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "acyl/cylinder.hpp"
#include "acyl/error.hpp"

namespace acyl::cylinder {
namespace {

const dec::FlatTorus kTorus = dec::FlatTorus::square(2.0 * std::numbers::pi);

struct TorusEnd {
  dirac::DiracModel model = dirac::build_torus_model(kTorus, 1.5);
  spectral::Spectrum spectrum = spectral::eigendecompose(model);
  CylinderOperator op{model, spectrum};
};

const TorusEnd& torus_end() {
  static const TorusEnd end;
  return end;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

int first_mode_with(const CylinderOperator& op, double lambda) {
  for (Eigen::Index j = 0; j < op.modes(); ++j)
    if (std::abs(op.lambdas()[j] - lambda) < 1e-9) return static_cast<int>(j);
  return -1;
}

TEST(CylinderOperator, ModeMatricesAreConsistent) {
  const CylinderOperator& op = torus_end().op;
  const Eigen::Index n = op.modes();
  EXPECT_LE(max_abs(Eigen::MatrixXd(op.j_modes() * op.j_modes() + Eigen::MatrixXd::Identity(n, n))), 1e-12);
  EXPECT_LE(max_abs(Eigen::MatrixXd(op.j_modes() * op.d_modes() - Eigen::MatrixXd(op.lambdas().asDiagonal()))), 1e-12);
}

TEST(CylinderOperator, ReductionIdentity) {
  const TimeGrid grid = TimeGrid::with_length(5.0);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  for (double eps : {0.0, 1e-2}) {
    const CylinderOperator op = eps == 0.0 ? torus_end().op : torus_end().op.with_perturbation(eps, -1.0, 9);
    Eigen::MatrixXd u(op.modes(), grid.samples());
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = normal(gen);
    EXPECT_LE(reduction_residual(op, u, grid), 1e-10);
  }
}

TEST(CylinderOperator, CouplingIsSeededSymmetricAndDecays) {
  const CylinderOperator a = torus_end().op.with_perturbation(1e-3, -1.0, 42);
  const CylinderOperator b = torus_end().op.with_perturbation(1e-3, -1.0, 42);
  EXPECT_EQ(max_abs(Eigen::MatrixXd(a.perturbation()->a0 - b.perturbation()->a0)), 0.0);
  const Eigen::MatrixXd& a0 = a.perturbation()->a0;
  EXPECT_LE(max_abs(Eigen::MatrixXd(a0 - a0.transpose())), 0.0);
  for (double t : {0.0, 1.0, 5.0}) {
    EXPECT_LE(a.coupling(t).operatorNorm(), 1e-3 * std::exp(-t) * (1 + 1e-12));
  }
}

TEST(HomogeneousApply, KernelElementsAndPolynomialObstruction) {
  const TorusEnd& end = torus_end();
  const std::vector<double> times = {0.0, 0.5, 1.0, 2.0};
  const Eigen::VectorXd nu = spectral::homogeneous_kernel(end.spectrum, 1.0).col(0);
  const HomogeneousCheck j0 = homogeneous_apply(end.model, 1.0, 0, nu, times);
  EXPECT_LE(j0.identity_residual, 1e-10);
  EXPECT_LE(j0.image_norm, 1e-10 * std::exp(2.0));
  const HomogeneousCheck j1 = homogeneous_apply(end.model, 1.0, 1, nu, times);
  EXPECT_LE(j1.identity_residual, 1e-10);
  // D_C(e^t t nu) = e^t J nu has norm e^t |nu|.
  const double nu_norm = std::sqrt(nu.cwiseAbs2().dot(end.model.mass));
  EXPECT_NEAR(j1.image_norm, std::exp(2.0) * nu_norm, 1e-9);
  const Eigen::VectorXd other = spectral::homogeneous_kernel(end.spectrum, -1.0).col(0);
  const HomogeneousCheck off = homogeneous_apply(end.model, 1.0, 0, other, times);
  EXPECT_NEAR(off.image_norm_at_zero, 2.0, 1e-10);
}

TEST(SolveCylinder, ManufacturedSolution) {
  const CylinderOperator& op = torus_end().op;
  const TimeGrid grid = TimeGrid::with_length(60.0);
  const int mode = first_mode_with(op, 1.0);
  ASSERT_GE(mode, 0);
  Eigen::MatrixXd exact = Eigen::MatrixXd::Zero(op.modes(), grid.samples());
  Eigen::MatrixXd derivative = exact;
  for (int n = 0; n < grid.samples(); ++n) {
    const double t = grid.time(n);
    exact(mode, n) = std::exp(-t) * std::sin(t);
    derivative(mode, n) = std::exp(-t) * (std::cos(t) - std::sin(t));
  }
  const Eigen::MatrixXd rhs = op.j_modes() * derivative + op.d_modes() * exact;
  // Truncation at T costs e^{-(1 + weight) T}, negligible for these weights; positive weights
  // shrink the weighted norm of u*, which loosens the relative bound.
  for (auto [weight, bound] : {std::pair{-0.5, 1e-8}, {-0.3, 1e-8}, {0.5, 1e-7}, {1.5, 1e-7}}) {
    const CylinderSolution sol = solve_cylinder(op, rhs, grid, weight);
    const double err = weighted_sup(Eigen::MatrixXd(sol.modes - exact), grid, weight) /
                       weighted_sup(exact, grid, weight);
    EXPECT_LE(err, bound) << weight;
    EXPECT_LE(sol.residual, 1e-6) << weight;
  }
}

TEST(SolveCylinder, ZeroDataAndCriticalWeights) {
  const CylinderOperator& op = torus_end().op;
  const TimeGrid grid = TimeGrid::with_length(5.0);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(op.modes(), grid.samples());
  EXPECT_EQ(max_abs(solve_cylinder(op, zero, grid, 0.3).modes), 0.0);
  for (double w : {-1.0, 0.0, 1.0}) {
    EXPECT_EQ(code_of([&] { solve_cylinder(op, zero, grid, w); }), ErrorCode::kCriticalWeight);
  }
  EXPECT_EQ(code_of([&] { solve_cylinder(op.with_perturbation(1e-3, -1, 1), zero, grid, 0.3); }),
            ErrorCode::kInvalidArgument);
}

TEST(KernelInWindow, DimensionsFollowRoots) {
  const CylinderOperator& op = torus_end().op;
  EXPECT_EQ(kernel_in_window(op, -0.5, 0.5).dimension, 4);
  EXPECT_EQ(kernel_in_window(op, 0.1, 0.9).dimension, 0);
  EXPECT_EQ(kernel_in_window(op, -1.2, 1.2).dimension, 20);
  EXPECT_EQ(code_of([&] { kernel_in_window(op, -1.0, 0.5); }), ErrorCode::kCriticalWeight);
  const KernelWindow w = kernel_in_window(op, 0.5, 1.2);
  for (int c = 0; c < w.dimension; ++c) {
    const auto check = homogeneous_apply(torus_end().model, w.rates[c], 0, w.nu.col(c), {0.0, 1.0});
    EXPECT_LE(check.image_norm, 1e-9);
  }
}

TEST(AsymptoticLimit, TwoTermExpansion) {
  const CylinderOperator& op = torus_end().op;
  const TimeGrid grid = TimeGrid::with_length(30.0);
  Eigen::VectorXd nu0 = Eigen::VectorXd::Zero(op.modes());
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(op.modes());
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  for (Eigen::Index j = 0; j < op.modes(); ++j) {
    rho[j] = normal(gen);
    if (std::abs(op.lambdas()[j]) < 1e-9) nu0[j] = normal(gen);
  }
  CylinderSolution u;
  u.grid = grid;
  u.modes = exponential_field(nu0, 0.0, grid) + exponential_field(rho, -1.0, grid);
  const AsymptoticLimit lim = asymptotic_limit(op, u, 0.0, -1.0);
  EXPECT_LE((lim.coefficient - nu0).norm(), 1e-6 * nu0.norm());
  EXPECT_NEAR(lim.remainder_rate, -1.0, 0.1);

  CylinderSolution fast;
  fast.grid = grid;
  fast.modes = exponential_field(rho, -1.0, grid);
  EXPECT_LE(asymptotic_limit(op, fast, 0.0, -1.0).coefficient.norm(), 1e-6 * rho.norm());
}

TEST(AsymptoticLimit, RejectsShortTails) {
  const CylinderOperator& op = torus_end().op;
  CylinderSolution u;
  u.grid = TimeGrid::with_length(10.0);
  u.modes = Eigen::MatrixXd::Ones(op.modes(), u.grid.samples());
  EXPECT_EQ(code_of([&] { asymptotic_limit(op, u, 0.0, -1.0); }), ErrorCode::kInsufficientTail);
}

TEST(AsymptoticLimit, ErrorShrinksWithLongerTails) {
  const CylinderOperator& op = torus_end().op;
  Eigen::VectorXd nu0 = Eigen::VectorXd::Zero(op.modes());
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(op.modes());
  for (Eigen::Index j = 0; j < op.modes(); ++j) {
    rho[j] = std::cos(3.0 * j);
    if (std::abs(op.lambdas()[j]) < 1e-9) nu0[j] = 1.0 + j;
  }
  double previous = std::numeric_limits<double>::infinity();
  for (double length : {20.0, 40.0}) {
    CylinderSolution u;
    u.grid = TimeGrid::with_length(length);
    u.modes = exponential_field(nu0, 0.0, u.grid) + exponential_field(rho, -1.0, u.grid);
    const double err = (asymptotic_limit(op, u, 0.0, -1.0).coefficient - nu0).norm();
    EXPECT_LT(err, previous);
    previous = err;
  }
}

TEST(Smoothstep, Profile) {
  EXPECT_EQ(smoothstep(-1.0), 0.0);
  EXPECT_EQ(smoothstep(0.0), 0.0);
  EXPECT_EQ(smoothstep(1.0), 1.0);
  EXPECT_EQ(smoothstep(2.0), 1.0);
  EXPECT_NEAR(smoothstep(0.5), 0.5, 1e-15);
}

TEST(PerturbedKernelCount, UnperturbedClosedForm) {
  const CylinderOperator& op = torus_end().op;
  const TimeGrid grid = TimeGrid::with_length(30.0);
  const std::vector<int> s = negative_modes(op);
  EXPECT_EQ(s.size(), 8u);
  EXPECT_EQ(perturbed_kernel_count(op, 0.5, s, grid).count, 4);
  EXPECT_EQ(perturbed_kernel_count(op, -0.5, s, grid).count, 0);
  EXPECT_EQ(perturbed_kernel_count(op, 1.5, s, grid).count, 12);
  EXPECT_EQ(perturbed_kernel_count(op, 0.5, {}, grid).count, 12);
  EXPECT_EQ(code_of([&] { perturbed_kernel_count(op, 0.0, s, grid); }), ErrorCode::kCriticalWeight);
}

TEST(PerturbedKernelCount, StableUnderSmallCoupling) {
  const TimeGrid grid = TimeGrid::with_length(30.0);
  for (double eps : {1e-3, 5e-4, 2.5e-4}) {
    const CylinderOperator op = torus_end().op.with_perturbation(eps, -1.0, 2024);
    const std::vector<int> s = negative_modes(op);
    const int above = perturbed_kernel_count(op, 0.5, s, grid).count;
    const int below = perturbed_kernel_count(op, -0.5, s, grid).count;
    EXPECT_EQ(above, 4);
    EXPECT_EQ(below, 0);
  }
  const CylinderOperator big = torus_end().op.with_perturbation(0.3, -1.0, 1);
  EXPECT_EQ(code_of([&] { perturbed_kernel_count(big, 0.5, negative_modes(big), grid); }),
            ErrorCode::kPerturbationTooLarge);
}

}  // namespace
}  // namespace acyl::cylinder
