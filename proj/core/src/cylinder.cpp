#include "acyl/cylinder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "acyl/error.hpp"

namespace acyl::cylinder {

TimeGrid TimeGrid::with_length(double length, double h) {
  if (!(h > 0.0) || !(length >= 4.0 * h)) {
    throw Error(ErrorCode::kInvalidArgument, "time grid needs h > 0 and at least 4 steps");
  }
  return {h, static_cast<int>(std::lround(length / h))};
}

Eigen::VectorXd TimeGrid::times() const {
  return Eigen::VectorXd::LinSpaced(samples(), 0.0, length());
}

Eigen::MatrixXd seeded_coupling(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd a(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      a(i, j) = 2.0 * std::ldexp(static_cast<double>(gen() >> 11), -53) - 1.0;
    }
  }
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  if (dim == 0) return sym;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return sym / es.eigenvalues().cwiseAbs().maxCoeff();
}

CylinderOperator::CylinderOperator(const dirac::DiracModel& model,
                                   const spectral::Spectrum& spectrum)
    : spectrum_(spectrum), lambdas_(spectrum.eigenvalues) {
  if (spectrum.dim() != model.dim() || spectrum.eigenvectors.cols() != model.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "spectrum does not match the model");
  }
  const Eigen::MatrixXd& v = spectrum.eigenvectors;
  const Eigen::MatrixXd vm = v.transpose() * model.mass.asDiagonal();
  j_modes_ = vm * model.complex_structure * v;
  d_modes_ = vm * model.dirac * v;
  d_modes_ = 0.5 * (d_modes_ + d_modes_.transpose()).eval();
}

CylinderOperator CylinderOperator::with_perturbation(double epsilon, double mu,
                                                     std::uint64_t seed) const {
  if (!(epsilon >= 0.0) || !(mu < 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation needs epsilon >= 0 and mu < 0");
  }
  CylinderOperator out = *this;
  out.perturbation_ = Perturbation{epsilon, mu, seed, seeded_coupling(modes(), seed)};
  return out;
}

double CylinderOperator::tolerance() const { return 1e-8 * spectrum_.spectral_radius(); }

Eigen::MatrixXd CylinderOperator::coupling(double t) const {
  if (!perturbation_) return Eigen::MatrixXd::Zero(modes(), modes());
  return perturbation_->epsilon * std::exp(perturbation_->mu * t) * perturbation_->a0;
}

Eigen::MatrixXd time_derivative(const Eigen::MatrixXd& u, const TimeGrid& grid) {
  const Eigen::Index n = u.cols();
  if (n < 5) throw Error(ErrorCode::kInvalidArgument, "derivative needs at least 5 samples");
  const double s = 1.0 / (12.0 * grid.h);
  Eigen::MatrixXd du(u.rows(), n);
  du.col(0) = s * (-25 * u.col(0) + 48 * u.col(1) - 36 * u.col(2) + 16 * u.col(3) - 3 * u.col(4));
  du.col(1) = s * (-3 * u.col(0) - 10 * u.col(1) + 18 * u.col(2) - 6 * u.col(3) + u.col(4));
  for (Eigen::Index k = 2; k < n - 2; ++k) {
    du.col(k) = s * (u.col(k - 2) - 8 * u.col(k - 1) + 8 * u.col(k + 1) - u.col(k + 2));
  }
  const Eigen::Index e = n - 1;
  du.col(e - 1) =
      -s * (-3 * u.col(e) - 10 * u.col(e - 1) + 18 * u.col(e - 2) - 6 * u.col(e - 3) + u.col(e - 4));
  du.col(e) =
      -s * (-25 * u.col(e) + 48 * u.col(e - 1) - 36 * u.col(e - 2) + 16 * u.col(e - 3) - 3 * u.col(e - 4));
  return du;
}

namespace {

void check_field(const CylinderOperator& op, const Eigen::MatrixXd& u, const TimeGrid& grid) {
  if (u.rows() != op.modes() || u.cols() != grid.samples()) {
    throw Error(ErrorCode::kInvalidArgument, "field does not match modes x grid samples");
  }
}

void add_coupling(const CylinderOperator& op, const Eigen::MatrixXd& u, const TimeGrid& grid,
                  const Eigen::MatrixXd& left, Eigen::MatrixXd& out) {
  if (!op.perturbation()) return;
  const Perturbation& p = *op.perturbation();
  const Eigen::MatrixXd la0 = left * p.a0;
  for (int n = 0; n < grid.samples(); ++n) {
    out.col(n) += p.epsilon * std::exp(p.mu * grid.time(n)) * (la0 * u.col(n));
  }
}

}  // namespace

Eigen::MatrixXd apply_cylinder(const CylinderOperator& op, const Eigen::MatrixXd& u,
                               const TimeGrid& grid) {
  check_field(op, u, grid);
  Eigen::MatrixXd f = op.j_modes() * time_derivative(u, grid) + op.d_modes() * u;
  add_coupling(op, u, grid, Eigen::MatrixXd::Identity(op.modes(), op.modes()), f);
  return f;
}

double reduction_residual(const CylinderOperator& op, const Eigen::MatrixXd& u,
                          const TimeGrid& grid) {
  const Eigen::MatrixXd lhs = op.j_modes() * apply_cylinder(op, u, grid);
  Eigen::MatrixXd rhs = -time_derivative(u, grid) + op.lambdas().asDiagonal() * u;
  add_coupling(op, u, grid, op.j_modes(), rhs);
  return max_abs(Eigen::MatrixXd(lhs - rhs));
}

HomogeneousCheck homogeneous_apply(const dirac::DiracModel& model, double lambda, int j,
                                   const Eigen::VectorXd& nu, const std::vector<double>& times) {
  if (j < 0) throw Error(ErrorCode::kInvalidArgument, "polynomial degree must be >= 0");
  if (nu.size() != model.dim()) throw Error(ErrorCode::kInvalidArgument, "nu has wrong dimension");
  const Eigen::MatrixXd& jm = model.complex_structure;
  const Eigen::VectorXd j_nu = jm * nu;
  const Eigen::VectorXd d_nu = model.dirac * nu;
  auto m_norm = [&](const Eigen::VectorXd& x) { return std::sqrt(x.cwiseAbs2().dot(model.mass)); };
  HomogeneousCheck out;
  for (double t : times) {
    const double e = std::exp(lambda * t);
    const double p = std::pow(t, j);
    const double dp = j == 0 ? 0.0 : j * std::pow(t, j - 1);
    // w = e p nu, w' = e (lambda p + dp) nu.
    const Eigen::VectorXd w = e * p * nu;
    const Eigen::VectorXd dw = e * (lambda * p + dp) * nu;
    const Eigen::VectorXd direct = jm * dw + model.dirac * w;
    const Eigen::VectorXd expanded = e * p * (lambda * j_nu + d_nu) + e * dp * j_nu;
    out.identity_residual = std::max(out.identity_residual, m_norm(direct - expanded));
    const double image = m_norm(direct);
    out.image_norm = std::max(out.image_norm, image);
    if (t == 0.0) out.image_norm_at_zero = image;
  }
  return out;
}

double weighted_sup(const Eigen::MatrixXd& u, const TimeGrid& grid, double weight) {
  double best = 0.0;
  for (Eigen::Index n = 0; n < u.cols(); ++n) {
    best = std::max(best, std::exp(-weight * grid.time(static_cast<int>(n))) * u.col(n).norm());
  }
  return best;
}

namespace {

void check_weight(const CylinderOperator& op, double weight) {
  const Eigen::VectorXd& l = op.lambdas();
  for (Eigen::Index j = 0; j < l.size(); ++j) {
    if (std::abs(l[j] - weight) <= op.tolerance()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "weight " << weight << " hits eigenvalue " << l[j] << " of mode " << j;
      throw Error(ErrorCode::kCriticalWeight, msg.str());
    }
  }
}

// Integral of phi over [t_n, t_{n+1}] from four neighbouring samples
// (cubic interpolation), as weights on sample offsets relative to n.
struct IntervalRule {
  int first;
  std::array<double, 4> weights;
};

IntervalRule interval_rule(int n, int steps) {
  if (n == 0) return {0, {9.0 / 24, 19.0 / 24, -5.0 / 24, 1.0 / 24}};
  if (n == steps - 1) return {steps - 3, {1.0 / 24, -5.0 / 24, 19.0 / 24, 9.0 / 24}};
  return {n - 1, {-1.0 / 24, 13.0 / 24, 13.0 / 24, -1.0 / 24}};
}

// Solves u' = lambda u + g for one mode on the grid.
Eigen::RowVectorXd solve_mode(double lambda, const Eigen::RowVectorXd& g, const TimeGrid& grid,
                              bool backward) {
  const int steps = grid.steps;
  const double h = grid.h;
  Eigen::RowVectorXd u = Eigen::RowVectorXd::Zero(steps + 1);
  // integral over [t_n, t_{n+1}] of e^{lambda (t_anchor - s)} g(s).
  auto integral = [&](int n, int anchor) {
    const IntervalRule rule = interval_rule(n, steps);
    double sum = 0.0;
    for (int q = 0; q < 4; ++q) {
      const int k = rule.first + q;
      sum += rule.weights[q] * std::exp(lambda * h * (anchor - k)) * g[k];
    }
    return h * sum;
  };
  if (backward) {
    const double decay = std::exp(-lambda * h);
    for (int n = steps - 1; n >= 0; --n) u[n] = decay * u[n + 1] - integral(n, n);
  } else {
    const double growth = std::exp(lambda * h);
    for (int n = 0; n < steps; ++n) u[n + 1] = growth * u[n] + integral(n, n + 1);
  }
  return u;
}

}  // namespace

CylinderSolution solve_cylinder(const CylinderOperator& op, const Eigen::MatrixXd& rhs,
                                const TimeGrid& grid, double weight) {
  if (op.perturbation()) {
    throw Error(ErrorCode::kInvalidArgument, "solve_cylinder needs the unperturbed operator");
  }
  check_field(op, rhs, grid);
  if (grid.steps < 4) throw Error(ErrorCode::kInvalidArgument, "time grid too short");
  check_weight(op, weight);
  // D_C u = f  <=>  u' - Lambda u = -J f.
  const Eigen::MatrixXd g = -op.j_modes() * rhs;
  CylinderSolution sol;
  sol.grid = grid;
  sol.weight = weight;
  sol.modes.resize(op.modes(), grid.samples());
  for (Eigen::Index j = 0; j < op.modes(); ++j) {
    const double lambda = op.lambdas()[j];
    sol.modes.row(j) = solve_mode(lambda, g.row(j), grid, lambda > weight);
  }
  sol.residual = weighted_sup(Eigen::MatrixXd(apply_cylinder(op, sol.modes, grid) - rhs), grid, weight);
  sol.weighted_sup = weighted_sup(sol.modes, grid, weight);
  return sol;
}

KernelWindow kernel_in_window(const CylinderOperator& op, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::kInvalidArgument, "window needs lo < hi");
  check_weight(op, lo);
  check_weight(op, hi);
  KernelWindow out;
  std::vector<double> rates;
  for (Eigen::Index j = 0; j < op.modes(); ++j) {
    const double l = op.lambdas()[j];
    if (l > lo && l < hi) {
      out.modes.push_back(static_cast<int>(j));
      rates.push_back(l);
    }
  }
  out.dimension = static_cast<int>(out.modes.size());
  out.rates = Eigen::Map<const Eigen::VectorXd>(rates.data(), static_cast<Eigen::Index>(rates.size()));
  out.nu.resize(op.spectrum().eigenvectors.rows(), out.dimension);
  for (int c = 0; c < out.dimension; ++c) out.nu.col(c) = op.spectrum().eigenvectors.col(out.modes[c]);
  return out;
}

Eigen::MatrixXd exponential_field(const Eigen::VectorXd& coefficients, double lambda,
                                  const TimeGrid& grid) {
  Eigen::MatrixXd u(coefficients.size(), grid.samples());
  for (int n = 0; n < grid.samples(); ++n) u.col(n) = std::exp(lambda * grid.time(n)) * coefficients;
  return u;
}

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

Eigen::MatrixXd cutoff_extension(const Eigen::VectorXd& coefficients, double lambda, double t0,
                                 const TimeGrid& grid) {
  Eigen::MatrixXd u = exponential_field(coefficients, lambda, grid);
  for (int n = 0; n < grid.samples(); ++n) u.col(n) *= smoothstep(grid.time(n) - t0);
  return u;
}

AsymptoticLimit asymptotic_limit(const CylinderOperator& op, const CylinderSolution& u,
                                 double lambda, double lambda1, double t0) {
  if (!(lambda1 < lambda)) throw Error(ErrorCode::kInvalidArgument, "asymptotic limit needs lambda1 < lambda");
  if (u.modes.rows() != op.modes()) throw Error(ErrorCode::kInvalidArgument, "solution has wrong mode count");
  const TimeGrid& grid = u.grid;
  const double length = grid.length();
  if (length < 20.0 / (lambda - lambda1)) {
    std::ostringstream msg;
    msg << "T = " << length << " is shorter than 20 / |lambda - lambda1| = " << 20.0 / (lambda - lambda1);
    throw Error(ErrorCode::kInsufficientTail, msg.str());
  }
  const double tol = op.spectrum().cluster_tol;
  const int tail_begin = (3 * grid.steps) / 4;
  AsymptoticLimit out;
  out.coefficient = Eigen::VectorXd::Zero(op.modes());
  for (Eigen::Index j = 0; j < op.modes(); ++j) {
    if (std::abs(op.lambdas()[j] - lambda) > tol) continue;
    double sum = 0.0;
    for (int n = tail_begin; n <= grid.steps; ++n) sum += std::exp(-lambda * grid.time(n)) * u.modes(j, n);
    out.coefficient[j] = sum / (grid.steps - tail_begin + 1);
  }
  const Eigen::MatrixXd remainder = u.modes - cutoff_extension(out.coefficient, lambda, t0, grid);
  double scale = 0.0;
  for (int n = 0; n <= grid.steps; ++n) scale = std::max(scale, u.modes.col(n).norm());
  const double floor = 1e-10 * scale;
  // Least-squares slope of log|r(t)| over the qualifying samples.
  double st = 0, sy = 0, stt = 0, sty = 0;
  int count = 0;
  for (int n = 0; n <= tail_begin; ++n) {
    const double t = grid.time(n);
    const double r = remainder.col(n).norm();
    if (t < t0 + 1.0 || !(r > floor)) continue;
    const double y = std::log(r);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  out.fit_points = count;
  if (count < 10) {
    std::ostringstream msg;
    msg << "only " << count << " samples carry a remainder above the noise floor";
    throw Error(ErrorCode::kInsufficientTail, msg.str());
  }
  out.remainder_rate = (count * sty - st * sy) / (count * stt - st * st);
  return out;
}

std::vector<int> negative_modes(const CylinderOperator& op) {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < op.modes(); ++j) {
    if (op.lambdas()[j] < -op.tolerance()) out.push_back(static_cast<int>(j));
  }
  return out;
}

KernelCount perturbed_kernel_count(const CylinderOperator& op, double weight,
                                   const std::vector<int>& boundary_set, const TimeGrid& grid) {
  check_weight(op, weight);
  const Eigen::Index n = op.modes();
  for (int j : boundary_set) {
    if (j < 0 || j >= n) throw Error(ErrorCode::kInvalidArgument, "boundary index out of range");
  }
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) gap = std::min(gap, std::abs(op.lambdas()[j] - weight));
  if (op.perturbation() && op.perturbation()->epsilon >= 0.5 * gap) {
    std::ostringstream msg;
    msg << "epsilon " << op.perturbation()->epsilon << " is not below half the spectral gap "
        << gap << " at the weight";
    throw Error(ErrorCode::kPerturbationTooLarge, msg.str());
  }

  KernelCount out;
  out.boundary_set = boundary_set;
  std::vector<int> free;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (op.lambdas()[j] < weight) free.push_back(static_cast<int>(j));
  }
  out.free_modes = static_cast<int>(free.size());
  if (free.empty()) return out;

  // Bounded solutions near t = T span the modes below the weight; carry that
  // subspace back to t = 0 (it dominates backward in time).
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, out.free_modes);
  for (int c = 0; c < out.free_modes; ++c) y(free[c], c) = 1.0;
  const Eigen::MatrixXd lambda = op.lambdas().asDiagonal();
  Eigen::MatrixXd jb = Eigen::MatrixXd::Zero(n, n);
  double eps = 0.0, mu = 0.0;
  if (op.perturbation()) {
    jb = op.j_modes() * op.perturbation()->a0;
    eps = op.perturbation()->epsilon;
    mu = op.perturbation()->mu;
  }
  auto field = [&](double t, const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
    return lambda * x + eps * std::exp(mu * t) * (jb * x);
  };
  const double h = -grid.h;
  for (int step = grid.steps; step > 0; --step) {
    const double t = grid.time(step);
    const Eigen::MatrixXd k1 = field(t, y);
    const Eigen::MatrixXd k2 = field(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = field(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = field(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    y = qr.householderQ() * Eigen::MatrixXd::Identity(n, out.free_modes);
  }

  if (boundary_set.empty()) {
    out.count = out.free_modes;
    return out;
  }
  Eigen::MatrixXd matching(boundary_set.size(), out.free_modes);
  for (std::size_t r = 0; r < boundary_set.size(); ++r) matching.row(r) = y.row(boundary_set[r]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matching);
  out.singular_values = svd.singularValues();
  const double top = out.singular_values.size() > 0 ? out.singular_values.maxCoeff() : 0.0;
  out.threshold = 1e-6 * top;
  int rank = 0;
  double smallest_kept = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
    const double s = out.singular_values[i];
    if (s >= out.threshold && s > 0.0) {
      ++rank;
      smallest_kept = std::min(smallest_kept, s);
    }
  }
  if (rank > 0 && smallest_kept < 10.0 * out.threshold) {
    std::ostringstream msg;
    msg << "smallest kept singular value " << smallest_kept << " is within 10x of threshold "
        << out.threshold;
    throw Error(ErrorCode::kIllConditionedMatching, msg.str());
  }
  out.count = out.free_modes - rank;
  return out;
}

}  // namespace acyl::cylinder
