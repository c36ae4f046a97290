#include "acyl/index_calculus.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "acyl/error.hpp"

namespace acyl::index {

namespace {

void check_length(const RateVector& rate, const EndSystem& ends) {
  if (ends.ends.empty()) throw Error(ErrorCode::kInvalidArgument, "end system is empty");
  if (static_cast<int>(rate.size()) != ends.size()) {
    std::ostringstream msg;
    msg << "rate vector has " << rate.size() << " entries for " << ends.size() << " ends";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

void check_window(const RateVector& rate, const EndSystem& ends) {
  for (int i = 0; i < ends.size(); ++i) {
    if (std::abs(rate[i]) > ends.ends[i].completeness_radius) {
      std::ostringstream msg;
      msg << "end " << i << ": rate " << rate[i] << " exceeds completeness radius "
          << ends.ends[i].completeness_radius;
      throw Error(ErrorCode::kWindowExceedsCutoff, msg.str());
    }
  }
}

const spectral::Cluster* nearest_root(const spectral::Spectrum& end, double rate) {
  const spectral::Cluster* best = nullptr;
  for (const auto& c : end.clusters) {
    if (!best || std::abs(c.lambda - rate) < std::abs(best->lambda - rate)) best = &c;
  }
  return best;
}

void check_noncritical(const RateVector& rate, const EndSystem& ends) {
  const std::vector<bool> critical = is_critical(rate, ends);
  for (int i = 0; i < ends.size(); ++i) {
    if (!critical[i]) continue;
    const spectral::Cluster* root = nearest_root(ends.ends[i], rate[i]);
    std::ostringstream msg;
    msg.precision(17);
    msg << "end " << i << ": rate " << rate[i] << " hits indicial root " << root->lambda
        << " (d=" << root->multiplicity << ")";
    throw Error(ErrorCode::kCriticalRate, msg.str());
  }
}

int half_kernel(const spectral::Spectrum& end, int end_id) {
  const int d0 = end.kernel_multiplicity();
  if (d0 % 2 != 0) {
    std::ostringstream msg;
    msg << "end " << end_id << ": kernel dimension " << d0 << " is odd";
    throw Error(ErrorCode::kOddKernelDimension, msg.str());
  }
  return d0 / 2;
}

int total(const std::vector<Root>& roots) {
  int sum = 0;
  for (const Root& r : roots) sum += r.multiplicity;
  return sum;
}

}  // namespace

double default_tolerance(const spectral::Spectrum& end) {
  return 1e-8 * end.spectral_radius();
}

std::vector<bool> is_critical(const RateVector& rate, const EndSystem& ends,
                              std::optional<double> tol) {
  check_length(rate, ends);
  check_window(rate, ends);
  std::vector<bool> out(ends.size(), false);
  for (int i = 0; i < ends.size(); ++i) {
    const double t = tol ? *tol : default_tolerance(ends.ends[i]);
    const spectral::Cluster* root = nearest_root(ends.ends[i], rate[i]);
    out[i] = root != nullptr && std::abs(root->lambda - rate[i]) <= t;
  }
  return out;
}

std::vector<Root> roots_between(const spectral::Spectrum& end, double a, double b) {
  std::vector<Root> out;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  for (const auto& c : end.clusters) {
    if (c.lambda > lo && c.lambda < hi) out.push_back({c.lambda, c.multiplicity});
  }
  return out;
}

IndexReport fredholm_index(const RateVector& rate, const EndSystem& ends) {
  check_length(rate, ends);
  check_noncritical(rate, ends);
  IndexReport report;
  report.rates = rate;
  report.formula_tag = "weighted index: sum_{mu_i>=0}(d0/2 + d(0,mu_i)) - sum_{mu_i<0}(d0/2 + d(mu_i,0))";
  for (int i = 0; i < ends.size(); ++i) {
    const spectral::Spectrum& end = ends.ends[i];
    EndContribution c;
    c.end_id = i;
    c.crossed_roots = roots_between(end, 0.0, rate[i]);
    const int magnitude = half_kernel(end, i) + total(c.crossed_roots);
    c.contribution = rate[i] >= 0.0 ? magnitude : -magnitude;
    report.index += c.contribution;
    report.per_end.push_back(std::move(c));
  }
  return report;
}

WallCrossing wall_crossing(const RateVector& rate1, const RateVector& rate2, const EndSystem& ends) {
  check_length(rate1, ends);
  check_length(rate2, ends);
  for (int i = 0; i < ends.size(); ++i) {
    if (!(rate1[i] < rate2[i])) {
      std::ostringstream msg;
      msg << "end " << i << ": rates must increase (" << rate1[i] << " -> " << rate2[i] << ")";
      throw Error(ErrorCode::kNotOrdered, msg.str());
    }
  }
  check_noncritical(rate1, ends);
  check_noncritical(rate2, ends);
  WallCrossing out;
  for (int i = 0; i < ends.size(); ++i) {
    EndContribution c;
    c.end_id = i;
    c.crossed_roots = roots_between(ends.ends[i], rate1[i], rate2[i]);
    c.contribution = total(c.crossed_roots);
    out.jump += c.contribution;
    out.crossed.push_back(std::move(c));
  }
  const int difference = fredholm_index(rate2, ends).index - fredholm_index(rate1, ends).index;
  if (difference != out.jump) {
    std::ostringstream msg;
    msg << "wall-crossing jump " << out.jump << " disagrees with index difference " << difference;
    throw Error(ErrorCode::kConvergenceFailure, msg.str());
  }
  return out;
}

int fixed_moduli_vdim(const RateVector& rate, const EndSystem& ends) {
  check_length(rate, ends);
  for (int i = 0; i < ends.size(); ++i) {
    if (!(rate[i] < 0.0)) {
      std::ostringstream msg;
      msg << "end " << i << ": fixed-asymptotics rate must be negative, got " << rate[i];
      throw Error(ErrorCode::kNonNegativeRate, msg.str());
    }
  }
  check_noncritical(rate, ends);
  int vdim = 0;
  for (int i = 0; i < ends.size(); ++i) {
    vdim -= half_kernel(ends.ends[i], i);
    vdim -= total(roots_between(ends.ends[i], rate[i], 0.0));
  }
  return vdim;
}

int varying_moduli_vdim(const EndSystem& ends) {
  if (ends.ends.empty()) throw Error(ErrorCode::kInvalidArgument, "end system is empty");
  int vdim = 0;
  for (int i = 0; i < ends.size(); ++i) vdim += half_kernel(ends.ends[i], i);
  return vdim;
}

int stratum_vdim(int stratum_dim, const spectral::Spectrum& end) {
  if (stratum_dim < 0) throw Error(ErrorCode::kInvalidArgument, "stratum dimension must be >= 0");
  return stratum_dim - half_kernel(end, 0);
}

namespace {

void check_in_kernel(const dirac::DiracModel& model, const Eigen::MatrixXd& basis) {
  if (basis.rows() != model.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "basis vectors have the wrong dimension");
  }
  const double scale = std::max(1.0, max_abs(model.dirac));
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const Eigen::VectorXd image = model.dirac * basis.col(c);
    const double norm = std::sqrt(basis.col(c).cwiseAbs2().dot(model.mass));
    const double image_norm = std::sqrt(image.cwiseAbs2().dot(model.mass));
    if (image_norm > 1e-8 * scale * std::max(norm, 1e-300)) {
      std::ostringstream msg;
      msg << "basis vector " << c << " is not in ker D (|D xi| = " << image_norm << ")";
      throw Error(ErrorCode::kNotInKernel, msg.str());
    }
  }
}

SymplecticKernel make_kernel(const Eigen::MatrixXd& basis, Eigen::MatrixXd form, double area) {
  SymplecticKernel sk;
  sk.basis = basis;
  sk.form = std::move(form);
  sk.gram = basis.transpose() * sk.form * basis;
  sk.area_weight = area;
  return sk;
}

}  // namespace

SymplecticKernel symplectic_form(const dirac::DiracModel& model, const Eigen::MatrixXd& basis,
                                 const Eigen::Matrix4d& fiber_pairing) {
  if (model.fiber_dim != 4) {
    throw Error(ErrorCode::kInvalidArgument, "fiber pairing needs a model with R^4 fibers");
  }
  check_in_kernel(model, basis);
  const Eigen::Index modes = model.dim() / 4;
  Eigen::MatrixXd form = Eigen::MatrixXd::Zero(model.dim(), model.dim());
  for (Eigen::Index m = 0; m < modes; ++m) {
    form.block<4, 4>(4 * m, 4 * m) = model.mass[4 * m] * fiber_pairing;
  }
  return make_kernel(basis, std::move(form), model.area);
}

SymplecticKernel symplectic_form(const dirac::DiracModel& model, const Eigen::MatrixXd& basis) {
  check_in_kernel(model, basis);
  Eigen::MatrixXd form = model.complex_structure.transpose() * model.mass.asDiagonal();
  return make_kernel(basis, std::move(form), model.area);
}

bool is_lagrangian(const Eigen::MatrixXd& subspace, const SymplecticKernel& sk, double tol) {
  if (sk.dim() % 2 != 0) {
    throw Error(ErrorCode::kOddKernelDimension, "kernel has odd dimension");
  }
  if (subspace.rows() != sk.basis.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "subspace vectors have the wrong dimension");
  }
  if (subspace.cols() == 0) return sk.dim() == 0;
  // Membership in the kernel span and linear independence.
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sk.basis);
  const Eigen::MatrixXd coords = qr.solve(subspace);
  const double scale = std::max(max_abs(subspace), 1e-300);
  if (max_abs(Eigen::MatrixXd(sk.basis * coords - subspace)) > 1e-8 * scale) {
    throw Error(ErrorCode::kNotInKernel, "subspace leaves the kernel");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.minCoeff() <= 1e-10 * s.maxCoeff()) {
    throw Error(ErrorCode::kInvalidArgument, "subspace basis is linearly dependent");
  }
  const Eigen::MatrixXd restricted = subspace.transpose() * sk.form * subspace;
  return max_abs(restricted) <= tol && 2 * subspace.cols() == sk.dim();
}

}  // namespace acyl::index
