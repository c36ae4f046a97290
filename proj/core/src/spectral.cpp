#include "acyl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acyl/error.hpp"

namespace acyl::spectral {

double Spectrum::spectral_radius() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

std::optional<Cluster> Spectrum::find(double lambda) const {
  for (const Cluster& c : clusters) {
    if (std::abs(c.lambda - lambda) <= cluster_tol) return c;
  }
  return std::nullopt;
}

int Spectrum::kernel_multiplicity() const {
  const auto zero = find(0.0);
  return zero ? zero->multiplicity : 0;
}

Spectrum Spectrum::from_clusters(const std::vector<std::pair<double, int>>& clusters,
                                 double completeness_radius) {
  std::vector<std::pair<double, int>> sorted = clusters;
  std::sort(sorted.begin(), sorted.end());
  int dim = 0;
  for (const auto& [lambda, mult] : sorted) {
    if (mult <= 0) throw Error(ErrorCode::kInvalidArgument, "multiplicities must be positive");
    dim += mult;
  }
  Spectrum s;
  s.eigenvalues.resize(dim);
  int pos = 0;
  for (const auto& [lambda, mult] : sorted) {
    s.eigenvalues.segment(pos, mult).setConstant(lambda);
    pos += mult;
  }
  s.eigenvectors = Eigen::MatrixXd::Identity(dim, dim);
  s.mass = Eigen::VectorXd::Ones(dim);
  s.cluster_tol = std::max(1e-6 * s.spectral_radius(), 1e-300);
  s.clusters = cluster_eigenvalues(s.eigenvalues, s.cluster_tol);
  if (s.clusters.size() != sorted.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cluster centres must be distinct");
  }
  s.completeness_radius = completeness_radius;
  return s;
}

std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXd& ascending, double tol) {
  std::vector<Cluster> out;
  const int n = static_cast<int>(ascending.size());
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    if (i < n && ascending[i] - ascending[i - 1] <= tol) continue;
    Cluster c;
    c.begin = begin;
    c.end = i;
    c.multiplicity = i - begin;
    c.lambda = ascending.segment(begin, i - begin).mean();
    out.push_back(c);
    begin = i;
  }
  return out;
}

Spectrum eigendecompose(const dirac::DiracModel& model, std::optional<double> cluster_tol) {
  if (cluster_tol && !(*cluster_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cluster_tol must be positive");
  }
  const MassEigensystem es = mass_eigensystem(model.a_operator(), model.mass);
  Spectrum s;
  s.eigenvalues = es.values;
  s.eigenvectors = es.vectors;
  s.mass = model.mass;
  s.cluster_tol = cluster_tol ? *cluster_tol : std::max(1e-6 * s.spectral_radius(), 1e-300);
  s.clusters = cluster_eigenvalues(s.eigenvalues, s.cluster_tol);
  s.completeness_radius = model.completeness_radius;
  return s;
}

double eigen_residual(const dirac::DiracModel& model, const Spectrum& spectrum) {
  const Eigen::MatrixXd r = model.a_operator() * spectrum.eigenvectors -
                            spectrum.eigenvectors * spectrum.eigenvalues.asDiagonal();
  const Eigen::VectorXd norms2 = (r.array().square().colwise() * spectrum.mass.array()).colwise().sum();
  return norms2.size() == 0 ? 0.0 : std::sqrt(norms2.maxCoeff());
}

double orthonormality_residual(const Spectrum& spectrum) {
  const Eigen::MatrixXd& v = spectrum.eigenvectors;
  const Eigen::MatrixXd g = v.transpose() * spectrum.mass.asDiagonal() * v;
  return max_abs(Eigen::MatrixXd(g - Eigen::MatrixXd::Identity(g.rows(), g.cols())));
}

std::vector<Cluster> indicial_roots(const Spectrum& spectrum, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::kInvalidArgument, "window needs lo < hi");
  if (std::max(std::abs(lo), std::abs(hi)) > spectrum.completeness_radius) {
    std::ostringstream msg;
    msg << "window [" << lo << ", " << hi << "] exceeds completeness radius "
        << spectrum.completeness_radius;
    throw Error(ErrorCode::kWindowExceedsCutoff, msg.str());
  }
  std::vector<Cluster> out;
  for (const Cluster& c : spectrum.clusters) {
    if (c.lambda >= lo && c.lambda <= hi) out.push_back(c);
  }
  return out;
}

Eigen::MatrixXd homogeneous_kernel(const Spectrum& spectrum, double lambda) {
  const auto c = spectrum.find(lambda);
  if (!c) return Eigen::MatrixXd(spectrum.dim(), 0);
  return spectrum.eigenvectors.middleCols(c->begin, c->multiplicity);
}

Eigen::VectorXd principal_angles(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                                 const Eigen::VectorXd& mass) {
  if (u.cols() != v.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "subspaces have different dimensions");
  }
  if (u.cols() == 0) return Eigen::VectorXd();
  const Eigen::MatrixXd cross = u.transpose() * mass.asDiagonal() * v;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
  Eigen::VectorXd angles = svd.singularValues().unaryExpr(
      [](double s) { return std::acos(std::clamp(s, -1.0, 1.0)); });
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

double reflection_defect(const dirac::DiracModel& model, const Spectrum& spectrum) {
  double worst = 0.0;
  for (const Cluster& c : spectrum.clusters) {
    const auto mirror = spectrum.find(-c.lambda);
    if (!mirror || mirror->multiplicity != c.multiplicity) {
      return std::numeric_limits<double>::infinity();
    }
    const Eigen::MatrixXd image =
        model.complex_structure * spectrum.eigenvectors.middleCols(c.begin, c.multiplicity);
    const Eigen::MatrixXd target = spectrum.eigenvectors.middleCols(mirror->begin, mirror->multiplicity);
    const Eigen::VectorXd angles = principal_angles(image, target, spectrum.mass);
    if (angles.size() > 0) worst = std::max(worst, angles.maxCoeff());
  }
  return worst;
}

}  // namespace acyl::spectral
