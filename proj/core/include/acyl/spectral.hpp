#pragma once

// Spectra of A = J D with respect to the mass inner product, clustered into
// indicial roots with multiplicities.

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "acyl/dirac_models.hpp"

namespace acyl::spectral {

/// Eigenvalues [begin, end) of the ascending list, averaged to `lambda`.
struct Cluster {
  double lambda = 0.0;
  int multiplicity = 0;
  int begin = 0;
  int end = 0;
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // M-orthonormal columns
  Eigen::VectorXd mass;
  std::vector<Cluster> clusters;
  double cluster_tol = 0.0;
  double completeness_radius = std::numeric_limits<double>::infinity();

  Eigen::Index dim() const { return eigenvalues.size(); }
  double spectral_radius() const;
  /// Multiplicity of the cluster at 0 (0 when 0 is not a root).
  int kernel_multiplicity() const;
  /// Cluster whose centre lies within cluster_tol of lambda.
  std::optional<Cluster> find(double lambda) const;

  /// Diagonal spectrum with identity mass and standard-basis eigenvectors.
  static Spectrum from_clusters(const std::vector<std::pair<double, int>>& clusters,
                                double completeness_radius =
                                    std::numeric_limits<double>::infinity());
};

/// Consecutive eigenvalues closer than tol are chained into one cluster.
std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXd& ascending, double tol);

/// Full eigensystem of A = J D. cluster_tol defaults to 1e-6 * spectral radius.
Spectrum eigendecompose(const dirac::DiracModel& model,
                        std::optional<double> cluster_tol = std::nullopt);

/// max over pairs of |A v - lambda v|_M.
double eigen_residual(const dirac::DiracModel& model, const Spectrum& spectrum);

/// max |V^T M V - I|.
double orthonormality_residual(const Spectrum& spectrum);

/// Clusters with lambda in [lo, hi]. Throws kWindowExceedsCutoff when the
/// window leaves the completeness radius.
std::vector<Cluster> indicial_roots(const Spectrum& spectrum, double lo, double hi);

/// M-orthonormal basis of V_lambda (empty when lambda is not a root).
Eigen::MatrixXd homogeneous_kernel(const Spectrum& spectrum, double lambda);

/// Principal angles (radians, ascending) between the spans of two
/// M-orthonormal bases of equal dimension.
Eigen::VectorXd principal_angles(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                                 const Eigen::VectorXd& mass);

/// Largest principal angle between J V_lambda and V_{-lambda}, over all
/// clusters; also fails (returns +inf) when d_lambda != d_{-lambda}.
double reflection_defect(const dirac::DiracModel& model, const Spectrum& spectrum);

}  // namespace acyl::spectral
