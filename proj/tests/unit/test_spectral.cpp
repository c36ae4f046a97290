#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "acyl/dirac_models.hpp"
#include "acyl/error.hpp"
#include "acyl/meshes.hpp"
#include "acyl/spectral.hpp"
#include "oracles.hpp"

namespace acyl::spectral {
namespace {

const dec::FlatTorus kTorus = dec::FlatTorus::square(2.0 * std::numbers::pi);

std::vector<std::pair<double, int>> summary(const Spectrum& s) {
  std::vector<std::pair<double, int>> out;
  for (const auto& c : s.clusters) out.emplace_back(c.lambda, c.multiplicity);
  return out;
}

TEST(Eigendecompose, TorusClustersAtCutoffOneAndAHalf) {
  const Spectrum s = eigendecompose(dirac::build_torus_model(kTorus, 1.5));
  const auto c = summary(s);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0].first, -1.0, 1e-12);
  EXPECT_EQ(c[0].second, 8);
  EXPECT_NEAR(c[1].first, 0.0, 1e-12);
  EXPECT_EQ(c[1].second, 4);
  EXPECT_NEAR(c[2].first, 1.0, 1e-12);
  EXPECT_EQ(c[2].second, 8);
}

TEST(Eigendecompose, ZeroOperatorIsOneCluster) {
  dirac::DiracModel m = dirac::build_torus_model(kTorus, 0.5);
  const Spectrum s = eigendecompose(m);
  ASSERT_EQ(s.clusters.size(), 1u);
  EXPECT_EQ(s.clusters[0].multiplicity, 4);
  EXPECT_EQ(s.kernel_multiplicity(), 4);
}

TEST(Eigendecompose, ResidualsAndOrthonormality) {
  const auto m = dirac::build_sl_model(dec::build_dec(dec::genus1_polycube()));
  const Spectrum s = eigendecompose(m);
  EXPECT_LE(eigen_residual(m, s), 1e-8);
  EXPECT_LE(orthonormality_residual(s), 1e-8);
  EXPECT_EQ(s.kernel_multiplicity(), 4);
  int total = 0;
  for (const auto& c : s.clusters) total += c.multiplicity;
  EXPECT_EQ(total, s.dim());
}

TEST(Eigendecompose, AgreesWithJacobiOracle) {
  const auto m = dirac::build_torus_model(kTorus, 5.0);
  const Spectrum s = eigendecompose(m);
  const Eigen::MatrixXd a = m.a_operator();  // identity-proportional mass per block
  const Eigen::VectorXd sq = m.mass.cwiseSqrt();
  Eigen::MatrixXd sym = sq.asDiagonal() * a * sq.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  EXPECT_LE((testing::jacobi_eigenvalues(sym) - s.eigenvalues).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Eigendecompose, TorusMultiplicityLaw) {
  const double cutoff = 13.0;
  const Spectrum s = eigendecompose(dirac::build_torus_model(kTorus, cutoff));
  const auto oracle = testing::lattice_levels(kTorus.basis(), cutoff);
  for (const auto& [value, mult] : oracle) {
    const double root = std::sqrt(value);
    const auto plus = s.find(root);
    const auto minus = s.find(-root);
    ASSERT_TRUE(plus && minus) << value;
    if (value == 0.0) {
      EXPECT_EQ(plus->multiplicity, 4);
    } else {
      EXPECT_EQ(plus->multiplicity, 2 * mult);
      EXPECT_EQ(minus->multiplicity, 2 * mult);
    }
  }
  EXPECT_EQ(s.clusters.size(), 2 * oracle.size() - 1);
}

TEST(IndicialRoots, WindowSelection) {
  const Spectrum s = eigendecompose(dirac::build_torus_model(kTorus, 2.5));
  EXPECT_EQ(indicial_roots(s, -1.2, 1.2).size(), 3u);
  EXPECT_EQ(indicial_roots(s, -1.5, 1.5).size(), 5u);
  EXPECT_TRUE(indicial_roots(s, 0.1, 0.2).empty());
  try {
    indicial_roots(s, -2.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWindowExceedsCutoff);
  }
}

TEST(IndicialRoots, SlKernelWindow) {
  const auto m = dirac::build_sl_model(dec::build_dec(dec::genus2_polycube()));
  const auto roots = indicial_roots(eigendecompose(m), -1e-6, 1e-6);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_EQ(roots[0].multiplicity, 6);
}

TEST(HomogeneousKernel, ConstantSectionsAndReflection) {
  const auto m = dirac::build_torus_model(kTorus, 2.5);
  const Spectrum s = eigendecompose(m);
  const Eigen::MatrixXd v0 = homogeneous_kernel(s, 0.0);
  ASSERT_EQ(v0.cols(), 4);
  // Supported on the constant Fourier block.
  EXPECT_LE(max_abs(Eigen::MatrixXd(v0.bottomRows(m.dim() - 4))), 1e-10);
  EXPECT_EQ(homogeneous_kernel(s, 0.5).cols(), 0);
  const Eigen::MatrixXd jv = m.complex_structure * homogeneous_kernel(s, 1.0);
  const Eigen::VectorXd angles = principal_angles(jv, homogeneous_kernel(s, -1.0), s.mass);
  EXPECT_LE(angles.maxCoeff(), 1e-6);
  EXPECT_LE(reflection_defect(m, s), 1e-6);
}

TEST(PrincipalAngles, OrthogonalPlanes) {
  const Eigen::MatrixXd u = Eigen::MatrixXd::Identity(4, 2);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 2);
  v(2, 0) = v(3, 1) = 1.0;
  const Eigen::VectorXd a = principal_angles(u, v, Eigen::VectorXd::Ones(4));
  EXPECT_NEAR(a[0], std::numbers::pi / 2, 1e-12);
}

TEST(FromClusters, SyntheticSpectrum) {
  const Spectrum s = Spectrum::from_clusters({{1.0, 3}, {-1.0, 3}, {0.0, 2}});
  EXPECT_EQ(s.dim(), 8);
  EXPECT_EQ(s.clusters.size(), 3u);
  EXPECT_EQ(s.kernel_multiplicity(), 2);
}

TEST(Clustering, ChainsMergeNearbyValues) {
  Eigen::VectorXd v(5);
  v << 0.0, 0.4, 0.8, 2.0, 2.05;
  const auto c = cluster_eigenvalues(v, 0.5);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].multiplicity, 3);
  EXPECT_EQ(c[1].begin, 3);
}

}  // namespace
}  // namespace acyl::spectral
