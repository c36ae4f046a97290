#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace acyl::testing {

Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, double tol, int max_sweeps) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= tol * std::max(1.0, a.norm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd d = a.diagonal();
  std::sort(d.data(), d.data() + d.size());
  return d;
}

std::map<double, int> lattice_levels(const Eigen::Matrix2d& basis, double cutoff) {
  const Eigen::Matrix2d dual = 2.0 * M_PI * basis.inverse().transpose();
  const int reach = 60;
  std::vector<double> values;
  for (int a = -reach; a <= reach; ++a) {
    for (int b = -reach; b <= reach; ++b) {
      const double v = (dual * Eigen::Vector2d(a, b)).squaredNorm();
      if (v <= cutoff) values.push_back(v);
    }
  }
  std::sort(values.begin(), values.end());
  std::map<double, int> out;
  double key = -1.0;
  for (double v : values) {
    if (key < 0.0 || std::abs(v - key) > 1e-9 * std::max(1.0, key)) key = v;
    out[key] += 1;
  }
  return out;
}

Eigen::Vector4d quaternion_product(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

double random_in_gap(const std::vector<double>& roots, int gap, double radius, double margin,
                     double unit) {
  const double lo = gap == 0 ? -radius : roots[gap - 1] + margin;
  const double hi = gap == static_cast<int>(roots.size()) ? radius : roots[gap] - margin;
  return lo + unit * (hi - lo);
}

}  // namespace acyl::testing
