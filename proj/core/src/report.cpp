#include "acyl/report.hpp"

#include <cmath>
#include <iomanip>

namespace acyl::report {

namespace {

Json roots_json(const std::vector<index::Root>& roots) {
  Json out = Json::array();
  for (const auto& r : roots) out.push_back({{"lambda", r.lambda}, {"multiplicity", r.multiplicity}});
  return out;
}

Json contributions_json(const std::vector<index::EndContribution>& per_end) {
  Json out = Json::array();
  for (const auto& c : per_end) {
    out.push_back({{"end_id", c.end_id},
                   {"contribution", c.contribution},
                   {"crossed_roots", roots_json(c.crossed_roots)}});
  }
  return out;
}

Json finite(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

}  // namespace

Json to_json(const spectral::Cluster& c) {
  return {{"lambda", c.lambda}, {"multiplicity", c.multiplicity}};
}

Json to_json(const spectral::Spectrum& s) {
  Json clusters = Json::array();
  for (const auto& c : s.clusters) clusters.push_back(to_json(c));
  return {{"dim", s.dim()},
          {"cluster_tol", s.cluster_tol},
          {"completeness_radius", finite(s.completeness_radius)},
          {"kernel_multiplicity", s.kernel_multiplicity()},
          {"clusters", clusters}};
}

Json to_json(const index::IndexReport& r) {
  return {{"rates", r.rates},
          {"index", r.index},
          {"per_end", contributions_json(r.per_end)},
          {"formula_tag", r.formula_tag}};
}

Json to_json(const index::WallCrossing& w) {
  return {{"jump", w.jump}, {"per_end", contributions_json(w.crossed)}};
}

Json to_json(const dirac::ModelDiagnostics& d) {
  return {{"self_adjoint", d.self_adjoint},
          {"j_square", d.j_square},
          {"j_orthogonal", d.j_orthogonal},
          {"anticommutation", d.anticommutation},
          {"a_self_adjoint", d.a_self_adjoint},
          {"passed", d.passed}};
}

Json to_json(const cylinder::KernelCount& k) {
  std::vector<double> sv(k.singular_values.data(), k.singular_values.data() + k.singular_values.size());
  return {{"count", k.count},
          {"free_modes", k.free_modes},
          {"boundary_set", k.boundary_set},
          {"singular_values", sv},
          {"threshold", k.threshold}};
}

std::string dump(const Json& j) { return j.dump(2); }

void write_spectrum_csv(std::ostream& out, const spectral::Spectrum& s) {
  out << "index,eigenvalue\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < s.dim(); ++i) out << i << ',' << s.eigenvalues[i] << '\n';
}

void write_modes_csv(std::ostream& out, const Eigen::MatrixXd& modes, const cylinder::TimeGrid& grid) {
  out << 't';
  for (Eigen::Index j = 0; j < modes.rows(); ++j) out << ",u_" << j;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index n = 0; n < modes.cols(); ++n) {
    out << grid.time(static_cast<int>(n));
    for (Eigen::Index j = 0; j < modes.rows(); ++j) out << ',' << modes(j, n);
    out << '\n';
  }
}

void print_cluster_table(std::ostream& out, const std::vector<spectral::Cluster>& clusters) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setw(16) << "lambda" << std::setw(14) << "multiplicity" << '\n';
  out << std::setprecision(6);
  for (const auto& c : clusters) {
    const double shown = std::abs(c.lambda) < 5e-13 ? 0.0 : c.lambda;
    out << std::setw(16) << shown << std::setw(14) << c.multiplicity << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace acyl::report
