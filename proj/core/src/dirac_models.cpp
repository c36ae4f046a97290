#include "acyl/dirac_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acyl/error.hpp"

namespace acyl::dirac {

Eigen::Matrix4d quaternion_i() {
  Eigen::Matrix4d m;
  m << 0, -1, 0, 0,
       1, 0, 0, 0,
       0, 0, 0, -1,
       0, 0, 1, 0;
  return m;
}

Eigen::Matrix4d quaternion_j() {
  Eigen::Matrix4d m;
  m << 0, 0, -1, 0,
       0, 0, 0, 1,
       1, 0, 0, 0,
       0, -1, 0, 0;
  return m;
}

Eigen::Matrix4d quaternion_k() {
  Eigen::Matrix4d m;
  m << 0, 0, 0, -1,
       0, 0, -1, 0,
       0, 1, 0, 0,
       1, 0, 0, 0;
  return m;
}

DiracModel build_torus_model(const dec::FlatTorus& torus, double cutoff) {
  const std::vector<dec::Wavevector> pairs = dec::half_dual_lattice(torus, cutoff);
  const int modes = 1 + 2 * static_cast<int>(pairs.size());
  const int dim = 4 * modes;
  const double area = torus.area();
  const Eigen::Matrix4d i1 = quaternion_i();
  const Eigen::Matrix4d i2 = quaternion_j();
  const Eigen::Matrix4d i3 = quaternion_k();

  DiracModel model;
  model.kind = ModelKind::kTorus;
  model.fiber_dim = 4;
  model.area = area;
  model.completeness_radius = std::sqrt(cutoff);
  std::ostringstream label;
  label << "torus(cutoff=" << cutoff << ")";
  model.label = label.str();

  // L^2 Gram matrix of the basis {1, cos(k.x), sin(k.x), ...} times Id_4.
  model.mass = Eigen::VectorXd::Constant(dim, 0.5 * area);
  model.mass.head(4).setConstant(area);

  model.dirac = Eigen::MatrixXd::Zero(dim, dim);
  model.complex_structure = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < modes; ++m) model.complex_structure.block<4, 4>(4 * m, 4 * m) = i3;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const int c = 4 * (1 + 2 * static_cast<int>(p));  // cos block
    const int s = c + 4;                              // sin block
    const Eigen::Matrix4d q = pairs[p].k.x() * i1 + pairs[p].k.y() * i2;
    // d/dx cos(k.x) = -k sin(k.x), d/dx sin(k.x) = k cos(k.x).
    model.dirac.block<4, 4>(s, c) = -q;
    model.dirac.block<4, 4>(c, s) = q;
  }
  return model;
}

Eigen::VectorXd torus_constant_section(const DiracModel& model, const Eigen::Vector4d& v) {
  if (model.kind != ModelKind::kTorus) {
    throw Error(ErrorCode::kInvalidArgument, "constant sections are defined for torus models");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(model.dim());
  out.head<4>() = v;
  return out;
}

SlOperator sl_operator(const dec::CochainComplex& cc) {
  const int n0 = cc.n0;
  const int n2 = cc.n2;
  const int n1 = cc.n1;
  const Eigen::VectorXd inv0 = cc.star0.cwiseInverse();
  const Eigen::VectorXd inv1 = cc.star1.cwiseInverse();
  const SparseMatrix codiff = inv0.asDiagonal() * SparseMatrix(cc.d0.transpose()) *
                              cc.star1.asDiagonal();              // d0*: 1-forms -> 0-forms
  const SparseMatrix star_d = cc.star2.asDiagonal() * cc.d1;      // 1-forms -> dual 0-forms
  const SparseMatrix star_d_adj = inv1.asDiagonal() * SparseMatrix(cc.d1.transpose());

  std::vector<Eigen::Triplet<double>> entries;
  auto append = [&entries](const SparseMatrix& block, int row0, int col0) {
    for (int k = 0; k < block.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(block, k); it; ++it) {
        entries.emplace_back(row0 + it.row(), col0 + it.col(), it.value());
      }
    }
  };
  append(codiff, 0, n0 + n2);
  append(star_d, n0, n0 + n2);
  append(cc.d0, n0 + n2, 0);
  append(star_d_adj, n0 + n2, n0);

  SlOperator op;
  const int dim = n0 + n2 + n1;
  op.dirac.resize(dim, dim);
  op.dirac.setFromTriplets(entries.begin(), entries.end());
  op.mass.resize(dim);
  op.mass << cc.star0, cc.star2.cwiseInverse(), cc.star1;
  op.layout = {n0, n2, n1, cc.genus, 0.0};
  return op;
}

double sl_square_residual(const dec::CochainComplex& cc) {
  const SlOperator op = sl_operator(cc);
  const SymmetricOperator l0 = dec::laplacian0(cc);
  const SymmetricOperator l0d = dec::dual_laplacian0(cc);
  const SymmetricOperator l1 = dec::laplacian1(cc);
  std::vector<Eigen::Triplet<double>> entries;
  auto append = [&entries](const SparseMatrix& block, int offset) {
    for (int k = 0; k < block.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(block, k); it; ++it) {
        entries.emplace_back(offset + it.row(), offset + it.col(), it.value());
      }
    }
  };
  append(l0.matrix, 0);
  append(l0d.matrix, cc.n0);
  append(l1.matrix, cc.n0 + cc.n2);
  SparseMatrix blocks(op.dirac.rows(), op.dirac.cols());
  blocks.setFromTriplets(entries.begin(), entries.end());
  const SparseMatrix square = op.dirac * op.dirac;
  return max_abs(SparseMatrix(square - blocks));
}

namespace {

// Skew matrix W_ab = sum_T (h_a ^ h_b)(T) over the columns of `forms`, using
// the antisymmetrized cup product. Exact for constant forms on flat triangles.
Eigen::MatrixXd wedge_matrix(const dec::CochainComplex& cc, const Eigen::MatrixXd& forms) {
  const Eigen::Index h = forms.cols();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(h, h);
  for (int t = 0; t < cc.n2; ++t) {
    const auto& e = cc.boundary_edges[t];
    const auto& s = cc.boundary_signs[t];
    const Eigen::RowVectorXd first = s[0] * forms.row(e[0]);
    const Eigen::RowVectorXd second = s[1] * forms.row(e[1]);
    w.noalias() += 0.5 * (first.transpose() * second - second.transpose() * first);
  }
  return w;
}

// Columns spanning the eigenvalues flagged by the gap rule, and the rest.
struct SplitEigensystem {
  Eigen::MatrixXd kernel;
  Eigen::MatrixXd range;
  Eigen::VectorXd range_values;
};

SplitEigensystem split_kernel(const SymmetricOperator& op) {
  const MassEigensystem es = mass_eigensystem(Eigen::MatrixXd(op.matrix), op.mass);
  const int k = kernel_dimension_by_gap(es.values);
  SplitEigensystem out;
  out.kernel = es.vectors.leftCols(k);
  out.range = es.vectors.rightCols(es.values.size() - k);
  out.range_values = es.values.tail(es.values.size() - k);
  return out;
}

}  // namespace

DiracModel build_sl_model(const dec::CochainComplex& cc) {
  const SlOperator op = sl_operator(cc);
  const int n0 = cc.n0;
  const int n2 = cc.n2;
  const int n1 = cc.n1;
  const int even = n0 + n2;
  const int dim = even + n1;

  const SplitEigensystem primal = split_kernel(dec::laplacian0(cc));
  const SplitEigensystem dual = split_kernel(dec::dual_laplacian0(cc));
  const SplitEigensystem forms = split_kernel(dec::laplacian1(cc));
  if (primal.kernel.cols() != dual.kernel.cols()) {
    throw Error(ErrorCode::kConvergenceFailure,
                "primal and dual 0-form kernels differ in dimension");
  }
  if (forms.kernel.cols() % 2 != 0) {
    throw Error(ErrorCode::kOddKernelDimension, "harmonic 1-forms have odd dimension");
  }

  // Partner 1-forms o = D e / sqrt(lambda) of the even eigenvectors e.
  const SparseMatrix star_d_adj =
      cc.star1.cwiseInverse().asDiagonal() * SparseMatrix(cc.d1.transpose());
  const Eigen::MatrixXd o_primal =
      (cc.d0 * primal.range) * primal.range_values.cwiseSqrt().cwiseInverse().asDiagonal();
  const Eigen::MatrixXd o_dual =
      (star_d_adj * dual.range) * dual.range_values.cwiseSqrt().cwiseInverse().asDiagonal();

  // J e = -o and J o = e on each pair, written as blocks of J in the
  // (even | odd) splitting: J_even,odd = E O^T M1, J_odd,even = -O E^T M_even.
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
  const Eigen::VectorXd m1 = cc.star1;
  const Eigen::VectorXd m_dual = cc.star2.cwiseInverse();
  j.block(0, even, n0, n1) = primal.range * (o_primal.transpose() * m1.asDiagonal());
  j.block(n0, even, n2, n1) = dual.range * (o_dual.transpose() * m1.asDiagonal());
  j.block(even, 0, n1, n0) = -o_primal * (primal.range.transpose() * cc.star0.asDiagonal());
  j.block(even, n0, n1, n2) = -o_dual * (dual.range.transpose() * m_dual.asDiagonal());

  // Kernel: (f, g) -> (g, -f) on locally constant 0-forms; -* on harmonic
  // 1-forms after polar correction.
  j.block(0, n0, n0, n2) += primal.kernel * (dual.kernel.transpose() * m_dual.asDiagonal());
  j.block(n0, 0, n2, n0) -= dual.kernel * (primal.kernel.transpose() * cc.star0.asDiagonal());

  double correction = 0.0;
  if (forms.kernel.cols() > 0) {
    const Eigen::MatrixXd rotation = wedge_matrix(cc, forms.kernel).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() <= 1e-8 * svd.singularValues().maxCoeff()) {
      throw Error(ErrorCode::kConvergenceFailure, "wedge pairing on harmonic forms is degenerate");
    }
    const Eigen::MatrixXd nearest = svd.matrixU() * svd.matrixV().transpose();
    correction = max_abs(Eigen::MatrixXd(rotation - nearest));
    j.block(even, even, n1, n1) -=
        forms.kernel * nearest * (forms.kernel.transpose() * m1.asDiagonal());
  }

  DiracModel model;
  model.kind = ModelKind::kSpecialLagrangian;
  std::ostringstream label;
  label << "sl(genus=" << cc.genus << ",n0=" << n0 << ",n1=" << n1 << ",n2=" << n2 << ")";
  model.label = label.str();
  model.mass = op.mass;
  model.dirac = Eigen::MatrixXd(op.dirac);
  model.complex_structure = std::move(j);
  model.area = cc.total_area();
  model.sl = op.layout;
  model.sl->hodge_correction = correction;
  return model;
}

DiracModel synthetic_model(const std::vector<std::pair<double, int>>& clusters) {
  std::vector<std::pair<double, int>> sorted = clusters;
  std::sort(sorted.begin(), sorted.end());
  int dim = 0;
  for (const auto& [lambda, mult] : sorted) {
    if (mult <= 0) throw Error(ErrorCode::kInvalidArgument, "multiplicities must be positive");
    dim += mult;
    const auto mirror = std::find_if(sorted.begin(), sorted.end(), [&](const auto& c) {
      return std::abs(c.first + lambda) <= 1e-12 * std::max(1.0, std::abs(lambda));
    });
    if (mirror == sorted.end() || mirror->second != mult) {
      throw Error(ErrorCode::kInvalidArgument, "synthetic clusters must satisfy d(l) = d(-l)");
    }
    if (lambda == 0.0 && mult % 2 != 0) {
      throw Error(ErrorCode::kOddKernelDimension, "kernel multiplicity must be even");
    }
  }
  DiracModel model;
  model.kind = ModelKind::kSynthetic;
  model.label = "synthetic";
  model.mass = Eigen::VectorXd::Ones(dim);
  Eigen::VectorXd lambdas(dim);
  std::vector<int> start;
  int pos = 0;
  for (const auto& [lambda, mult] : sorted) {
    start.push_back(pos);
    lambdas.segment(pos, mult).setConstant(lambda);
    pos += mult;
  }
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t c = 0; c < sorted.size(); ++c) {
    const double lambda = sorted[c].first;
    const int mult = sorted[c].second;
    if (lambda > 0.0) {
      const std::size_t m = sorted.size() - 1 - c;  // mirror cluster
      for (int r = 0; r < mult; ++r) {
        const int plus = start[c] + r;
        const int minus = start[m] + r;
        j(minus, plus) = 1.0;   // J e+ = e-
        j(plus, minus) = -1.0;  // J e- = -e+
      }
    } else if (lambda == 0.0) {
      for (int r = 0; r < mult; r += 2) {
        j(start[c] + r + 1, start[c] + r) = 1.0;
        j(start[c] + r, start[c] + r + 1) = -1.0;
      }
    }
  }
  model.complex_structure = j;
  // A = J D with J^2 = -1 gives D = -J A.
  model.dirac = -j * lambdas.asDiagonal();
  return model;
}

ModelDiagnostics check_model(const DiracModel& model) {
  ModelDiagnostics diag;
  const Eigen::Index n = model.dim();
  const auto m = model.mass.asDiagonal();
  const Eigen::MatrixXd& d = model.dirac;
  const Eigen::MatrixXd& j = model.complex_structure;
  const Eigen::MatrixXd md = m * d;
  diag.self_adjoint = max_abs(Eigen::MatrixXd(md - md.transpose()));
  diag.j_square = max_abs(Eigen::MatrixXd(j * j + Eigen::MatrixXd::Identity(n, n)));
  diag.j_orthogonal =
      max_abs(Eigen::MatrixXd(j.transpose() * m * j - Eigen::MatrixXd(model.mass.asDiagonal())));
  diag.anticommutation = max_abs(Eigen::MatrixXd(d * j + j * d));
  const Eigen::MatrixXd ma = m * (j * d);
  diag.a_self_adjoint = max_abs(Eigen::MatrixXd(ma - ma.transpose()));
  diag.passed = diag.self_adjoint <= 1e-10 && diag.j_square <= 1e-12 &&
                diag.j_orthogonal <= 1e-10 && diag.anticommutation <= 1e-10 &&
                diag.a_self_adjoint <= 1e-10;
  return diag;
}

}  // namespace acyl::dirac
