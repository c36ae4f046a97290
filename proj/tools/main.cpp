#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acyl/cylinder.hpp"
#include "acyl/dec.hpp"
#include "acyl/dirac_models.hpp"
#include "acyl/error.hpp"
#include "acyl/index_calculus.hpp"
#include "acyl/meshes.hpp"
#include "acyl/report.hpp"
#include "acyl/spectral.hpp"
#include "config.hpp"

namespace {

using namespace acyl;
using report::Json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCriticalRate:
    case ErrorCode::kCriticalWeight:
      return 4;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kConfigError:
    case ErrorCode::kParseError:
    case ErrorCode::kNonManifoldEdge:
    case ErrorCode::kNonOrientable:
    case ErrorCode::kDegenerateTriangle:
    case ErrorCode::kDegenerateLattice:
    case ErrorCode::kNotOrdered:
    case ErrorCode::kNonNegativeRate:
      return 2;
    default:
      return 3;
  }
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigError, what + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kConfigError, what + " is empty");
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

struct ModelOptions {
  std::string torus = "6.283185307179586,0,0,6.283185307179586";
  std::string mesh;
  int grid = 0;
  std::string model;
  double cutoff = 5.0;

  void attach(CLI::App* app, double default_cutoff) {
    cutoff = default_cutoff;
    app->add_option("--torus", torus, "Lattice basis b00,b01,b10,b11 (row-major)")->capture_default_str();
    app->add_option("--mesh", mesh, "OFF mesh for the special Lagrangian model");
    app->add_option("--grid", grid, "Grid torus resolution N for the special Lagrangian model");
    app->add_option("--model", model, "torus | sl (default: sl when --mesh/--grid is given)")
        ->check(CLI::IsMember({"torus", "sl"}));
    app->add_option("--cutoff", cutoff, "Fourier cutoff |k|^2 for torus models")->capture_default_str();
  }

  dec::FlatTorus lattice() const {
    const std::vector<double> b = parse_reals(torus, "--torus");
    if (b.size() != 4) throw Error(ErrorCode::kConfigError, "--torus needs four reals");
    return dec::FlatTorus::from_row_major({b[0], b[1], b[2], b[3]});
  }

  dirac::DiracModel sl_from(const std::string& mesh_path, int resolution) const {
    if (!mesh_path.empty()) {
      if (!std::filesystem::exists(mesh_path)) {
        throw Error(ErrorCode::kConfigError, "mesh file not found: " + mesh_path);
      }
      return dirac::build_sl_model(dec::build_dec(dec::read_off(std::filesystem::path(mesh_path))));
    }
    if (resolution > 0) return dirac::build_sl_model(dec::build_dec(dec::grid_torus(lattice(), resolution)));
    throw Error(ErrorCode::kConfigError, "the sl model needs --mesh or --grid");
  }

  dirac::DiracModel build() const {
    const std::string kind = !model.empty() ? model : (!mesh.empty() || grid > 0 ? "sl" : "torus");
    if (kind == "sl") return sl_from(mesh, grid);
    if (!(cutoff > 0.0)) throw Error(ErrorCode::kConfigError, "--cutoff must be positive");
    return dirac::build_torus_model(lattice(), cutoff);
  }

  /// End tokens: torus | sl | sl:PATH | grid:N.
  index::EndSystem ends(const std::string& tokens) const {
    index::EndSystem out;
    for (const std::string& token : split(tokens)) {
      dirac::DiracModel m;
      if (token == "torus") {
        m = dirac::build_torus_model(lattice(), cutoff);
      } else if (token == "sl") {
        m = sl_from(mesh, grid);
      } else if (token.rfind("sl:", 0) == 0) {
        m = sl_from(token.substr(3), 0);
      } else if (token.rfind("grid:", 0) == 0) {
        m = sl_from("", static_cast<int>(parse_reals(token.substr(5), "grid resolution")[0]));
      } else {
        throw Error(ErrorCode::kConfigError, "unknown end '" + token + "' (torus, sl, sl:PATH, grid:N)");
      }
      out.ends.push_back(spectral::eigendecompose(m));
    }
    if (out.ends.empty()) throw Error(ErrorCode::kConfigError, "--ends is empty");
    return out;
  }
};

std::string fmt6(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << (std::abs(x) < 5e-13 ? 0.0 : x);
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + path.string());
  body(out);
}

std::filesystem::path output_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

// ---- spectrum / indicial -------------------------------------------------

int cmd_spectrum(const ModelOptions& opts, const std::string& out_dir, bool json) {
  const dirac::DiracModel m = opts.build();
  const dirac::ModelDiagnostics diag = dirac::check_model(m);
  const spectral::Spectrum s = spectral::eigendecompose(m);
  if (!out_dir.empty()) {
    const auto dir = output_dir(out_dir);
    write_file(dir / "spectrum.csv", [&](std::ostream& o) { report::write_spectrum_csv(o, s); });
    write_file(dir / "clusters.csv", [&](std::ostream& o) {
      o << "lambda,multiplicity\n" << std::setprecision(17);
      for (const auto& c : s.clusters) o << c.lambda << ',' << c.multiplicity << '\n';
    });
  }
  if (json) {
    Json j = {{"model", m.label}, {"dim", m.dim()}, {"diagnostics", report::to_json(diag)},
              {"spectrum", report::to_json(s)}};
    std::cout << report::dump(j) << '\n';
  } else {
    std::cout << "model " << m.label << "  dim " << m.dim() << "  diagnostics "
              << (diag.passed ? "pass" : "FAIL") << '\n';
    report::print_cluster_table(std::cout, s.clusters);
  }
  return diag.passed ? 0 : 3;
}

int cmd_indicial(const ModelOptions& opts, const std::string& window, bool json) {
  const std::vector<double> w = parse_reals(window, "--window");
  if (w.size() != 2) throw Error(ErrorCode::kConfigError, "--window needs lo,hi");
  const spectral::Spectrum s = spectral::eigendecompose(opts.build());
  const auto roots = spectral::indicial_roots(s, w[0], w[1]);
  if (json) {
    Json list = Json::array();
    for (const auto& c : roots) list.push_back(report::to_json(c));
    std::cout << report::dump(Json{{"window", w}, {"roots", list}}) << '\n';
  } else {
    report::print_cluster_table(std::cout, roots);
  }
  return 0;
}

// ---- index / wallcross ----------------------------------------------------

void print_index_table(const index::IndexReport& r) {
  std::cout << std::setw(6) << "end" << std::setw(12) << "rate" << std::setw(14) << "contribution"
            << "  crossed roots\n";
  for (const auto& c : r.per_end) {
    std::cout << std::setw(6) << c.end_id << std::setw(12) << fmt6(r.rates[c.end_id]) << std::setw(14)
              << c.contribution << "  ";
    for (const auto& root : c.crossed_roots) std::cout << fmt6(root.lambda) << "(x" << root.multiplicity << ") ";
    std::cout << '\n';
  }
  std::cout << "index: " << r.index << '\n';
}

int cmd_index(const ModelOptions& opts, const std::string& ends_text, const std::string& rates_text) {
  const index::EndSystem ends = opts.ends(ends_text);
  const index::RateVector rates = parse_reals(rates_text, "--rates");
  const index::IndexReport r = index::fredholm_index(rates, ends);
  print_index_table(r);
  Json j = report::to_json(r);
  bool all_negative = true;
  for (double x : rates) all_negative = all_negative && x < 0.0;
  const int varying = index::varying_moduli_vdim(ends);
  if (all_negative) {
    const int fixed = index::fixed_moduli_vdim(rates, ends);
    std::cout << "fixed: " << fixed << "  (virtual dimension, fixed asymptotic cross-section)\n";
    j["fixed_moduli_vdim"] = fixed;
  } else {
    std::cout << "fixed: n/a  (needs every rate negative)\n";
    j["fixed_moduli_vdim"] = nullptr;
  }
  std::cout << "varying: " << std::showpos << varying << std::noshowpos
            << "  (virtual dimension, varying asymptotic cross-section)\n";
  j["varying_moduli_vdim"] = varying;
  std::cout << report::dump(j) << '\n';
  return 0;
}

int cmd_wallcross(const ModelOptions& opts, const std::string& ends_text, const std::string& from,
                  const std::string& to) {
  const index::EndSystem ends = opts.ends(ends_text);
  const index::RateVector r1 = parse_reals(from, "--from");
  const index::RateVector r2 = parse_reals(to, "--to");
  const index::WallCrossing w = index::wall_crossing(r1, r2, ends);
  const int before = index::fredholm_index(r1, ends).index;
  std::cout << "index " << before << " -> " << before + w.jump << "  jump " << w.jump << '\n';
  Json j = report::to_json(w);
  j["from"] = r1;
  j["to"] = r2;
  j["index_from"] = before;
  j["index_to"] = before + w.jump;
  std::cout << report::dump(j) << '\n';
  return 0;
}

// ---- cylinder -------------------------------------------------------------

int cmd_cylinder_solve(const ModelOptions& opts, double weight, double length, double h, double rate,
                       const std::string& out_dir) {
  const dirac::DiracModel m = opts.build();
  const spectral::Spectrum s = spectral::eigendecompose(m);
  const cylinder::CylinderOperator op(m, s);
  const auto grid = cylinder::TimeGrid::with_length(length, h);
  int mode = -1;
  for (Eigen::Index j = 0; j < op.modes(); ++j) {
    if (std::abs(op.lambdas()[j] - rate) <= s.cluster_tol) {
      mode = static_cast<int>(j);
      break;
    }
  }
  if (mode < 0) throw Error(ErrorCode::kConfigError, "no mode with eigenvalue " + fmt6(rate));
  // Manufactured solution u*(t) = e^{-t} sin(t) in one mode.
  Eigen::MatrixXd exact = Eigen::MatrixXd::Zero(op.modes(), grid.samples());
  Eigen::MatrixXd derivative = exact;
  for (int n = 0; n < grid.samples(); ++n) {
    const double t = grid.time(n);
    exact(mode, n) = std::exp(-t) * std::sin(t);
    derivative(mode, n) = std::exp(-t) * (std::cos(t) - std::sin(t));
  }
  const Eigen::MatrixXd rhs = op.j_modes() * derivative + op.d_modes() * exact;
  const cylinder::CylinderSolution sol = cylinder::solve_cylinder(op, rhs, grid, weight);
  const double error = cylinder::weighted_sup(Eigen::MatrixXd(sol.modes - exact), grid, weight) /
                       cylinder::weighted_sup(exact, grid, weight);
  if (!out_dir.empty()) {
    write_file(output_dir(out_dir) / "modes.csv",
               [&](std::ostream& o) { report::write_modes_csv(o, sol.modes, grid); });
  }
  Json j = {{"model", m.label}, {"weight", weight}, {"T", grid.length()}, {"h", grid.h},
            {"mode", mode}, {"mode_eigenvalue", op.lambdas()[mode]}, {"residual", sol.residual},
            {"weighted_sup", sol.weighted_sup}, {"weighted_relative_error", error}};
  std::cout << report::dump(j) << '\n';
  return 0;
}

int cmd_kernel_count(const ModelOptions& opts, double weight, double eps, double mu, std::uint64_t seed,
                     const std::string& boundary, double length, double h) {
  const dirac::DiracModel m = opts.build();
  const spectral::Spectrum s = spectral::eigendecompose(m);
  cylinder::CylinderOperator op(m, s);
  if (eps > 0.0) op = op.with_perturbation(eps, mu, seed);
  std::vector<int> set;
  if (boundary == "negative") {
    set = cylinder::negative_modes(op);
  } else if (boundary != "none") {
    for (double x : parse_reals(boundary, "--boundary")) set.push_back(static_cast<int>(x));
  }
  const auto grid = cylinder::TimeGrid::with_length(length, h);
  const cylinder::KernelCount k = cylinder::perturbed_kernel_count(op, weight, set, grid);
  std::cout << "count: " << k.count << "  (weight " << fmt6(weight) << ", boundary set " << boundary
            << ", " << set.size() << " modes)\n";
  Json j = report::to_json(k);
  j["model"] = m.label;
  j["weight"] = weight;
  j["epsilon"] = eps;
  j["mu"] = mu;
  j["seed"] = seed;
  j["T"] = grid.length();
  j["h"] = grid.h;
  std::cout << report::dump(j) << '\n';
  return 0;
}

// ---- reproduce ------------------------------------------------------------

struct Checker {
  int failures = 0;
  void operator()(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    if (!ok) ++failures;
  }
};

int reproduce_tori() {
  Checker check;
  const dec::FlatTorus torus = dec::FlatTorus::square(kTwoPi);
  const dirac::DiracModel m = dirac::build_torus_model(torus, 5.0);
  const spectral::Spectrum s = spectral::eigendecompose(m);
  check("model invariants", dirac::check_model(m).passed, "");
  check("d_0 = 4", s.kernel_multiplicity() == 4, "d_0=" + std::to_string(s.kernel_multiplicity()));
  const auto d1 = s.find(1.0);
  check("d_1 = 8", d1 && d1->multiplicity == 8, "d_1=" + std::to_string(d1 ? d1->multiplicity : 0));
  const double defect = spectral::reflection_defect(m, s);
  check("J V_l = V_-l", defect <= 1e-6, "max angle " + fmt6(defect));
  const index::EndSystem one{{s}};
  const int minus = index::fredholm_index({-0.5}, one).index;
  const int plus = index::fredholm_index({0.5}, one).index;
  check("index(-0.5) = -2", minus == -2, std::to_string(minus));
  check("index(+0.5) = +2", plus == 2, std::to_string(plus));
  const auto d_sqrt2 = s.find(std::sqrt(2.0));
  std::cout << "INFO d_sqrt2 computed=" << (d_sqrt2 ? d_sqrt2->multiplicity : 0)
            << " reference=12 (lattice normalization of the reference value unspecified)\n";
  return check.failures == 0 ? 0 : 5;
}

int reproduce_sl() {
  Checker check;
  const dec::FlatTorus torus = dec::FlatTorus::square(kTwoPi);
  const double square = dirac::sl_square_residual(dec::build_dec(dec::grid_torus(torus, 16)));
  check("D^2 = Lap0 + Lap0 + Lap1 (16x16 grid)", square <= 1e-10, "residual " + fmt6(square));
  const std::vector<std::pair<std::string, dec::TriangulatedSurface>> surfaces = {
      {"grid torus 8x8", dec::grid_torus(torus, 8)},
      {"genus-1 polycube", dec::genus1_polycube()},
      {"genus-2 polycube", dec::genus2_polycube()}};
  for (const auto& [name, surface] : surfaces) {
    const auto cc = dec::build_dec(surface);
    const dirac::DiracModel m = dirac::build_sl_model(cc);
    const spectral::Spectrum s = spectral::eigendecompose(m);
    const int expected = 2 + 2 * cc.genus;
    check(name + ": model invariants", dirac::check_model(m).passed,
          "hodge correction " + fmt6(m.sl->hodge_correction));
    check(name + ": dim ker = 2+2g", s.kernel_multiplicity() == expected,
          std::to_string(s.kernel_multiplicity()) + " vs " + std::to_string(expected));
  }
  return check.failures == 0 ? 0 : 5;
}

int cmd_reproduce(const std::string& id) {
  if (id == "tori") return reproduce_tori();
  if (id == "sl") return reproduce_sl();
  throw Error(ErrorCode::kConfigError, "unknown example '" + id + "' (tori, sl)");
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  args = cli::expand_config(args);

  CLI::App app{"Spectral toolkit for Dirac operators on cylindrical ends", "acyl"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print help");
  app.set_help_all_flag("--help-all", "Help for every command");

  ModelOptions spectrum_opts, indicial_opts, index_opts, wall_opts, solve_opts, count_opts;
  std::string out_dir, window = "-1,1", ends = "torus", rates, from, to, boundary = "negative", example;
  bool json = false;
  double weight = -0.5, length = 30.0, h = 0.01, mode_rate = 1.0, eps = 0.0, mu = -1.0;
  std::uint64_t seed = 2024;

  auto* spectrum = app.add_subcommand("spectrum", "Eigen-decomposition of A = J D with clusters");
  spectrum_opts.attach(spectrum, 5.0);
  spectrum->add_option("--out", out_dir, "Directory for spectrum.csv and clusters.csv");
  spectrum->add_flag("--json", json, "Print a JSON report instead of the table");

  auto* indicial = app.add_subcommand("indicial", "Indicial roots in a window");
  indicial_opts.attach(indicial, 5.0);
  indicial->add_option("--window", window, "lo,hi")->capture_default_str();
  indicial->add_flag("--json", json, "Print JSON");

  auto* idx = app.add_subcommand("index", "Weighted Fredholm index and moduli dimensions");
  index_opts.attach(idx, 5.0);
  idx->add_option("--ends", ends, "Comma list of ends: torus, sl, sl:PATH, grid:N")->capture_default_str();
  idx->add_option("--rates", rates, "One rate per end")->required();

  auto* wall = app.add_subcommand("wallcross", "Index jump between two ordered rate vectors");
  wall_opts.attach(wall, 5.0);
  wall->add_option("--ends", ends, "Comma list of ends")->capture_default_str();
  wall->add_option("--from", from, "Lower rate vector")->required();
  wall->add_option("--to", to, "Upper rate vector")->required();

  auto* solve = app.add_subcommand("cylinder-solve", "Manufactured-solution run of the cylinder solver");
  solve_opts.attach(solve, 1.5);
  solve->add_option("--weight", weight, "Exponential weight")->capture_default_str();
  solve->add_option("--T", length, "Cylinder length")->capture_default_str();
  solve->add_option("--h", h, "Time step")->capture_default_str();
  solve->add_option("--mode-eigenvalue", mode_rate, "Eigenvalue of the excited mode")->capture_default_str();
  solve->add_option("--out", out_dir, "Directory for modes.csv");

  auto* count = app.add_subcommand("kernel-count", "Kernel dimension of the perturbed cylinder operator");
  count_opts.attach(count, 1.5);
  count->add_option("--weight", weight, "Exponential weight")->capture_default_str();
  count->add_option("--eps", eps, "Coupling size epsilon")->capture_default_str();
  count->add_option("--mu", mu, "Coupling decay rate (< 0)")->capture_default_str();
  count->add_option("--seed", seed, "Seed of the coupling matrix")->capture_default_str();
  count->add_option("--boundary", boundary, "negative | none | comma list of mode indices")
      ->capture_default_str();
  count->add_option("--T", length, "Cylinder length")->capture_default_str();
  count->add_option("--h", h, "Time step")->capture_default_str();

  auto* repro = app.add_subcommand("reproduce", "Run a canned example and compare with expected values");
  repro->add_option("example", example, "tori | sl")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERR " << code_name(ErrorCode::kConfigError) << ": " << e.what() << '\n';
    return 2;
  }

  if (*spectrum) return cmd_spectrum(spectrum_opts, out_dir, json);
  if (*indicial) return cmd_indicial(indicial_opts, window, json);
  if (*idx) return cmd_index(index_opts, ends, rates);
  if (*wall) return cmd_wallcross(wall_opts, ends, from, to);
  if (*solve) return cmd_cylinder_solve(solve_opts, weight, length, h, mode_rate, out_dir);
  if (*count) return cmd_kernel_count(count_opts, weight, eps, mu, seed, boundary, length, h);
  return cmd_reproduce(example);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const acyl::Error& e) {
    std::cerr << "ERR " << acyl::code_name(e.code()) << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "ERR INTERNAL: " << e.what() << '\n';
    return 3;
  }
}
