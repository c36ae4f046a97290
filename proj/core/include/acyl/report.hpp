#pragma once

// JSON and CSV renderings of the library records.

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "acyl/cylinder.hpp"
#include "acyl/dirac_models.hpp"
#include "acyl/index_calculus.hpp"
#include "acyl/spectral.hpp"

namespace acyl::report {

using Json = nlohmann::ordered_json;

Json to_json(const spectral::Cluster& c);
Json to_json(const spectral::Spectrum& s);
Json to_json(const index::IndexReport& r);
Json to_json(const index::WallCrossing& w);
Json to_json(const dirac::ModelDiagnostics& d);
Json to_json(const cylinder::KernelCount& k);

/// Serializes with shortest round-trip floats (at most 17 significant digits).
std::string dump(const Json& j);

/// Rows "index,eigenvalue" at 17 significant digits.
void write_spectrum_csv(std::ostream& out, const spectral::Spectrum& s);

/// Rows "t,u_0,...,u_{n-1}".
void write_modes_csv(std::ostream& out, const Eigen::MatrixXd& modes, const cylinder::TimeGrid& grid);

/// Fixed-width table of clusters with 6 significant digits.
void print_cluster_table(std::ostream& out, const std::vector<spectral::Cluster>& clusters);

}  // namespace acyl::report
