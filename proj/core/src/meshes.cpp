#include "acyl/meshes.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "acyl/error.hpp"

namespace acyl::dec {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

TriangulatedSurface grid_torus(const FlatTorus& torus, int n, GridPattern pattern) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "grid torus needs N >= 2");
  const bool skewed = pattern == GridPattern::kSkewed;
  if (skewed && n % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "skewed grid torus needs even N");
  }
  const Eigen::Matrix2d& b = torus.basis();
  std::vector<Eigen::Vector3d> positions(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = (skewed ? i + 0.5 * j : i) / static_cast<double>(n);
      const double y = j / static_cast<double>(n);
      const Eigen::Vector2d p = b * Eigen::Vector2d(x, y);
      positions[j * n + i] = Eigen::Vector3d(p.x(), p.y(), 0.0);
    }
  }
  // Unwrapped index (I, J) -> vertex id and lattice shift.
  auto wrap = [&](int ii, int jj, LatticeShift& shift) {
    const int q = floor_div(jj, n);
    const int jw = jj - q * n;
    const int i2 = ii + (skewed ? q * (n / 2) : 0);
    const int p = floor_div(i2, n);
    const int iw = i2 - p * n;
    shift = {p, q};
    return jw * n + iw;
  };
  std::vector<Triangle> triangles;
  std::vector<std::array<LatticeShift, 3>> shifts;
  triangles.reserve(2 * positions.size());
  shifts.reserve(2 * positions.size());
  const std::array<std::array<std::array<int, 2>, 3>, 2> cells = {{
      {{{0, 0}, {1, 0}, {0, 1}}},
      {{{1, 0}, {1, 1}, {0, 1}}},
  }};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      for (const auto& cell : cells) {
        Triangle tri;
        std::array<LatticeShift, 3> sh;
        for (int c = 0; c < 3; ++c) tri[c] = wrap(i + cell[c][0], j + cell[c][1], sh[c]);
        triangles.push_back(tri);
        shifts.push_back(sh);
      }
    }
  }
  PeriodicFrame frame{Eigen::Vector3d(b(0, 0), b(1, 0), 0.0), Eigen::Vector3d(b(0, 1), b(1, 1), 0.0)};
  return TriangulatedSurface(std::move(positions), std::move(triangles), frame, std::move(shifts));
}

TriangulatedSurface polycube_surface(const std::vector<Voxel>& voxels) {
  const std::set<Voxel> solid(voxels.begin(), voxels.end());
  std::map<Voxel, int> vertex_ids;
  std::vector<Eigen::Vector3d> positions;
  std::vector<Triangle> triangles;
  auto vertex = [&](const Voxel& p) {
    auto [it, inserted] = vertex_ids.try_emplace(p, static_cast<int>(positions.size()));
    if (inserted) positions.emplace_back(p[0], p[1], p[2]);
    return it->second;
  };
  for (const Voxel& v : solid) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int side : {-1, 1}) {
        Voxel neighbor = v;
        neighbor[axis] += side;
        if (solid.count(neighbor) != 0) continue;
        const int b = (axis + 1) % 3;
        const int c = (axis + 2) % 3;
        Voxel base = v;
        if (side > 0) base[axis] += 1;
        Voxel p1 = base, p2 = base, p3 = base;
        p1[b] += 1;
        p2[b] += 1;
        p2[c] += 1;
        p3[c] += 1;
        std::array<int, 4> quad = {vertex(base), vertex(p1), vertex(p2), vertex(p3)};
        if (side < 0) std::swap(quad[1], quad[3]);
        triangles.push_back({quad[0], quad[1], quad[2]});
        triangles.push_back({quad[0], quad[2], quad[3]});
      }
    }
  }
  return TriangulatedSurface(std::move(positions), std::move(triangles));
}

TriangulatedSurface genus2_polycube() {
  std::vector<Voxel> voxels;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 5; ++y) {
      if (x == 1 && (y == 1 || y == 3)) continue;
      voxels.push_back({x, y, 0});
    }
  }
  return polycube_surface(voxels);
}

TriangulatedSurface genus1_polycube() {
  std::vector<Voxel> voxels;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      if (x == 1 && y == 1) continue;
      voxels.push_back({x, y, 0});
    }
  }
  return polycube_surface(voxels);
}

namespace {

// Next non-empty line with '#' comments stripped.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void parse_failure(const std::string& what) {
  throw Error(ErrorCode::kParseError, "OFF: " + what);
}

}  // namespace

TriangulatedSurface read_off(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) parse_failure("empty input");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") parse_failure("missing OFF header");
  if (!next_content_line(in, line)) parse_failure("missing counts line");
  std::istringstream counts(line);
  long nv = -1, nf = -1, ne = 0;
  counts >> nv >> nf;
  if (!counts || nv <= 0 || nf <= 0) parse_failure("bad counts line");
  counts >> ne;
  std::vector<Eigen::Vector3d> positions;
  positions.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line)) parse_failure("truncated vertex list");
    std::istringstream row(line);
    double x, y, z;
    if (!(row >> x >> y >> z)) parse_failure("bad vertex line " + std::to_string(i));
    positions.emplace_back(x, y, z);
  }
  std::vector<Triangle> triangles;
  triangles.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    if (!next_content_line(in, line)) parse_failure("truncated face list");
    std::istringstream row(line);
    int count = 0;
    Triangle t;
    if (!(row >> count >> t[0] >> t[1] >> t[2]) || count != 3) {
      parse_failure("face " + std::to_string(f) + " is not a triangle");
    }
    triangles.push_back(t);
  }
  return TriangulatedSurface(std::move(positions), std::move(triangles));
}

TriangulatedSurface read_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open mesh file " + path.string());
  return read_off(in);
}

void write_off(std::ostream& out, const TriangulatedSurface& surface) {
  if (surface.periodic()) {
    throw Error(ErrorCode::kInvalidArgument, "periodic meshes have no OFF embedding");
  }
  out << "OFF\n"
      << surface.vertex_count() << ' ' << surface.triangle_count() << ' ' << surface.edge_count()
      << '\n';
  for (const Eigen::Vector3d& p : surface.positions()) {
    out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  for (const Triangle& t : surface.triangles()) {
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

}  // namespace acyl::dec
