#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "acyl/dec.hpp"

namespace acyl::dec {

enum class GridPattern {
  kSkewed,    // vertex (i, j) at ((i + j/2)/N, j/N) in lattice coordinates; acute on square tori
  kDiagonal,  // vertex (i, j) at (i/N, j/N); each cell cut along a diagonal
};

/// N x N periodic grid on a flat torus: N^2 vertices, 3N^2 edges, 2N^2 triangles.
/// The skewed pattern needs even N.
TriangulatedSurface grid_torus(const FlatTorus& torus, int n,
                               GridPattern pattern = GridPattern::kSkewed);

using Voxel = std::array<int, 3>;

/// Boundary of a union of unit cubes, each square face split into two
/// triangles, oriented by the outward normal.
TriangulatedSurface polycube_surface(const std::vector<Voxel>& voxels);

/// 3 x 5 x 1 slab with two square tunnels (genus 2).
TriangulatedSurface genus2_polycube();
/// 3 x 3 x 1 ring around one tunnel (genus 1).
TriangulatedSurface genus1_polycube();

/// ASCII OFF: "OFF", "nv nf ne", vertex lines, face lines "3 a b c".
/// Throws kParseError on malformed input; topology errors propagate.
TriangulatedSurface read_off(std::istream& in);
TriangulatedSurface read_off(const std::filesystem::path& path);
void write_off(std::ostream& out, const TriangulatedSurface& surface);

}  // namespace acyl::dec
