#include <sstream>

#include <gtest/gtest.h>

#include "acyl/error.hpp"
#include "acyl/meshes.hpp"

namespace acyl::dec {
namespace {

TEST(OffFormat, RoundTripsPolycube) {
  const TriangulatedSurface s = genus2_polycube();
  std::stringstream buffer;
  write_off(buffer, s);
  const TriangulatedSurface back = read_off(buffer);
  EXPECT_EQ(back.vertex_count(), s.vertex_count());
  EXPECT_EQ(back.triangle_count(), s.triangle_count());
  EXPECT_EQ(back.genus(), 2);
}

TEST(OffFormat, AcceptsCommentsAndBlankLines) {
  std::istringstream in(
      "OFF\n# tetrahedron\n4 4 6\n\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
      "3 0 2 1\n3 0 1 3\n3 1 2 3\n3 2 0 3\n");
  EXPECT_EQ(read_off(in).genus(), 0);
}

TEST(OffFormat, ReportsParseErrors) {
  for (const char* text : {"", "PLY\n", "OFF\n2\n", "OFF\n3 1 0\n0 0 0\n1 0 0\n",
                           "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n"}) {
    std::istringstream in(text);
    try {
      read_off(in);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
    }
  }
}

TEST(OffFormat, MissingFileIsConfigError) {
  try {
    read_off(std::filesystem::path("/nonexistent/mesh.off"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
}

TEST(GridTorus, SkewedPatternNeedsEvenResolution) {
  EXPECT_THROW(grid_torus(FlatTorus::square(1.0), 5), Error);
  EXPECT_NO_THROW(grid_torus(FlatTorus::square(1.0), 5, GridPattern::kDiagonal));
}

TEST(GridTorus, PeriodicMeshHasNoEmbedding) {
  std::ostringstream out;
  EXPECT_THROW(write_off(out, grid_torus(FlatTorus::square(1.0), 4)), Error);
}

}  // namespace
}  // namespace acyl::dec
