// Point-to-triangle projection, brute-force and BVH surface distance,
// and the labeled-grid signed distance map.

#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lcdm/errors.hpp"
#include "lcdm/geometry.hpp"
#include "lcdm/rng.hpp"

using namespace lcdm;

namespace {

double dist(const Vec3& a, const Vec3& b) { return std::sqrt(norm2(a - b)); }

TriangleMesh unit_square_at_z0() {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

TriangleMesh big_plane_at_z0() {
  TriangleMesh m;
  m.vertices = {{-100, -100, 0}, {100, -100, 0}, {100, 100, 0}, {-100, 100, 0}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

TriangleMesh random_mesh(std::uint64_t stream, int n_triangles) {
  RngStream rng(2024, stream);
  TriangleMesh m;
  for (int t = 0; t < n_triangles; ++t) {
    const auto base = static_cast<std::int32_t>(m.vertices.size());
    for (int v = 0; v < 3; ++v) {
      m.vertices.push_back(
          {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)});
    }
    m.triangles.push_back({base, base + 1, base + 2});
  }
  return m;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("closest point on a triangle: face, edge, and vertex regions") {
  const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
  // Interior projection onto the face.
  Vec3 q = closest_point_on_triangle({0.25, 0.25, 1.0}, a, b, c);
  CHECK(dist(q, {0.25, 0.25, 0}) < 1e-14);
  // Vertex regions.
  q = closest_point_on_triangle({-1, -1, 0}, a, b, c);
  CHECK(dist(q, a) < 1e-14);
  q = closest_point_on_triangle({2, -1, 0}, a, b, c);
  CHECK(dist(q, b) < 1e-14);
  q = closest_point_on_triangle({-1, 2, 0}, a, b, c);
  CHECK(dist(q, c) < 1e-14);
  // Edge ab region.
  q = closest_point_on_triangle({0.5, -1, 2}, a, b, c);
  CHECK(dist(q, {0.5, 0, 0}) < 1e-14);
  // Hypotenuse region.
  q = closest_point_on_triangle({1, 1, 0}, a, b, c);
  CHECK(dist(q, {0.5, 0.5, 0}) < 1e-14);
}

TEST_CASE("closest point agrees with dense barycentric sampling") {
  RngStream rng(8, 0);
  for (int trial = 0; trial < 3; ++trial) {
    const Vec3 a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec3 b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec3 c{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec3 p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double exact = dist(p, closest_point_on_triangle(p, a, b, c));
    const int m = 200;
    double sampled = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j + i <= m; ++j) {
        const double s = static_cast<double>(i) / m;
        const double t = static_cast<double>(j) / m;
        const Vec3 x = a + (b - a) * s + (c - a) * t;
        sampled = std::min(sampled, dist(p, x));
      }
    }
    // The exact distance can never exceed any sampled surface point, and the
    // sample grid is fine enough to come within one cell of the projection.
    CHECK(exact <= sampled + 1e-12);
    const double cell = (dist(a, b) + dist(a, c)) / m;
    CHECK(sampled - exact <= cell);
  }
}

TEST_CASE("brute-force distance to a flat square") {
  const TriangleMesh m = unit_square_at_z0();
  CHECK(distance_to_surface_brute({0.5, 0.5, 0.75}, m) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(distance_to_surface_brute({0.5, 0.5, -0.75}, m) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(distance_to_surface_brute({2.0, 0.5, 0.0}, m) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(distance_to_surface_brute({0.25, 0.75, 0.0}, m) == 0.0);
}

TEST_CASE("bvh distance equals closest-point distance for one triangle") {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}};
  const MeshAccel accel(m);
  RngStream rng(3, 0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double direct =
        dist(p, closest_point_on_triangle(p, m.vertices[0], m.vertices[1],
                                          m.vertices[2]));
    CHECK(accel.distance(p) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("bvh agrees with the brute-force reference on random meshes") {
  for (std::uint64_t mesh_id = 0; mesh_id < 5; ++mesh_id) {
    const TriangleMesh m = random_mesh(mesh_id, 80);
    const MeshAccel accel(m);
    RngStream rng(404, mesh_id);
    for (int q = 0; q < 300; ++q) {
      const Vec3 p{rng.uniform(-8, 8), rng.uniform(-8, 8),
                   rng.uniform(-8, 8)};
      const double brute = distance_to_surface_brute(p, m);
      const double fast = accel.distance(p);
      CHECK(std::fabs(fast - brute) <=
            1e-9 * std::max(1.0, std::fabs(brute)));
    }
  }
}

TEST_CASE("mesh validation rejects malformed input") {
  TriangleMesh empty;
  CHECK_THROWS_AS(validate_mesh(empty), SemanticError);

  TriangleMesh no_faces;
  no_faces.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  CHECK_THROWS_AS(validate_mesh(no_faces), SemanticError);

  TriangleMesh out_of_range;
  out_of_range.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  out_of_range.triangles = {{0, 1, 3}};
  CHECK_THROWS_AS(validate_mesh(out_of_range), SemanticError);

  TriangleMesh degenerate;  // two coincident vertices: zero area
  degenerate.vertices = {{0, 0, 0}, {0, 0, 0}, {0, 1, 0}};
  degenerate.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(validate_mesh(degenerate), SemanticError);
  CHECK_THROWS_AS(MeshAccel{degenerate}, SemanticError);

  CHECK_NOTHROW(validate_mesh(unit_square_at_z0()));
}

TEST_CASE("grid validation and index helpers") {
  LabeledVoxelGrid g;
  g.origin = {0, 0, 0};
  g.spacing = 0.5;
  g.dims = {2, 3, 4};
  g.labels.assign(2 * 3 * 4, VoxelLabel::BACKGROUND);
  CHECK_NOTHROW(validate(g));
  CHECK(g.linear(1, 2, 3) == 1 + 2 * (2 + 3 * 3));
  const Vec3 c = g.centroid(1, 0, 2);
  CHECK(c.x == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(c.y == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c.z == doctest::Approx(1.25).epsilon(1e-15));

  LabeledVoxelGrid bad = g;
  bad.spacing = 0.0;
  CHECK_THROWS_AS(validate(bad), SemanticError);
  bad = g;
  bad.dims = {0, 3, 4};
  CHECK_THROWS_AS(validate(bad), SemanticError);
  bad = g;
  bad.labels.pop_back();
  CHECK_THROWS_AS(validate(bad), SemanticError);
}

TEST_CASE("signed distance map over a flat boundary plane") {
  const TriangleMesh mesh = big_plane_at_z0();
  LabeledVoxelGrid grid;
  grid.origin = {-2, -2, -3};
  grid.spacing = 0.5;
  grid.dims = {8, 8, 12};
  grid.labels.assign(8 * 8 * 12, VoxelLabel::BACKGROUND);
  for (int k = 0; k < 12; ++k) {
    for (int j = 0; j < 8; ++j) {
      for (int i = 0; i < 8; ++i) {
        const double zc = grid.centroid(i, j, k).z;
        grid.labels[grid.linear(i, j, k)] =
            zc < 0.0 ? VoxelLabel::WM : VoxelLabel::GM;
      }
    }
  }
  const LcdmResult out = compute_lcdm(grid, mesh, 2);
  REQUIRE(out.rows.size() == 8 * 8 * 12);
  std::size_t prev_index = 0;
  std::size_t gm_rows = 0;
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    const LcdmRow& row = out.rows[r];
    const std::size_t lin = grid.linear(row.i, row.j, row.k);
    if (r > 0) CHECK(lin > prev_index);  // ascending linear order
    prev_index = lin;
    // The labels split exactly at z = 0, so the signed distance is the
    // centroid's z coordinate itself: |zc| with the label's sign.
    const double zc = grid.centroid(row.i, row.j, row.k).z;
    CHECK(row.signed_distance == doctest::Approx(zc).epsilon(1e-12));
    if (row.label == VoxelLabel::GM) {
      CHECK(row.signed_distance > 0.0);
      CHECK(out.gm_distances[gm_rows] == row.signed_distance);
      ++gm_rows;
    } else {
      CHECK(row.label == VoxelLabel::WM);
      CHECK(row.signed_distance < 0.0);
    }
  }
  CHECK(out.gm_distances.size() == gm_rows);
  CHECK(gm_rows == 8 * 8 * 6);  // half the slab is above the plane

  // Determinism across thread counts.
  const LcdmResult t1 = compute_lcdm(grid, mesh, 1);
  const LcdmResult t3 = compute_lcdm(grid, mesh, 3);
  REQUIRE(t1.rows.size() == t3.rows.size());
  for (std::size_t r = 0; r < t1.rows.size(); ++r) {
    CHECK(t1.rows[r].signed_distance == t3.rows[r].signed_distance);
  }
  CHECK(t1.gm_distances == t3.gm_distances);
}

TEST_CASE("single-voxel maps: sign tracks the label") {
  const TriangleMesh mesh = unit_square_at_z0();
  LabeledVoxelGrid grid;
  grid.origin = {0, 0, 0.5};
  grid.spacing = 0.5;
  grid.dims = {1, 1, 1};
  grid.labels = {VoxelLabel::GM};  // centroid (0.25, 0.25, 0.75)
  LcdmResult out = compute_lcdm(grid, mesh, 1);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].signed_distance == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(out.gm_distances == std::vector<double>{out.rows[0].signed_distance});

  grid.labels = {VoxelLabel::WM};
  out = compute_lcdm(grid, mesh, 1);
  CHECK(out.rows[0].signed_distance == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(out.gm_distances.empty());

  grid.labels = {VoxelLabel::CSF};  // non-GM but outside: positive
  out = compute_lcdm(grid, mesh, 1);
  CHECK(out.rows[0].signed_distance == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(out.gm_distances.empty());

  grid.labels = {VoxelLabel::BACKGROUND};  // skipped entirely
  out = compute_lcdm(grid, mesh, 1);
  CHECK(out.rows.empty());
  CHECK(out.gm_distances.empty());
}

TEST_CASE("voxel label names") {
  CHECK(voxel_label_name(VoxelLabel::GM) == std::string("GM"));
  CHECK(voxel_label_name(VoxelLabel::WM) == std::string("WM"));
  CHECK(voxel_label_name(VoxelLabel::CSF) == std::string("CSF"));
  CHECK(voxel_label_name(VoxelLabel::BACKGROUND) == std::string("BACKGROUND"));
}

}  // TEST_SUITE("geometry")
