#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace lcdm {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::int32_t, 3>> triangles;
};

// Minimum accepted triangle area (mm^2); smaller is rejected as degenerate.
inline constexpr double kMinTriangleArea = 1e-12;

// Throws SemanticError on empty mesh, out-of-range indices, or degenerate
// triangles.
void validate_mesh(const TriangleMesh& mesh);

// Closest point on triangle (a, b, c) to p (vertex/edge/face regions).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c);

// Exhaustive reference: min distance from p to any triangle of the mesh.
double distance_to_surface_brute(const Vec3& p, const TriangleMesh& mesh);

// AABB BVH over triangles: longest-axis median split, <= 4 triangles/leaf.
// Queries prune by node box distance and must agree with the brute-force
// reference to within 1e-9 relative.
class MeshAccel {
 public:
  explicit MeshAccel(const TriangleMesh& mesh);  // validates the mesh
  double distance(const Vec3& p) const;

 private:
  struct Node {
    Vec3 bmin, bmax;
    std::int32_t left = -1, right = -1;  // internal children
    std::int32_t first = 0, count = 0;   // leaf triangle range
  };
  std::int32_t build(std::int32_t first, std::int32_t count,
                     std::vector<Vec3>& centroids);

  const TriangleMesh& mesh_;
  std::vector<std::int32_t> tri_order_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

// ============================================================================
// Labeled voxel grid -> signed distance map
// ============================================================================
enum class VoxelLabel : std::uint8_t { BACKGROUND, GM, WM, CSF };
const char* voxel_label_name(VoxelLabel l);

struct LabeledVoxelGrid {
  Vec3 origin;
  double spacing = 1.0;                // isotropic voxel edge h (mm)
  std::array<std::int32_t, 3> dims{};  // nx, ny, nz
  std::vector<VoxelLabel> labels;      // dense, linear index i + nx*(j + ny*k)

  std::size_t linear(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(k));
  }
  // Voxel centroid: origin + (index + 0.5) * spacing per axis.
  Vec3 centroid(int i, int j, int k) const {
    return {origin.x + (i + 0.5) * spacing, origin.y + (j + 0.5) * spacing,
            origin.z + (k + 0.5) * spacing};
  }
};
void validate(const LabeledVoxelGrid& grid);  // throws SemanticError

struct LcdmRow {
  std::int32_t i = 0, j = 0, k = 0;
  VoxelLabel label = VoxelLabel::BACKGROUND;
  double signed_distance = 0.0;  // GM/CSF >= 0, WM <= 0 (mm)
};

struct LcdmResult {
  std::vector<LcdmRow> rows;          // ascending linear voxel index
  std::vector<double> gm_distances;   // GM rows only, same order
};

// Distance of every non-background voxel centroid to the surface, signed by
// label (WM negative). Deterministic for any thread count (0 = hardware).
LcdmResult compute_lcdm(const LabeledVoxelGrid& grid, const TriangleMesh& mesh,
                        int threads = 0);

}  // namespace lcdm
