#include "lcdm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "lcdm/errors.hpp"

namespace lcdm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * std::sqrt(norm2(cross(b - a, c - a)));
}

// Squared distance from p to axis-aligned box [bmin, bmax].
double aabb_dist2(const Vec3& p, const Vec3& bmin, const Vec3& bmax) {
  auto axis = [](double v, double lo, double hi) {
    const double d = v < lo ? lo - v : (v > hi ? v - hi : 0.0);
    return d * d;
  };
  return axis(p.x, bmin.x, bmax.x) + axis(p.y, bmin.y, bmax.y) +
         axis(p.z, bmin.z, bmax.z);
}

int hardware_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

void validate_mesh(const TriangleMesh& mesh) {
  if (mesh.vertices.empty() || mesh.triangles.empty()) {
    throw SemanticError("mesh: needs at least one vertex and one triangle");
  }
  const auto nv = static_cast<std::int32_t>(mesh.vertices.size());
  for (const auto& t : mesh.triangles) {
    for (int c = 0; c < 3; ++c) {
      if (t[c] < 0 || t[c] >= nv) {
        throw SemanticError("mesh: triangle index out of range");
      }
    }
    const double area =
        tri_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    if (!(area >= kMinTriangleArea)) {
      throw SemanticError("mesh: degenerate triangle (area < 1e-12 mm^2)");
    }
  }
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c) {
  // Voronoi-region walk: vertex, edge, then face region.
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return a + ab * v;
  }

  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return a + ac * w;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + (c - b) * w;
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return a + ab * v + ac * w;
}

double distance_to_surface_brute(const Vec3& p, const TriangleMesh& mesh) {
  double best2 = kInf;
  for (const auto& t : mesh.triangles) {
    const Vec3 q = closest_point_on_triangle(
        p, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    best2 = std::min(best2, norm2(p - q));
  }
  return std::sqrt(best2);
}

MeshAccel::MeshAccel(const TriangleMesh& mesh) : mesh_(mesh) {
  validate_mesh(mesh);
  const auto n = static_cast<std::int32_t>(mesh.triangles.size());
  tri_order_.resize(n);
  for (std::int32_t i = 0; i < n; ++i) tri_order_[i] = i;
  std::vector<Vec3> centroids(n);
  for (std::int32_t i = 0; i < n; ++i) {
    const auto& t = mesh.triangles[i];
    centroids[i] = (mesh.vertices[t[0]] + mesh.vertices[t[1]] +
                    mesh.vertices[t[2]]) *
                   (1.0 / 3.0);
  }
  nodes_.reserve(static_cast<std::size_t>(2 * n));
  root_ = build(0, n, centroids);
}

std::int32_t MeshAccel::build(std::int32_t first, std::int32_t count,
                              std::vector<Vec3>& centroids) {
  Node node;
  node.bmin = {kInf, kInf, kInf};
  node.bmax = {-kInf, -kInf, -kInf};
  for (std::int32_t i = first; i < first + count; ++i) {
    const auto& t = mesh_.triangles[tri_order_[i]];
    for (int c = 0; c < 3; ++c) {
      const Vec3& v = mesh_.vertices[t[c]];
      node.bmin = {std::min(node.bmin.x, v.x), std::min(node.bmin.y, v.y),
                   std::min(node.bmin.z, v.z)};
      node.bmax = {std::max(node.bmax.x, v.x), std::max(node.bmax.y, v.y),
                   std::max(node.bmax.z, v.z)};
    }
  }

  constexpr std::int32_t kLeafSize = 4;
  if (count <= kLeafSize) {
    node.first = first;
    node.count = count;
    nodes_.push_back(node);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  // Longest axis of the centroid bounds, median split.
  Vec3 cmin{kInf, kInf, kInf}, cmax{-kInf, -kInf, -kInf};
  for (std::int32_t i = first; i < first + count; ++i) {
    const Vec3& c = centroids[tri_order_[i]];
    cmin = {std::min(cmin.x, c.x), std::min(cmin.y, c.y), std::min(cmin.z, c.z)};
    cmax = {std::max(cmax.x, c.x), std::max(cmax.y, c.y), std::max(cmax.z, c.z)};
  }
  const Vec3 ext = cmax - cmin;
  int axis = 0;
  if (ext.y > ext.x) axis = 1;
  if (ext.z > (axis == 0 ? ext.x : ext.y)) axis = 2;
  auto key = [&](std::int32_t tri) {
    const Vec3& c = centroids[tri];
    return axis == 0 ? c.x : (axis == 1 ? c.y : c.z);
  };

  const std::int32_t mid = count / 2;
  std::nth_element(tri_order_.begin() + first, tri_order_.begin() + first + mid,
                   tri_order_.begin() + first + count,
                   [&](std::int32_t l, std::int32_t r) {
                     return key(l) != key(r) ? key(l) < key(r) : l < r;
                   });

  const std::int32_t left = build(first, mid, centroids);
  const std::int32_t right = build(first + mid, count - mid, centroids);
  node.left = left;
  node.right = right;
  nodes_.push_back(node);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

double MeshAccel::distance(const Vec3& p) const {
  double best2 = kInf;
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = root_;
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    if (aabb_dist2(p, node.bmin, node.bmax) >= best2) continue;
    if (node.left < 0) {  // leaf
      for (std::int32_t i = node.first; i < node.first + node.count; ++i) {
        const auto& t = mesh_.triangles[tri_order_[i]];
        const Vec3 q = closest_point_on_triangle(
            p, mesh_.vertices[t[0]], mesh_.vertices[t[1]], mesh_.vertices[t[2]]);
        best2 = std::min(best2, norm2(p - q));
      }
      continue;
    }
    // Visit the nearer child first: push the farther one deeper in the stack.
    const Node& l = nodes_[static_cast<std::size_t>(node.left)];
    const Node& r = nodes_[static_cast<std::size_t>(node.right)];
    const double dl = aabb_dist2(p, l.bmin, l.bmax);
    const double dr = aabb_dist2(p, r.bmin, r.bmax);
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return std::sqrt(best2);
}

void validate(const LabeledVoxelGrid& grid) {
  if (!(grid.spacing > 0.0)) {
    throw SemanticError("grid: spacing must be positive");
  }
  for (int d : grid.dims) {
    if (d <= 0) throw SemanticError("grid: dims must be positive");
  }
  const std::size_t expect = static_cast<std::size_t>(grid.dims[0]) *
                             static_cast<std::size_t>(grid.dims[1]) *
                             static_cast<std::size_t>(grid.dims[2]);
  if (grid.labels.size() != expect) {
    throw SemanticError("grid: label array does not match dims");
  }
}

const char* voxel_label_name(VoxelLabel l) {
  switch (l) {
    case VoxelLabel::BACKGROUND: return "BACKGROUND";
    case VoxelLabel::GM: return "GM";
    case VoxelLabel::WM: return "WM";
    case VoxelLabel::CSF: return "CSF";
  }
  return "?";
}

LcdmResult compute_lcdm(const LabeledVoxelGrid& grid, const TriangleMesh& mesh,
                        int threads) {
  validate(grid);
  const MeshAccel accel(mesh);

  // Collect foreground voxels in ascending linear index order.
  std::vector<LcdmRow> rows;
  for (std::int32_t k = 0; k < grid.dims[2]; ++k) {
    for (std::int32_t j = 0; j < grid.dims[1]; ++j) {
      for (std::int32_t i = 0; i < grid.dims[0]; ++i) {
        const VoxelLabel label = grid.labels[grid.linear(i, j, k)];
        if (label == VoxelLabel::BACKGROUND) continue;
        rows.push_back({i, j, k, label, 0.0});
      }
    }
  }

  const int n_threads =
      std::min(hardware_threads(threads),
               std::max(1, static_cast<int>(rows.size())));
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      LcdmRow& row = rows[idx];
      const double d = accel.distance(grid.centroid(row.i, row.j, row.k));
      row.signed_distance = row.label == VoxelLabel::WM ? -d : d;
    }
  };
  if (n_threads <= 1 || rows.size() < 2) {
    worker(0, rows.size());
  } else {
    std::vector<std::thread> ts;
    const std::size_t chunk =
        (rows.size() + static_cast<std::size_t>(n_threads) - 1) /
        static_cast<std::size_t>(n_threads);
    for (int t = 0; t < n_threads; ++t) {
      const std::size_t begin = static_cast<std::size_t>(t) * chunk;
      const std::size_t end = std::min(rows.size(), begin + chunk);
      if (begin >= end) break;
      ts.emplace_back(worker, begin, end);
    }
    for (auto& t : ts) t.join();
  }

  LcdmResult out;
  out.rows = std::move(rows);
  for (const auto& r : out.rows) {
    if (r.label == VoxelLabel::GM) out.gm_distances.push_back(r.signed_distance);
  }
  return out;
}

}  // namespace lcdm
