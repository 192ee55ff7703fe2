#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace fsi {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag : std::uint8_t { Interior = 0, Bottom = 1, Top = 2 };

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triangulation of the reference rectangle (0, L1) x (0, 1), periodic in x1.
///
/// `vertices` holds geometric vertices, including the duplicated column at
/// x1 = L1, so every triangle has an unwrapped counter-clockwise embedding.
/// `dof_vertex` maps each geometric vertex to its periodic representative;
/// all degrees of freedom live on representatives.
struct Mesh {
  double length = 0.0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> dof_vertex;
  std::vector<BoundaryTag> tags;  // per geometric vertex
  std::vector<std::array<int, 2>> periodic_pairs;  // (x1 = 0, x1 = L1)
  int num_distinct = 0;
  double h = 0.0;
  int level = 0;

  [[nodiscard]] double signed_area(int tri) const;
  [[nodiscard]] double total_area() const;
  [[nodiscard]] double diameter(int tri) const;
  [[nodiscard]] double inradius(int tri) const;
  /// Sorted x1 coordinates of the top row, without the periodic duplicate.
  [[nodiscard]] std::vector<double> top_coordinates() const;
};

/// Ordered 1D grid on the top boundary; segment i spans nodes i and
/// (i + 1) % size, closing periodically.
struct SurfaceMesh {
  double length = 0.0;
  std::vector<double> nodes;
  std::vector<int> mesh_vertex;  // dof vertex of each node
  bool periodic = true;

  [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
  [[nodiscard]] double left(int seg) const { return nodes[seg]; }
  [[nodiscard]] double right(int seg) const {
    return seg + 1 < size() ? nodes[seg + 1] : length;
  }
  [[nodiscard]] double width(int seg) const { return right(seg) - left(seg); }
  [[nodiscard]] int next(int node) const { return (node + 1) % size(); }
  /// Segment containing x1 (wrapped into [0, L1)).
  [[nodiscard]] int segment_of(double x1) const;
};

struct Location {
  int triangle = -1;
  std::array<double, 3> bary{};
};

Mesh build_reference_mesh(double length, int nx, int ny);
Mesh refine_uniform(const Mesh& mesh);
SurfaceMesh surface_mesh(const Mesh& mesh);

/// Finds a triangle containing `p` after wrapping x1 into [0, L1].
/// Throws MeshError when the point lies outside the closed rectangle.
Location locate_point(const Mesh& mesh, Point p);

/// Legacy ASCII VTK unstructured grid of the geometric vertices.
void write_vtk_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace fsi
