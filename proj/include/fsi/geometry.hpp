#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "fsi/mesh.hpp"
#include "fsi/quadrature.hpp"

namespace fsi {

/// Raised when the fluid height reaches the contact floor.
class ContactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
using Mat2 = std::array<std::array<T, 2>, 2>;

/// ALE quantities of the graph map (x1, x2) -> (x1, eta(x1) x2).
template <class T>
struct AleMap {
  Mat2<T> F;
  Mat2<T> Finv;
  T J;
  Mat2<T> M;  // J F^{-T}
};

/// Closed-form F, F^{-1}, J = eta and M = eta F^{-T} from the height, its
/// slope and the reference height x2.
template <class T>
AleMap<T> ale_from_height(const T& eta, const T& slope, double x2) {
  AleMap<T> a;
  const T s = slope * x2;
  a.F = {{{T(1.0), T(0.0)}, {s, eta}}};
  const T inv = 1.0 / eta;
  a.Finv = {{{T(1.0), T(0.0)}, {-s * inv, inv}}};
  a.J = eta;
  a.M = {{{eta, -s}, {T(0.0), T(1.0)}}};
  return a;
}

/// Height 1 + d and slope of a P1 trace field at x1 inside segment `seg`.
struct TracePoint {
  double value = 0.0;
  double slope = 0.0;
};
TracePoint trace_at(const SurfaceMesh& surf, std::span<const double> d, int seg, double x1);

/// F, F^{-1}, J, M at a reference point for the shifted displacement `d`
/// (height eta = 1 + d). Throws ContactError when eta <= 0.
AleMap<double> ale_at_point(const SurfaceMesh& surf, std::span<const double> d, Point x);

/// Mesh velocity (0, x2 (eta_k - eta_km1) / tau).
std::array<double, 2> mesh_velocity(double eta_k, double eta_km1, double tau, double x2);

/// Displacement extended linearly in x2; nodal values per geometric vertex.
struct DisplacementField {
  std::vector<double> vertex_values;
  std::vector<double> trace;
};

DisplacementField extend_displacement(const SurfaceMesh& surf, std::span<const double> d,
                                      const Mesh& mesh);

/// Column (top segment) containing each triangle.
std::vector<int> triangle_columns(const Mesh& mesh, const SurfaceMesh& surf);

/// Per-quadrature-point ALE data for one time step, frozen at the geometry
/// level `d_geom`, with the previous level `d_prev` for the time derivative
/// of J and the mesh velocity.
struct GeometryCache {
  struct QPoint {
    Point x;
    double weight = 0.0;  // includes the element area factor
    AleMap<double> ale;
    double J_prev = 1.0;
    double Jdot = 0.0;
    std::array<double, 2> w{};
  };
  int points_per_triangle = 0;
  std::vector<QPoint> points;  // triangle-major
  double min_height = 1.0;

  [[nodiscard]] const QPoint& at(int tri, int q) const {
    return points[static_cast<std::size_t>(tri) * points_per_triangle + q];
  }
};

GeometryCache build_geometry_cache(const Mesh& mesh, const SurfaceMesh& surf,
                                   const std::vector<int>& columns, const TriangleRule& rule,
                                   std::span<const double> d_geom,
                                   std::span<const double> d_prev, double tau);

/// Minimum nodal height 1 + d.
double min_height(std::span<const double> d);

}  // namespace fsi
