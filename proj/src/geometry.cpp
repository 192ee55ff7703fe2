#include "fsi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fsi {

TracePoint trace_at(const SurfaceMesh& surf, std::span<const double> d, int seg, double x1) {
  const double h = surf.width(seg);
  const double t = (x1 - surf.left(seg)) / h;
  const double a = d[seg], b = d[surf.next(seg)];
  return {a + t * (b - a), (b - a) / h};
}

AleMap<double> ale_at_point(const SurfaceMesh& surf, std::span<const double> d, Point x) {
  const int seg = surf.segment_of(x.x);
  double x1 = x.x;
  if (x1 >= surf.length) x1 -= surf.length;
  const TracePoint tp = trace_at(surf, d, seg, x1);
  const double eta = 1.0 + tp.value;
  if (!(eta > 0.0)) throw ContactError("non-positive fluid height at x1 = " + std::to_string(x.x));
  return ale_from_height(eta, tp.slope, x.y);
}

std::array<double, 2> mesh_velocity(double eta_k, double eta_km1, double tau, double x2) {
  return {0.0, x2 * (eta_k - eta_km1) / tau};
}

DisplacementField extend_displacement(const SurfaceMesh& surf, std::span<const double> d,
                                      const Mesh& mesh) {
  DisplacementField f;
  f.trace.assign(d.begin(), d.end());
  f.vertex_values.resize(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Point p = mesh.vertices[v];
    double x1 = p.x >= surf.length ? p.x - surf.length : p.x;
    const int seg = surf.segment_of(x1);
    f.vertex_values[v] = p.y * trace_at(surf, d, seg, x1).value;
  }
  return f;
}

std::vector<int> triangle_columns(const Mesh& mesh, const SurfaceMesh& surf) {
  std::vector<int> cols(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double cx =
        (mesh.vertices[tri[0]].x + mesh.vertices[tri[1]].x + mesh.vertices[tri[2]].x) / 3.0;
    const int seg = surf.segment_of(cx);
    for (int a = 0; a < 3; ++a) {
      const double x = mesh.vertices[tri[a]].x;
      if (x < surf.left(seg) - 1e-12 || x > surf.right(seg) + 1e-12)
        throw MeshError("triangle crosses a column of the surface mesh");
    }
    cols[t] = seg;
  }
  return cols;
}

GeometryCache build_geometry_cache(const Mesh& mesh, const SurfaceMesh& surf,
                                   const std::vector<int>& columns, const TriangleRule& rule,
                                   std::span<const double> d_geom,
                                   std::span<const double> d_prev, double tau) {
  GeometryCache g;
  const int nq = static_cast<int>(rule.points.size());
  g.points_per_triangle = nq;
  g.points.resize(mesh.triangles.size() * nq);
  g.min_height = 1e300;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area2 = 2.0 * mesh.signed_area(static_cast<int>(t));
    const int seg = columns[t];
    for (int q = 0; q < nq; ++q) {
      const auto& l = rule.points[q];
      Point x{0.0, 0.0};
      for (int a = 0; a < 3; ++a) {
        x.x += l[a] * mesh.vertices[tri[a]].x;
        x.y += l[a] * mesh.vertices[tri[a]].y;
      }
      const TracePoint now = trace_at(surf, d_geom, seg, x.x);
      const TracePoint before = trace_at(surf, d_prev, seg, x.x);
      const double eta = 1.0 + now.value, eta_prev = 1.0 + before.value;
      g.min_height = std::min({g.min_height, eta, eta_prev});
      if (!(eta > 0.0)) throw ContactError("non-positive fluid height in the geometry cache");
      auto& p = g.points[t * nq + q];
      p.x = x;
      p.weight = rule.weights[q] * area2;
      p.ale = ale_from_height(eta, now.slope, x.y);
      p.J_prev = eta_prev;
      p.Jdot = (eta - eta_prev) / tau;
      p.w = mesh_velocity(eta, eta_prev, tau, x.y);
    }
  }
  return g;
}

double min_height(std::span<const double> d) {
  double m = 1e300;
  for (double v : d) m = std::min(m, 1.0 + v);
  return m;
}

}  // namespace fsi
