#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

namespace fsi {
namespace {

constexpr double kCoordTol = 1e-12;

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Recomputes tags, periodic pairs and dof representatives from coordinates.
void finalize(Mesh& m) {
  const int n = static_cast<int>(m.vertices.size());
  m.tags.assign(n, BoundaryTag::Interior);
  for (int v = 0; v < n; ++v) {
    const double y = m.vertices[v].y;
    if (std::abs(y) <= kCoordTol) m.tags[v] = BoundaryTag::Bottom;
    if (std::abs(y - 1.0) <= kCoordTol) m.tags[v] = BoundaryTag::Top;
  }

  std::vector<int> left, right;
  for (int v = 0; v < n; ++v) {
    if (std::abs(m.vertices[v].x) <= kCoordTol) left.push_back(v);
    if (std::abs(m.vertices[v].x - m.length) <= kCoordTol) right.push_back(v);
  }
  auto by_y = [&](int a, int b) { return m.vertices[a].y < m.vertices[b].y; };
  std::sort(left.begin(), left.end(), by_y);
  std::sort(right.begin(), right.end(), by_y);
  if (left.size() != right.size()) throw MeshError("periodic sides do not match");

  m.periodic_pairs.clear();
  std::vector<int> partner(n, -1);
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (std::abs(m.vertices[left[i]].y - m.vertices[right[i]].y) > kCoordTol)
      throw MeshError("periodic sides do not match");
    m.periodic_pairs.push_back({left[i], right[i]});
    partner[right[i]] = left[i];
  }

  m.dof_vertex.assign(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (partner[v] < 0) m.dof_vertex[v] = next++;
  for (int v = 0; v < n; ++v)
    if (partner[v] >= 0) m.dof_vertex[v] = m.dof_vertex[partner[v]];
  m.num_distinct = next;

  m.h = 0.0;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t)
    m.h = std::max(m.h, m.diameter(t));
}

}  // namespace

double Mesh::signed_area(int tri) const {
  const auto& t = triangles[tri];
  const Point a = vertices[t[0]], b = vertices[t[1]], c = vertices[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) s += signed_area(t);
  return s;
}

double Mesh::diameter(int tri) const {
  const auto& t = triangles[tri];
  return std::max({dist(vertices[t[0]], vertices[t[1]]),
                   dist(vertices[t[1]], vertices[t[2]]),
                   dist(vertices[t[2]], vertices[t[0]])});
}

double Mesh::inradius(int tri) const {
  const auto& t = triangles[tri];
  const double perimeter = dist(vertices[t[0]], vertices[t[1]]) +
                           dist(vertices[t[1]], vertices[t[2]]) +
                           dist(vertices[t[2]], vertices[t[0]]);
  return 2.0 * signed_area(tri) / perimeter;
}

std::vector<double> Mesh::top_coordinates() const {
  std::vector<double> xs;
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (tags[v] == BoundaryTag::Top && std::abs(vertices[v].x - length) > kCoordTol)
      xs.push_back(vertices[v].x);
  std::sort(xs.begin(), xs.end());
  return xs;
}

int SurfaceMesh::segment_of(double x1) const {
  x1 = std::fmod(x1, length);
  if (x1 < 0.0) x1 += length;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x1);
  const int seg = static_cast<int>(it - nodes.begin()) - 1;
  return std::clamp(seg, 0, size() - 1);
}

Mesh build_reference_mesh(double length, int nx, int ny) {
  if (!(length > 0.0)) throw MeshError("domain length must be positive");
  if (nx < 2) throw MeshError("nx must be at least 2 for periodic identification, got " +
                              std::to_string(nx));
  if (ny < 1) throw MeshError("ny must be at least 1, got " + std::to_string(ny));

  Mesh m;
  m.length = length;
  const double dx = length / nx, dy = 1.0 / ny;
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({i == nx ? length : i * dx, j == ny ? 1.0 : j * dy});
  // Every cell is cut along its lower-left to upper-right diagonal.
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  finalize(m);
  return m;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh m;
  m.length = mesh.length;
  m.level = mesh.level + 1;
  m.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto [it, inserted] = midpoint.try_emplace({key.first, key.second}, 0);
    if (inserted) {
      const Point pa = mesh.vertices[a], pb = mesh.vertices[b];
      it->second = static_cast<int>(m.vertices.size());
      m.vertices.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    }
    return it->second;
  };
  m.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
    m.triangles.push_back({t[0], m01, m20});
    m.triangles.push_back({m01, t[1], m12});
    m.triangles.push_back({m20, m12, t[2]});
    m.triangles.push_back({m01, m12, m20});
  }
  finalize(m);
  return m;
}

SurfaceMesh surface_mesh(const Mesh& mesh) {
  SurfaceMesh s;
  s.length = mesh.length;
  std::vector<std::pair<double, int>> top;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    if (mesh.tags[v] == BoundaryTag::Top && std::abs(mesh.vertices[v].x - mesh.length) > kCoordTol)
      top.emplace_back(mesh.vertices[v].x, mesh.dof_vertex[v]);
  if (top.size() < 2) throw MeshError("mesh has no top boundary");
  std::sort(top.begin(), top.end());
  for (auto [x, dv] : top) {
    s.nodes.push_back(x);
    s.mesh_vertex.push_back(dv);
  }
  return s;
}

Location locate_point(const Mesh& mesh, Point p) {
  const double tol = 1e-12;
  if (mesh.length > 0.0 && (p.x < -tol || p.x > mesh.length + tol)) {
    p.x = std::fmod(p.x, mesh.length);
    if (p.x < 0.0) p.x += mesh.length;
  }
  if (p.y < -tol || p.y > 1.0 + tol) throw MeshError("point outside the reference domain");

  Location best;
  double best_min = -1e300;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    const double l0 = 1.0 - l1 - l2;
    const double lo = std::min({l0, l1, l2});
    if (lo > best_min) {
      best_min = lo;
      best = {t, {l0, l1, l2}};
      if (lo >= 0.0) break;
    }
  }
  if (best_min < -tol) throw MeshError("point outside the reference domain");
  return best;
}

void write_vtk_mesh(std::ostream& os, const Mesh& mesh) {
  os << "# vtk DataFile Version 3.0\nreference mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& v : mesh.vertices) os << v.x << ' ' << v.y << " 0\n";
  os << "CELLS " << mesh.triangles.size() << ' ' << 4 * mesh.triangles.size() << '\n';
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << mesh.triangles.size() << '\n';
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) os << "5\n";
}

}  // namespace fsi
