#include "fsi/spaces.hpp"

#include <cmath>

namespace fsi {

std::array<std::array<double, 2>, 3> barycentric_gradients(const Mesh& mesh, int tri) {
  const auto& t = mesh.triangles[tri];
  const Point a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  // Rows of the inverse Jacobian of the affine map.
  const std::array<double, 2> g1{(c.y - a.y) / det, -(c.x - a.x) / det};
  const std::array<double, 2> g2{-(b.y - a.y) / det, (b.x - a.x) / det};
  return {{{-g1[0] - g2[0], -g1[1] - g2[1]}, g1, g2}};
}

BasisEval evaluate_basis(const std::array<std::array<double, 2>, 3>& g,
                         const std::array<double, 3>& l) {
  BasisEval e;
  for (int i = 0; i < 3; ++i) {
    e.value[i] = l[i];
    e.grad[i] = g[i];
  }
  e.value[3] = 27.0 * l[0] * l[1] * l[2];
  for (int d = 0; d < 2; ++d)
    e.grad[3][d] = 27.0 * (l[1] * l[2] * g[0][d] + l[0] * l[2] * g[1][d] + l[0] * l[1] * g[2][d]);
  return e;
}

BasisEval evaluate_basis(const Mesh& mesh, int tri, const std::array<double, 3>& bary) {
  return evaluate_basis(barycentric_gradients(mesh, tri), bary);
}

DofLayout build_layout(const Mesh& mesh, StructureBC bc) {
  const SurfaceMesh surf = surface_mesh(mesh);  // throws without a top boundary

  DofLayout L;
  L.structure_bc = bc;
  L.num_vertices = mesh.num_distinct;
  L.num_triangles = static_cast<int>(mesh.triangles.size());
  L.num_top = surf.size();
  L.top_vertex = surf.mesh_vertex;
  L.vertex_top_node.assign(L.num_vertices, -1);
  for (int i = 0; i < L.num_top; ++i) L.vertex_top_node[L.top_vertex[i]] = i;

  std::vector<BoundaryTag> vtag(L.num_vertices, BoundaryTag::Interior);
  for (std::size_t g = 0; g < mesh.vertices.size(); ++g)
    vtag[mesh.dof_vertex[g]] = mesh.tags[g];

  L.dirichlet.assign(L.num_velocity(), 0);
  for (int v = 0; v < L.num_vertices; ++v) {
    if (vtag[v] == BoundaryTag::Bottom) {
      L.dirichlet[L.vertex_dof(v, 0)] = 1;
      L.dirichlet[L.vertex_dof(v, 1)] = 1;
    } else if (vtag[v] == BoundaryTag::Top) {
      L.dirichlet[L.vertex_dof(v, 0)] = 1;
    }
  }
  if (bc == StructureBC::Clamped) L.dirichlet[L.vertex_dof(L.top_vertex[0], 1)] = 1;

  L.velocity_to_system.assign(L.num_velocity(), -1);
  for (int i = 0; i < L.num_velocity(); ++i)
    if (!L.dirichlet[i]) {
      L.velocity_to_system[i] = static_cast<int>(L.system_to_velocity.size());
      L.system_to_velocity.push_back(i);
    }
  L.num_free_velocity = static_cast<int>(L.system_to_velocity.size());
  L.pressure_offset = L.num_free_velocity;
  L.z_offset = L.pressure_offset + L.num_vertices;
  L.system_size = L.z_offset + L.num_top;

  L.top_u2_system.resize(L.num_top);
  for (int i = 0; i < L.num_top; ++i)
    L.top_u2_system[i] = L.velocity_to_system[L.vertex_dof(L.top_vertex[i], 1)];
  return L;
}

long long full_mixed_step1_dofs(const Mesh& mesh) {
  const long long nv = mesh.num_distinct;
  const long long nt = static_cast<long long>(mesh.triangles.size());
  return 2 * (nv + nt) + nv + nv;
}

}  // namespace fsi
