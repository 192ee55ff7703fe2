#include "fsi/state.hpp"

namespace fsi {

Discretization::Discretization(Mesh m, int quadrature_degree, StructureBC bc)
    : mesh(std::move(m)),
      surface(surface_mesh(mesh)),
      layout(build_layout(mesh, bc)),
      columns(triangle_columns(mesh, surface)),
      rule(&triangle_rule(quadrature_degree)) {
  const int nt = static_cast<int>(mesh.triangles.size());
  basis.reserve(static_cast<std::size_t>(nt) * num_qp());
  for (int t = 0; t < nt; ++t) {
    const auto grads = barycentric_gradients(mesh, t);
    for (const auto& l : rule->points) basis.push_back(evaluate_basis(grads, l));
  }
}

Point Discretization::qp_point(int tri, int q) const {
  const auto& t = mesh.triangles[tri];
  const auto& l = rule->points[q];
  Point x;
  for (int a = 0; a < 3; ++a) {
    x.x += l[a] * mesh.vertices[t[a]].x;
    x.y += l[a] * mesh.vertices[t[a]].y;
  }
  return x;
}

std::vector<double> State::xi(const DofLayout& layout) const {
  std::vector<double> out(layout.num_top);
  for (int i = 0; i < layout.num_top; ++i) out[i] = u[layout.vertex_dof(layout.top_vertex[i], 1)];
  return out;
}

State zero_state(const Discretization& disc) {
  const DofLayout& L = disc.layout;
  State s;
  s.u.assign(L.num_velocity(), 0.0);
  s.p.assign(L.num_vertices, 0.0);
  s.z.assign(L.num_top, 0.0);
  s.d.assign(L.num_top, 0.0);
  s.d_geom = s.d;
  s.d_geom_prev = s.d;
  return s;
}

}  // namespace fsi
