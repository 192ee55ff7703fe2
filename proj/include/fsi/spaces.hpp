#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "fsi/mesh.hpp"

namespace fsi {

/// Shape functions of one triangle at one point: three P1 hats followed by
/// the cubic bubble 27 l0 l1 l2. Gradients are with respect to reference
/// coordinates (x1, x2). Pressure uses the first three entries only.
struct BasisEval {
  std::array<double, 4> value{};
  std::array<std::array<double, 2>, 4> grad{};
};

/// Constant gradients of the barycentric coordinates of a triangle.
std::array<std::array<double, 2>, 3> barycentric_gradients(const Mesh& mesh, int tri);

BasisEval evaluate_basis(const Mesh& mesh, int tri, const std::array<double, 3>& bary);
BasisEval evaluate_basis(const std::array<std::array<double, 2>, 3>& bary_grad,
                         const std::array<double, 3>& bary);

enum class StructureBC { Periodic, Clamped };

/// Index maps for the MINI velocity, P1 pressure and the P1 trace fields.
///
/// Full velocity vector: vertex v, component c at 2 v + c; bubble of triangle
/// t, component c at 2 (nv + t) + c. The Step-1 system orders free velocity
/// dofs, then pressure (one per distinct vertex), then z (one per top node).
/// The structure velocity is the component-2 velocity dof of a top vertex.
struct DofLayout {
  int num_vertices = 0;
  int num_triangles = 0;
  int num_top = 0;
  StructureBC structure_bc = StructureBC::Periodic;

  std::vector<int> velocity_to_system;  // -1 when constrained to zero
  std::vector<int> system_to_velocity;  // inverse over the free range
  std::vector<char> dirichlet;          // per full velocity dof
  std::vector<int> top_vertex;          // dof vertex of each top node
  std::vector<int> top_u2_system;       // system index of u2 per top node, -1 if fixed
  std::vector<int> vertex_top_node;     // top node of a dof vertex or -1

  int num_free_velocity = 0;
  int pressure_offset = 0;
  int z_offset = 0;
  int system_size = 0;

  [[nodiscard]] int num_velocity() const { return 2 * (num_vertices + num_triangles); }
  [[nodiscard]] int vertex_dof(int vertex, int comp) const { return 2 * vertex + comp; }
  [[nodiscard]] int bubble_dof(int tri, int comp) const {
    return 2 * (num_vertices + tri) + comp;
  }
  [[nodiscard]] int pressure_index(int vertex) const { return pressure_offset + vertex; }
  [[nodiscard]] int z_index(int node) const { return z_offset + node; }
  /// Full-vector velocity dof of local basis `a` (0..2 hats, 3 bubble).
  [[nodiscard]] int local_velocity_dof(const Mesh& mesh, int tri, int a, int comp) const {
    return a < 3 ? vertex_dof(mesh.dof_vertex[mesh.triangles[tri][a]], comp)
                 : bubble_dof(tri, comp);
  }
};

DofLayout build_layout(const Mesh& mesh, StructureBC bc = StructureBC::Periodic);

/// Dof count of Step 1 when every field is carried on the whole mesh and
/// constrained dofs are kept (MINI velocity + P1 pressure + P1 z), the
/// convention of FEniCS-style mixed spaces.
long long full_mixed_step1_dofs(const Mesh& mesh);

}  // namespace fsi
