#pragma once

#include <vector>

#include "fsi/geometry.hpp"
#include "fsi/mesh.hpp"
#include "fsi/quadrature.hpp"
#include "fsi/spaces.hpp"

namespace fsi {

/// Mesh, surface grid, dof layout and per-quadrature-point basis values
/// shared by every assembly routine of one discretization.
struct Discretization {
  Mesh mesh;
  SurfaceMesh surface;
  DofLayout layout;
  std::vector<int> columns;
  const TriangleRule* rule = nullptr;
  std::vector<BasisEval> basis;  // triangle-major, one per quadrature point

  Discretization(Mesh m, int quadrature_degree = 6,
                 StructureBC bc = StructureBC::Periodic);

  [[nodiscard]] int num_qp() const { return static_cast<int>(rule->points.size()); }
  [[nodiscard]] const BasisEval& basis_at(int tri, int q) const {
    return basis[static_cast<std::size_t>(tri) * num_qp() + q];
  }
  [[nodiscard]] double qp_weight(int tri, int q) const {
    return rule->weights[q] * 2.0 * mesh.signed_area(tri);
  }
  [[nodiscard]] Point qp_point(int tri, int q) const;
};

/// Unknowns after one time step. Displacements are stored shifted
/// (height = 1 + d). `d` is the displacement after this step's update and
/// `d_geom` the one at the start of the step, so (d - d_geom) / tau is the
/// structure velocity. `d_geom_prev` is the start value of the step before. The structure velocity
/// is the u2 dof of each top vertex.
struct State {
  double t = 0.0;
  int step = 0;
  std::vector<double> u;  // full velocity vector (constrained entries zero)
  std::vector<double> p;
  std::vector<double> z;
  std::vector<double> d;
  std::vector<double> d_geom;
  std::vector<double> d_geom_prev;
  int newton_iterations = 0;
  /// True after a semi-implicit step, where `d` already holds the
  /// displacement of the next time level.
  bool displacement_ahead = true;

  /// Displacement approximating eta(t).
  [[nodiscard]] const std::vector<double>& displacement_now() const {
    return displacement_ahead ? d_geom : d;
  }

  /// Structure velocity per top node.
  [[nodiscard]] std::vector<double> xi(const DofLayout& layout) const;
};

State zero_state(const Discretization& disc);

}  // namespace fsi
