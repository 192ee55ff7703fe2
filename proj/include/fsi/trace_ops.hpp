#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <span>
#include <vector>

#include "fsi/mesh.hpp"
#include "fsi/spaces.hpp"

namespace fsi {

enum class TraceRole { Displacement, Velocity, SecondDerivative };

/// Nodal values of a periodic P1 function on the surface mesh.
struct TraceField {
  TraceRole role = TraceRole::Displacement;
  std::vector<double> values;
};

/// Periodic P1 mass and stiffness matrices on the surface mesh.
struct TraceMatrices {
  Eigen::SparseMatrix<double> mass;
  Eigen::SparseMatrix<double> stiffness;
};

TraceMatrices trace_matrices(const SurfaceMesh& surf);

/// z with  int z psi + int eta' psi' = 0  for all P1 psi.
TraceField discrete_laplace(const SurfaceMesh& surf, const TraceField& eta);
std::vector<double> discrete_laplace(const SurfaceMesh& surf, std::span<const double> eta);

/// H1 projection with matching mean. `eta` and `deta` are the function and
/// its derivative; segment integrals use 5-point Gauss.
TraceField riesz_project(const SurfaceMesh& surf, const std::function<double(double)>& eta,
                         const std::function<double(double)>& deta);

/// L2(Sigma) norm of (P1 field - f), 5-point Gauss per segment.
double trace_l2_error(const SurfaceMesh& surf, std::span<const double> field,
                      const std::function<double(double)>& f);

double trace_integral(const SurfaceMesh& surf, std::span<const double> field);
/// int a b and int a' b' for P1 fields, exact.
double trace_inner(const SurfaceMesh& surf, std::span<const double> a, std::span<const double> b);
double trace_grad_inner(const SurfaceMesh& surf, std::span<const double> a,
                        std::span<const double> b);

/// Nodal interpolation of u0 into the MINI space (bubbles zero), followed by
/// the bottom no-slip and top u1 = 0 constraints. Returns the full velocity
/// vector of the layout.
std::vector<double> project_initial_velocity(
    const Mesh& mesh, const DofLayout& layout,
    const std::function<std::array<double, 2>(Point)>& u0);

}  // namespace fsi
