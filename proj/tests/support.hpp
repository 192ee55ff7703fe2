#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <random>

#include "fsi/assembly.hpp"
#include "fsi/state.hpp"

namespace fsi::testing {

/// State with random free velocity, pressure and z entries, and random
/// displacement levels of size `d_amp` (heights stay well above zero).
State random_state(const Discretization& disc, std::mt19937& rng, double u_amp = 1.0,
                   double d_amp = 0.1);

/// Flat-domain MINI Stokes matrix 2 mu (eps(u), eps(v)) - (p, div v) - (q, div u)
/// in the Step-1 ordering, assembled directly from the element basis with
/// its own quadrature rule.
Eigen::MatrixXd flat_stokes_oracle(const Discretization& disc, double mu);

/// max |A + A^T| of the assembled convection block on a random state.
double convection_skew_defect(const Discretization& disc, std::mt19937& rng);

/// max |semi-implicit viscous + pressure matrix at rest - flat oracle|.
double flat_stokes_defect(const Discretization& disc, double mu);

/// max |R(eta) - eta| for a random trace-space eta.
double riesz_idempotence_defect(const SurfaceMesh& surf, std::mt19937& rng);

/// |int_K b^2 - 81/560 * 2|K|| over all triangles of the mesh, relative.
double bubble_square_defect(const Discretization& disc);

/// |sum of triangle areas - L1| for a mesh and its refinements.
double area_defect(const Mesh& mesh);

/// Errors ||d2_h R eta - eta''||_L2 for eta = sin(pi x) over the given
/// numbers of surface cells.
std::vector<double> riesz_errors(const std::vector<int>& cells, std::vector<double>* h);

Eigen::MatrixXd dense(const Eigen::SparseMatrix<double>& A);

}  // namespace fsi::testing
