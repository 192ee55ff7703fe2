#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fsi/diagnostics.hpp"
#include "fsi/quadrature.hpp"
#include "fsi/trace_ops.hpp"
#include "support.hpp"

using namespace fsi;

namespace {

void set_xi(const Discretization& disc, State& s, const std::vector<double>& xi) {
  for (int i = 0; i < disc.layout.num_top; ++i)
    s.u[disc.layout.vertex_dof(disc.layout.top_vertex[i], 1)] = xi[i];
}

State scaled(const State& s, double c) {
  State r = s;
  for (auto* v : {&r.u, &r.p, &r.z, &r.d, &r.d_geom, &r.d_geom_prev})
    for (auto& x : *v) x *= c;
  return r;
}

}  // namespace

TEST(Diagnostics, ZeroStateHasZeroEnergy) {
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const EnergyReport e = energy(disc, zero_state(disc), PhysicalParams{});
  EXPECT_EQ(e.total, 0.0);
  EXPECT_EQ(e.fluid_kinetic + e.structure_kinetic + e.elastic + e.bending, 0.0);
  EXPECT_EQ(gcl_residual(disc, zero_state(disc)), 0.0);
}

TEST(Diagnostics, PlateEnergiesMatchDenseOracle) {
  using std::numbers::pi;
  const Discretization disc(build_reference_mesh(2.0, 16, 4));
  const SurfaceMesh& s = disc.surface;
  const int n = s.size();
  State st = zero_state(disc);
  for (int i = 0; i < n; ++i) st.d[i] = st.d_geom[i] = 0.1 * std::sin(pi * s.nodes[i]);
  PhysicalParams params;
  const EnergyReport e = energy(disc, st, params);

  // Gauss quadrature of the interpolant's derivative, segment by segment.
  double grad2 = 0.0;
  const auto& g = gauss5();
  for (int k = 0; k < n; ++k) {
    const double slope = (st.d[s.next(k)] - st.d[k]) / s.width(k);
    for (std::size_t q = 0; q < g.points.size(); ++q) grad2 += g.weights[q] * s.width(k) * slope * slope;
  }
  EXPECT_NEAR(e.elastic, 0.5 * params.gamma1 * grad2, 1e-14);
  EXPECT_NEAR(grad2, std::pow(0.1 * pi, 2), 2e-3);

  // bending: z = -M^{-1} K d, energy (gamma2 / 2) z^T M z
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n), K = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const int j = s.next(k);
    const double h = s.width(k);
    M(k, k) += h / 3;
    M(j, j) += h / 3;
    M(k, j) += h / 6;
    M(j, k) += h / 6;
    K(k, k) += 1 / h;
    K(j, j) += 1 / h;
    K(k, j) -= 1 / h;
    K(j, k) -= 1 / h;
  }
  const Eigen::Map<const Eigen::VectorXd> d(st.d.data(), n);
  const Eigen::VectorXd z = M.partialPivLu().solve(-K * d);
  EXPECT_NEAR(e.bending, 0.5 * params.gamma2 * z.dot(M * z), 1e-12);
  EXPECT_EQ(e.fluid_kinetic, 0.0);
  EXPECT_EQ(e.structure_kinetic, 0.0);
}

TEST(Diagnostics, KineticEnergiesOfUniformFields) {
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  State st = zero_state(disc);
  for (int v = 0; v < disc.layout.num_vertices; ++v) st.u[disc.layout.vertex_dof(v, 0)] = 1.0;
  for (auto& x : st.d) x = 0.25;
  st.d_geom = st.d;
  PhysicalParams params;
  params.rho_f = 3.0;
  EXPECT_NEAR(energy(disc, st, params).fluid_kinetic, 0.5 * 3.0 * 1.25 * 2.0, 1e-13);

  State sx = zero_state(disc);
  set_xi(disc, sx, std::vector<double>(disc.layout.num_top, 0.7));
  params.rho_s = 2.0;
  EXPECT_NEAR(energy(disc, sx, params).structure_kinetic, 0.5 * 2.0 * 0.49 * 2.0, 1e-13);
}

TEST(Diagnostics, GclCalibration) {
  const Discretization disc(build_reference_mesh(2.0, 8, 2));
  State s = zero_state(disc);
  set_xi(disc, s, std::vector<double>(disc.layout.num_top, -1.5));
  EXPECT_NEAR(gcl_residual(disc, s), -1.5 * 2.0, 1e-14);
}

TEST(Diagnostics, FitRate) {
  const std::vector<double> h{4, 2, 1};
  EXPECT_NEAR(fit_rate(h, std::vector<double>{4, 2, 1}), 1.0, 1e-14);
  EXPECT_NEAR(fit_rate(h, std::vector<double>{16, 4, 1}), 2.0, 1e-14);
  EXPECT_THROW(fit_rate(std::vector<double>{2, 1}, std::vector<double>{2, 1}), std::invalid_argument);
  EXPECT_THROW(fit_rate(h, std::vector<double>{1, 0, 1}), std::invalid_argument);
}

TEST(Diagnostics, ErrorOfTrajectoryAgainstItselfIsZero) {
  std::mt19937 rng(8);
  const Discretization disc(build_reference_mesh(2.0, 4, 2));
  std::vector<State> traj{zero_state(disc)};
  for (int k = 1; k <= 3; ++k) {
    State s = fsi::testing::random_state(disc, rng);
    s.step = k;
    s.t = 0.1 * k;
    traj.push_back(s);
  }
  const ErrorRow r = error_norms(disc, traj, disc, traj, 0.1);
  for (int c = 0; c < ErrorRow::kColumns; ++c) EXPECT_LE(r.column(c), 1e-13) << ErrorRow::column_name(c);
}

TEST(Diagnostics, ZeroTrajectoriesOnNestedMeshes) {
  const Discretization coarse(build_reference_mesh(2.0, 4, 2));
  const Discretization fine(refine_uniform(coarse.mesh));
  std::vector<State> a{zero_state(coarse)}, b{zero_state(fine)};
  a[0].t = b[0].t = 0.1;
  const ErrorRow r = error_norms(coarse, a, fine, b, 0.1);
  for (int c = 0; c < ErrorRow::kColumns; ++c) EXPECT_EQ(r.column(c), 0.0);
}

TEST(Diagnostics, ErrorsAreSymmetricAndHomogeneous) {
  std::mt19937 rng(13);
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const State a = fsi::testing::random_state(disc, rng), b = fsi::testing::random_state(disc, rng);
  ErrorAccumulator ab(disc, disc), ba(disc, disc), scaled_ab(disc, disc);
  ab.add(a, b, 0.1);
  ba.add(b, a, 0.1);
  scaled_ab.add(scaled(a, 3.0), scaled(b, 3.0), 0.1);
  const ErrorRow x = ab.result(), y = ba.result(), z = scaled_ab.result();
  for (int c = 0; c < ErrorRow::kColumns; ++c) {
    EXPECT_NEAR(x.column(c), y.column(c), 1e-14 * x.column(c));
    EXPECT_NEAR(z.column(c), 3.0 * x.column(c), 1e-13 * z.column(c));
    EXPECT_GT(x.column(c), 0.0);
  }
}

TEST(Diagnostics, NonNestedMeshesRejected) {
  const Discretization coarse(build_reference_mesh(2.0, 4, 2));
  const Discretization other(build_reference_mesh(2.0, 6, 3));
  EXPECT_THROW(ErrorAccumulator(coarse, other), StructureError);
  const Discretization longer(build_reference_mesh(3.0, 4, 2));
  EXPECT_THROW(ErrorAccumulator(coarse, longer), StructureError);
}

TEST(Diagnostics, ErrorTableLayout) {
  std::vector<ErrorRow> rows(3);
  const std::vector<double> h{0.4, 0.2, 0.1};
  for (int i = 0; i < 3; ++i) {
    const double e = std::pow(2.0, -i);
    rows[i] = {e, e, e, e, e, e, e};
  }
  std::ostringstream os;
  write_error_table(os, "h", h, rows);
  const std::string out = os.str();
  EXPECT_EQ(out.substr(0, out.find('\n')),
            "h,e_u_LinfL2,e_xi_LinfL2,e_eta_LinfL2,grad_e_eta_LinfL2,e_zeta_LinfL2,grad_e_u_L2L2");
  EXPECT_NE(out.find("slope,1.000,1.000,1.000,1.000,1.000,1.000"), std::string::npos);
}
