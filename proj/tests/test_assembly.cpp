#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "fsi/assembly.hpp"
#include "fsi/linsolve.hpp"
#include "support.hpp"

using namespace fsi;
using fsi::testing::dense;
using fsi::testing::random_state;

namespace {

PhysicalParams forced_params() {
  PhysicalParams p;
  p.forcing.amplitude = 200.0;
  p.gamma3 = 0.05;
  return p;
}

Eigen::VectorXd random_vector(int n, std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * U(rng);
  return v;
}

}  // namespace

TEST(Assembly, ParamsValidate) {
  PhysicalParams p;
  EXPECT_NO_THROW(p.validate());
  p.mu = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = PhysicalParams{};
  p.gamma3 = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Assembly, PackRoundTrip) {
  const Discretization disc(build_reference_mesh(2.0, 4, 2));
  std::mt19937 rng(1);
  const State s = random_state(disc, rng);
  const Eigen::VectorXd x = pack(disc.layout, s.u, s.p, s.z);
  std::vector<double> u, p, z;
  unpack(disc.layout, x, u, p, z);
  EXPECT_EQ(u, s.u);
  EXPECT_EQ(p, s.p);
  EXPECT_EQ(z, s.z);
}

TEST(Assembly, RestStateGivesZeroRightHandSide) {
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const LinearSystem sys = assemble_semi_implicit(disc, zero_state(disc), PhysicalParams{}, 1e-2);
  EXPECT_EQ(sys.rhs.lpNorm<Eigen::Infinity>(), 0.0);
  const Eigen::VectorXd x = factorize(sys.matrix).solve(sys.rhs);
  EXPECT_EQ(x.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Assembly, FlatStokesBlockMatchesOracle) {
  for (double mu : {1.0, 0.37}) {
    const Discretization disc(build_reference_mesh(2.0, 6, 3));
    EXPECT_LE(fsi::testing::flat_stokes_defect(disc, mu), 1e-13) << "mu " << mu;
  }
}

TEST(Assembly, ConvectionIsSkewSymmetric) {
  std::mt19937 rng(7);
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  EXPECT_LE(fsi::testing::convection_skew_defect(disc, rng), 1e-12);
}

TEST(Assembly, ThreadCountDoesNotChangeResult) {
  std::mt19937 rng(2);
  const Discretization disc(build_reference_mesh(2.0, 8, 4));
  const State prev = random_state(disc, rng);
  const PhysicalParams params = forced_params();
  const LinearSystem a = assemble_semi_implicit(disc, prev, params, 1e-2);
  ::setenv("FSI_THREADS", "3", 1);
  const LinearSystem b = assemble_semi_implicit(disc, prev, params, 1e-2);
  ::unsetenv("FSI_THREADS");
  EXPECT_EQ((dense(a.matrix) - dense(b.matrix)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.rhs - b.rhs).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assembly, ImplicitResidualAtRestVanishes) {
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(disc.layout.system_size);
  const Eigen::VectorXd r = assemble_fully_implicit_residual(disc, x, zero_state(disc), PhysicalParams{}, 1e-2);
  EXPECT_EQ(r.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Assembly, JacobianAtRestEqualsLinearStep) {
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const PhysicalParams params = forced_params();
  const State rest = zero_state(disc);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(disc.layout.system_size);
  const auto J = assemble_fully_implicit_jacobian(disc, x, rest, params, 1e-2);
  const LinearSystem semi = assemble_semi_implicit(disc, rest, params, 1e-2);
  EXPECT_LE((dense(J) - dense(semi.matrix)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Assembly, CombinedSweepMatchesSeparateCalls) {
  std::mt19937 rng(4);
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const State prev = random_state(disc, rng);
  const Eigen::VectorXd x = random_vector(disc.layout.system_size, rng, 0.5);
  const PhysicalParams params = forced_params();
  const ResidualJacobian rj = assemble_fully_implicit(disc, x, prev, params, 1e-2);
  const Eigen::VectorXd r = assemble_fully_implicit_residual(disc, x, prev, params, 1e-2);
  const auto J = assemble_fully_implicit_jacobian(disc, x, prev, params, 1e-2);
  EXPECT_LE((rj.residual - r).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((dense(rj.jacobian) - dense(J)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Assembly, JacobianMatchesDirectionalDifferences) {
  std::mt19937 rng(9);
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const PhysicalParams params = forced_params();
  const double tau = 5e-3, eps = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    State prev = random_state(disc, rng);
    prev.t = 0.05;
    const Eigen::VectorXd x = random_vector(disc.layout.system_size, rng, 0.5);
    const Eigen::VectorXd dir = random_vector(disc.layout.system_size, rng, 1.0);
    const auto J = assemble_fully_implicit_jacobian(disc, x, prev, params, tau);
    const Eigen::VectorXd Jd = J * dir;
    const Eigen::VectorXd fd = (assemble_fully_implicit_residual(disc, x + eps * dir, prev, params, tau) -
                                assemble_fully_implicit_residual(disc, x - eps * dir, prev, params, tau)) /
                               (2 * eps);
    EXPECT_LE((fd - Jd).norm() / Jd.norm(), 1e-5) << "trial " << trial;
  }
}

TEST(Assembly, AnalyticAndDifferenceModesAgree) {
  std::mt19937 rng(10);
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const PhysicalParams params = forced_params();
  const State prev = random_state(disc, rng);
  const Eigen::VectorXd x = random_vector(disc.layout.system_size, rng, 0.5);
  const auto A = assemble_fully_implicit_jacobian(disc, x, prev, params, 5e-3, JacobianMode::Analytic);
  const auto F = assemble_fully_implicit_jacobian(disc, x, prev, params, 5e-3, JacobianMode::FiniteDifference);
  EXPECT_LE((dense(A) - dense(F)).norm() / dense(A).norm(), 1e-5);
}

TEST(Assembly, UstarConventionsDifferOnlyInJdotTerm) {
  std::mt19937 rng(12);
  const Discretization disc(build_reference_mesh(2.0, 6, 3));
  const State prev = random_state(disc, rng);
  const PhysicalParams params;
  const unsigned others = kAllTerms & ~kJdot;
  const LinearSystem a = assemble_semi_implicit(disc, prev, params, 1e-2, UStar::SchemeR, others);
  const LinearSystem b = assemble_semi_implicit(disc, prev, params, 1e-2, UStar::Appendix, others);
  EXPECT_EQ((dense(a.matrix) - dense(b.matrix)).cwiseAbs().maxCoeff(), 0.0);
  const LinearSystem c = assemble_semi_implicit(disc, prev, params, 1e-2, UStar::SchemeR, kJdot);
  const LinearSystem d = assemble_semi_implicit(disc, prev, params, 1e-2, UStar::Appendix, kJdot);
  // the u^k coefficients are -1 and 2 times the same weighted mass matrix
  EXPECT_LE((2.0 * dense(c.matrix) + dense(d.matrix)).cwiseAbs().maxCoeff(), 1e-13);
}
