#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>
#include <sstream>

#include "fsi/linsolve.hpp"

using namespace fsi;
using Sparse = Eigen::SparseMatrix<double>;

namespace {

Sparse sparse_of(const Eigen::MatrixXd& A) { return A.sparseView(); }

Eigen::MatrixXd pinned_periodic_laplacian(int n) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 2.0;
    A(i, (i + 1) % n) = -1.0;
    A(i, (i + n - 1) % n) = -1.0;
  }
  A.row(0).setZero();
  A.col(0).setZero();
  A(0, 0) = 1.0;
  return A;
}

}  // namespace

TEST(Linsolve, Identity) {
  Sparse I(5, 5);
  I.setIdentity();
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
  EXPECT_EQ((factorize(I).solve(b) - b).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Linsolve, ZeroRightHandSide) {
  const Factorization f = factorize(sparse_of(pinned_periodic_laplacian(8)));
  EXPECT_EQ(f.solve(Eigen::VectorXd::Zero(8)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Linsolve, Diagonal) {
  const Eigen::MatrixXd A = 2.0 * Eigen::MatrixXd::Identity(6, 6);
  const Eigen::VectorXd x = factorize(sparse_of(A)).solve(Eigen::VectorXd::Ones(6));
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(x[i], 0.5);
}

TEST(Linsolve, PinnedPeriodicLaplacianMatchesDenseLU) {
  const Eigen::MatrixXd A = pinned_periodic_laplacian(8);
  Eigen::VectorXd b(8);
  b << 0.0, 1.0, -2.0, 0.5, 3.0, -1.0, 0.25, 2.0;
  const Eigen::VectorXd oracle = A.fullPivLu().solve(b);
  const Eigen::VectorXd x = factorize(sparse_of(A)).solve(b);
  EXPECT_LE((x - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Linsolve, RandomSpdMatchesDenseLU) {
  std::mt19937 rng(42);
  std::normal_distribution<double> N;
  Eigen::MatrixXd B(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) B(i, j) = N(rng);
  const Eigen::MatrixXd A = B * B.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
  Eigen::VectorXd b(50);
  for (int i = 0; i < 50; ++i) b[i] = N(rng);
  const Eigen::VectorXd oracle = A.partialPivLu().solve(b);
  SolveStats stats;
  const Eigen::VectorXd x = factorize(sparse_of(A)).solve(b, &stats);
  EXPECT_LE((x - oracle).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_LE(stats.backward_error, 1e-14);
  EXPECT_LE(backward_error(sparse_of(A), x, b), 1e-14);
}

TEST(Linsolve, ZeroRowIsNamed) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(6, 6);
  A(3, 3) = 0.0;
  A(1, 3) = 1.0;
  try {
    factorize(sparse_of(A));
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.index(), 3);
  }
}

TEST(Linsolve, NumericallySingularRejected) {
  Eigen::MatrixXd A(3, 3);
  A << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  EXPECT_THROW(factorize(sparse_of(A)), SingularMatrixError);
}

TEST(Linsolve, DimensionChecks) {
  Sparse R(3, 4);
  Factorization f;
  EXPECT_THROW(f.factorize(R), DimensionError);
  const Factorization g = factorize(sparse_of(Eigen::MatrixXd::Identity(3, 3)));
  EXPECT_THROW((void)g.solve(Eigen::VectorXd::Ones(4)), DimensionError);
}

TEST(Linsolve, AnalysisReusedForSamePattern) {
  Eigen::MatrixXd A = pinned_periodic_laplacian(8);
  Factorization f;
  f.factorize(sparse_of(A));
  A *= 3.0;
  f.factorize(sparse_of(A));
  EXPECT_EQ(f.analyses(), 1);
  A(4, 6) = 0.5;
  f.factorize(sparse_of(A));
  EXPECT_EQ(f.analyses(), 2);
}

TEST(Linsolve, MatrixMarketOutput) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = 1.5;
  A(1, 0) = -2.0;
  std::ostringstream os;
  write_matrix_market(os, sparse_of(A));
  EXPECT_NE(os.str().find("%%MatrixMarket matrix coordinate real general"), std::string::npos);
  EXPECT_NE(os.str().find("2 2 2"), std::string::npos);
  EXPECT_NE(os.str().find("2 1 -2"), std::string::npos);
  EXPECT_DOUBLE_EQ(norm_inf(sparse_of(A)), 2.0);
}
