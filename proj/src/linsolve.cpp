#include "fsi/linsolve.hpp"

#include <Eigen/UmfPackSupport>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace fsi {

struct Factorization::Impl {
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
  Eigen::SparseMatrix<double> A;
  std::vector<int> outer, inner;
};

Factorization::Factorization() : impl_(std::make_unique<Impl>()) {}
Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

namespace {

/// Index of the first vanishing pivot of U, or -1.
int zero_pivot(const Eigen::UmfPackLU<Eigen::SparseMatrix<double>>& lu) {
  const Eigen::SparseMatrix<double> U = lu.matrixU();
  const Eigen::VectorXd diag = U.diagonal();
  for (int i = 0; i < diag.size(); ++i)
    if (diag(i) == 0.0 || !std::isfinite(diag(i))) return i;
  return -1;
}

}  // namespace

void Factorization::factorize(const Eigen::SparseMatrix<double>& A_in) {
  if (A_in.rows() != A_in.cols()) throw DimensionError("matrix is not square");
  Eigen::SparseMatrix<double> A = A_in;
  A.makeCompressed();
  const int n = static_cast<int>(A.rows());

  std::vector<char> row_has(n, 0);
  for (int k = 0; k < A.outerSize(); ++k) {
    bool col_has = false;
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (it.value() != 0.0) {
        row_has[it.row()] = 1;
        col_has = true;
      }
    if (!col_has) throw SingularMatrixError("singular matrix: column " + std::to_string(k) + " is zero", k);
  }
  for (int i = 0; i < n; ++i)
    if (!row_has[i]) throw SingularMatrixError("singular matrix: row " + std::to_string(i) + " is zero", i);

  std::vector<int> outer(A.outerIndexPtr(), A.outerIndexPtr() + A.outerSize() + 1);
  std::vector<int> inner(A.innerIndexPtr(), A.innerIndexPtr() + A.nonZeros());
  const bool same_pattern = n == n_ && outer == impl_->outer && inner == impl_->inner;
  impl_->A = std::move(A);
  n_ = 0;
  if (!same_pattern) {
    impl_->outer.clear();
    impl_->lu.analyzePattern(impl_->A);
    if (impl_->lu.info() != Eigen::Success) throw SingularMatrixError("symbolic analysis failed", -1);
    impl_->outer = std::move(outer);
    impl_->inner = std::move(inner);
    ++analyses_;
  }
  impl_->lu.factorize(impl_->A);
  if (impl_->lu.info() != Eigen::Success) {
    const int idx = zero_pivot(impl_->lu);
    impl_->outer.clear();
    throw SingularMatrixError("singular matrix: zero pivot " + std::to_string(idx), idx);
  }
  n_ = n;
  ill_conditioned_ = false;
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b, SolveStats* stats) const {
  if (b.size() != n_)
    throw DimensionError("right-hand side has size " + std::to_string(b.size()) +
                         ", matrix has " + std::to_string(n_));
  Eigen::VectorXd x = impl_->lu.solve(b);
  double err = backward_error(impl_->A, x, b);
  int steps = 0;
  while (err > 1e-12 && steps < 2) {
    const Eigen::VectorXd r = b - impl_->A * x;
    x += impl_->lu.solve(r);
    err = backward_error(impl_->A, x, b);
    ++steps;
  }
  if (err > 1e-12) ill_conditioned_ = true;
  if (stats) *stats = {err, steps};
  return x;
}

Factorization factorize(const Eigen::SparseMatrix<double>& A) {
  Factorization f;
  f.factorize(A);
  return f;
}

double norm_inf(const Eigen::SparseMatrix<double>& A) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

double backward_error(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& b) {
  const double r = (A * x - b).lpNorm<Eigen::Infinity>();
  const double scale = norm_inf(A) * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  if (scale == 0.0) return r;
  return r / scale;
}

void write_matrix_market(std::ostream& os, const Eigen::SparseMatrix<double>& A) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  os << std::setprecision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace fsi
