#pragma once

#include <Eigen/SparseCore>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>

namespace fsi {

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int index)
      : std::runtime_error(what), index_(index) {}
  [[nodiscard]] int index() const { return index_; }

 private:
  int index_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolveStats {
  double backward_error = 0.0;
  int refinement_steps = 0;
};

/// Sparse LU (UMFPACK) with a fill-reducing ordering. The symbolic analysis is
/// kept and reused while the sparsity pattern stays the same.
class Factorization {
 public:
  Factorization();
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  /// Throws SingularMatrixError (with the row or pivot index) on failure.
  void factorize(const Eigen::SparseMatrix<double>& A);

  /// Solves A x = b with up to two steps of iterative refinement when the
  /// normwise backward error exceeds 1e-12.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b, SolveStats* stats = nullptr) const;

  [[nodiscard]] int size() const { return n_; }
  [[nodiscard]] int analyses() const { return analyses_; }
  /// Set when a solve could not reach the backward-error target even after
  /// refinement, the observable symptom of extreme pivot growth.
  [[nodiscard]] bool ill_conditioned() const { return ill_conditioned_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
  int analyses_ = 0;
  mutable bool ill_conditioned_ = false;
};

Factorization factorize(const Eigen::SparseMatrix<double>& A);

/// ||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf), zero when both vanish.
double backward_error(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& b);

double norm_inf(const Eigen::SparseMatrix<double>& A);

/// MatrixMarket coordinate real general.
void write_matrix_market(std::ostream& os, const Eigen::SparseMatrix<double>& A);

}  // namespace fsi
