#pragma once

#include <Eigen/SparseCore>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fsi/geometry.hpp"
#include "fsi/state.hpp"

namespace fsi {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertical load on the plate: amplitude * t * sin(2 pi frequency x1) for
/// t <= cutoff, zero afterwards. Positive values push the plate upwards.
struct Forcing {
  double amplitude = 0.0;
  double frequency = 1.0;
  double cutoff = 0.2;

  [[nodiscard]] double operator()(double t, double x1) const {
    if (amplitude == 0.0 || t > cutoff) return 0.0;
    return amplitude * t * std::sin(2.0 * std::numbers::pi * frequency * x1);
  }
};

struct PhysicalParams {
  double rho_f = 1.0;
  double rho_s = 1.0;
  double mu = 1.0;
  double gamma1 = 0.1;
  double gamma2 = 0.1;
  double gamma3 = 0.0;
  double length = 2.0;
  Forcing forcing;

  /// Throws std::invalid_argument on non-physical coefficients.
  void validate() const;
};

/// Which u* enters the (1/2) rho dJ/dt u* . phi term of the linear step.
enum class UStar {
  Appendix,  // 2 u^k - u^{k-1}
  SchemeR,   // 2 u^{k-1} - u^k
};

/// Term selection, used by tests and diagnostics to isolate blocks.
enum Term : unsigned {
  kInertia = 1u << 0,
  kJdot = 1u << 1,
  kConvection = 1u << 2,
  kViscous = 1u << 3,
  kPressure = 1u << 4,
  kStructure = 1u << 5,
  kLoad = 1u << 6,
  kAllTerms = 0x7fu,
};

using SparseMatrix = Eigen::SparseMatrix<double>;

struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Pack the free unknowns of (u, p, z) into a Step-1 system vector, and back.
Eigen::VectorXd pack(const DofLayout& layout, const std::vector<double>& u,
                     const std::vector<double>& p, const std::vector<double>& z);
void unpack(const DofLayout& layout, const Eigen::VectorXd& x, std::vector<double>& u,
            std::vector<double>& p, std::vector<double>& z);

/// Linear system of one semi-implicit step computed on the geometry of
/// `prev` (prev.d as height, prev.d_geom for dJ/dt and the mesh velocity).
LinearSystem assemble_semi_implicit(const Discretization& disc, const State& prev,
                                    const PhysicalParams& params, double tau,
                                    UStar ustar = UStar::SchemeR, unsigned terms = kAllTerms);

/// Same, reusing a geometry cache built from prev.d / prev.d_geom.
LinearSystem assemble_semi_implicit(const Discretization& disc, const GeometryCache& geometry,
                                    const State& prev, const PhysicalParams& params,
                                    double tau, UStar ustar, unsigned terms);

GeometryCache step_geometry(const Discretization& disc, const State& prev, double tau);

/// Residual of the fully implicit step at the system vector `guess`; the
/// displacement is d = prev.d + tau u2 on the top, extended linearly in x2,
/// so the extension equation holds identically.
Eigen::VectorXd assemble_fully_implicit_residual(const Discretization& disc,
                                                 const Eigen::VectorXd& guess, const State& prev,
                                                 const PhysicalParams& params, double tau,
                                                 unsigned terms = kAllTerms);

enum class JacobianMode { Analytic, FiniteDifference };

SparseMatrix assemble_fully_implicit_jacobian(const Discretization& disc,
                                              const Eigen::VectorXd& guess, const State& prev,
                                              const PhysicalParams& params, double tau,
                                              JacobianMode mode = JacobianMode::Analytic,
                                              unsigned terms = kAllTerms);

/// Residual and analytic Jacobian in one element sweep.
struct ResidualJacobian {
  Eigen::VectorXd residual;
  SparseMatrix jacobian;
};
ResidualJacobian assemble_fully_implicit(const Discretization& disc, const Eigen::VectorXd& guess,
                                         const State& prev, const PhysicalParams& params,
                                         double tau, unsigned terms = kAllTerms);

/// Number of worker threads for element loops (FSI_THREADS, default 1).
int assembly_threads();

}  // namespace fsi
