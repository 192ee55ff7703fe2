#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fsi/assembly.hpp"
#include "fsi/state.hpp"

namespace fsi {

/// Discrete energy of one state. The fluid term is weighted by the height of
/// the geometry the velocity was computed on; the plate terms use the
/// updated displacement.
struct EnergyReport {
  double fluid_kinetic = 0.0;
  double structure_kinetic = 0.0;
  double elastic = 0.0;
  double bending = 0.0;
  double total = 0.0;
};

EnergyReport energy(const Discretization& disc, const State& state, const PhysicalParams& params);

/// Per-step balance E^k - E^{k-1} + tau (viscous + damping + numerical) = tau work.
struct LedgerTerms {
  double viscous = 0.0;    // 2 mu int J |sym(grad u F^{-1})|^2
  double damping = 0.0;    // gamma3 ||xi'||^2
  double numerical = 0.0;  // numerical dissipation rate
  double work = 0.0;       // int g xi
  double delta_energy = 0.0;
  double residual = 0.0;   // relative to max(E^k, 1)
};

LedgerTerms energy_ledger(const Discretization& disc, const State& prev, const State& next,
                          const PhysicalParams& params, double tau);
LedgerTerms energy_ledger(const Discretization& disc, const State& prev, const State& next,
                          const EnergyReport& e_prev, const EnergyReport& e_next,
                          const PhysicalParams& params, double tau);

/// int_Sigma xi dx1, the discrete rate of change of the fluid volume.
double gcl_residual(const Discretization& disc, const State& state);

class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The six error norms of the convergence study plus the velocity L2(L2)
/// error used for scheme comparisons.
struct ErrorRow {
  double u_linf_l2 = 0.0;
  double xi_linf_l2 = 0.0;
  double eta_linf_l2 = 0.0;
  double deta_linf_l2 = 0.0;
  double zeta_linf_l2 = 0.0;
  double grad_u_l2_l2 = 0.0;
  double u_l2_l2 = 0.0;

  static constexpr int kColumns = 6;
  [[nodiscard]] double column(int i) const;
  static const char* column_name(int i);
};

/// Accumulates errors of a coarse trajectory against a reference one sampled
/// at the same times. The coarse mesh must be nested in the reference mesh.
class ErrorAccumulator {
 public:
  ErrorAccumulator(const Discretization& coarse, const Discretization& fine);

  /// Adds one sample; `tau` weights the L2-in-time sums.
  void add(const State& coarse, const State& fine, double tau);
  [[nodiscard]] ErrorRow result() const;

 private:
  struct Sample {
    int coarse_tri;
    BasisEval basis;
  };
  const Discretization& coarse_;
  const Discretization& fine_;
  std::vector<Sample> samples_;           // per fine quadrature point
  std::vector<int> segment_map_;          // coarse segment of each fine segment
  ErrorRow acc_;
  double grad_sum_ = 0.0;
  double u_sum_ = 0.0;
};

/// Errors of `coarse_traj` against `ref_traj`; states are matched by time and
/// the coarse step `tau` weights the L2-in-time sums.
ErrorRow error_norms(const Discretization& coarse, std::span<const State> coarse_traj,
                     const Discretization& fine, std::span<const State> ref_traj, double tau);

/// Least-squares slope of log(error) against log(parameter); needs at least
/// three positive points.
double fit_rate(std::span<const double> params, std::span<const double> errors);

void write_error_table(std::ostream& os, const std::string& param_name,
                       std::span<const double> params, std::span<const ErrorRow> rows);

}  // namespace fsi
