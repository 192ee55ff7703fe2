#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsi/assembly.hpp"
#include "fsi/diagnostics.hpp"
#include "fsi/linsolve.hpp"
#include "fsi/state.hpp"

namespace fsi {

enum class Scheme { SemiImplicit, FullyImplicit };

struct NewtonOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_iterations = 25;
  bool predictor = false;  // start from one semi-implicit step
};

struct SimulationConfig {
  PhysicalParams params;
  int nx = 16;
  int ny = 8;
  int level = 0;  // uniform refinements of the nx x ny grid
  double tau = 2.5e-3;
  double final_time = 1.0;
  Scheme scheme = Scheme::SemiImplicit;
  UStar ustar = UStar::SchemeR;
  NewtonOptions newton;
  double eta_floor = 0.01;
  int output_every = 0;  // snapshot cadence in steps, 0 disables
  int quadrature_degree = 6;
  StructureBC structure_bc = StructureBC::Periodic;

  /// Throws std::invalid_argument when tau <= 0, T < tau or the mesh is invalid.
  void validate() const;
  [[nodiscard]] int num_steps() const;
  [[nodiscard]] Mesh build_mesh() const;
};

/// Numerical failure of a time step (contact, non-convergence, singular
/// system); carries the index of the failing step.
class StepError : public std::runtime_error {
 public:
  StepError(const std::string& what, int step) : std::runtime_error(what), step_(step) {}
  [[nodiscard]] int step() const { return step_; }

 private:
  int step_;
};

class NewtonError : public StepError {
 public:
  NewtonError(const std::string& what, int step, std::vector<double> history)
      : StepError(what, step), history_(std::move(history)) {}
  [[nodiscard]] const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

struct PhaseTimes {
  double assembly = 0.0;
  double factorization = 0.0;
  double solve = 0.0;

  PhaseTimes& operator+=(const PhaseTimes& o) {
    assembly += o.assembly;
    factorization += o.factorization;
    solve += o.solve;
    return *this;
  }
  [[nodiscard]] double total() const { return assembly + factorization + solve; }
};

struct StepInfo {
  PhaseTimes times;
  int newton_iterations = 0;
  std::vector<double> residual_history;
  double backward_error = 0.0;
};

/// Time stepper bound to one discretization; keeps the sparse LU symbolic
/// analysis between steps.
class Stepper {
 public:
  Stepper(const Discretization& disc, SimulationConfig config);

  State step(const State& prev, StepInfo* info = nullptr);
  State step_semi_implicit(const State& prev, StepInfo* info = nullptr);
  State step_fully_implicit(const State& prev, StepInfo* info = nullptr);

  [[nodiscard]] const SimulationConfig& config() const { return config_; }
  [[nodiscard]] const Discretization& discretization() const { return disc_; }

 private:
  State finish(const State& prev, const Eigen::VectorXd& x, bool ahead) const;
  void check_contact(const State& s) const;

  const Discretization& disc_;
  SimulationConfig config_;
  Factorization lu_;
};

State step_semi_implicit(const Discretization& disc, const State& prev,
                         const SimulationConfig& config);
State step_fully_implicit(const Discretization& disc, const State& prev,
                          const SimulationConfig& config);

struct StepRecord {
  int step = 0;
  double t = 0.0;
  EnergyReport energy;
  LedgerTerms ledger;
  double gcl = 0.0;
  double min_height = 1.0;
  int newton_iterations = 0;
  PhaseTimes times;
};

struct Trajectory {
  std::vector<State> snapshots;
  std::vector<StepRecord> records;
  PhaseTimes times;
  double wall_seconds = 0.0;
  State final_state;

  [[nodiscard]] double average_newton() const;
};

struct RunOptions {
  /// Keep every `keep_every`-th state (0 keeps none, besides the final one).
  int keep_every = 0;
  bool keep_initial = true;
  bool record_energy = true;
  std::function<void(const State&, const StepRecord&)> observer;
};

/// Marches ceil(T / tau) steps from the zero state.
Trajectory run(const Discretization& disc, const SimulationConfig& config,
               const RunOptions& options = {});
Trajectory run(const SimulationConfig& config, const RunOptions& options = {});

}  // namespace fsi
