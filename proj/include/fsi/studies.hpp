#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fsi/diagnostics.hpp"
#include "fsi/stepper.hpp"

namespace fsi {

struct StudyConfig {
  double final_time = 0.5;
  // time-step ladder on a fixed mesh
  std::vector<double> tau_ladder{4e-3, 2e-3, 1e-3, 5e-4};
  double reference_tau = 1.25e-4;
  int tau_mesh_nx = 32;
  int tau_mesh_ny = 16;
  // mesh ladder at a fixed time step: coarsest grid refined `h_levels` times,
  // the reference one level finer
  int h_base_nx = 8;
  int h_base_ny = 4;
  int h_levels = 3;
  double h_tau = 1e-3;
  // scheme comparison
  std::vector<double> compare_ladder{4e-3, 2e-3, 1e-3, 5e-4};
  int compare_nx = 16;
  int compare_ny = 8;
  double compare_final_time = 0.4;
  double slope_floor = 0.8;
};

using Progress = std::function<void(const std::string&)>;

struct LadderResult {
  std::string param_name;
  std::vector<double> params;
  std::vector<ErrorRow> rows;
  std::array<double, ErrorRow::kColumns> slopes{};
  double wall_seconds = 0.0;
};

/// Time-step ladder on a fixed mesh against a finer-step reference.
LadderResult tau_convergence(const SimulationConfig& base, const StudyConfig& study,
                             const Progress& progress = {});

/// Mesh ladder (uniform refinements) at a fixed time step against a
/// reference one refinement finer. `levels` overrides study.h_levels when
/// positive.
LadderResult h_convergence(const SimulationConfig& base, const StudyConfig& study,
                           int levels = 0, const Progress& progress = {});

struct CompareRow {
  double tau = 0.0;
  double difference_l2l2 = 0.0;  // ||u_semi - u_full||_{L2(L2)}
  ErrorRow semi_error;           // against the semi-implicit reference
  ErrorRow full_error;
  double semi_wall = 0.0;
  double full_wall = 0.0;
  PhaseTimes semi_times;
  PhaseTimes full_times;
  double newton_average = 0.0;
  int newton_max = 0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  double difference_slope = 0.0;
  double reference_tau = 0.0;
};

/// Runs both schemes on the same grid for every step of the comparison
/// ladder; errors are measured against a semi-implicit run with a quarter of
/// the finest step.
CompareResult compare_schemes(const SimulationConfig& base, const StudyConfig& study,
                              const Progress& progress = {});

void write_ladder_csv(std::ostream& os, const LadderResult& r);
void write_compare_csv(std::ostream& os, const CompareResult& r);

}  // namespace fsi
