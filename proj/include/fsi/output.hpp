#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "fsi/config.hpp"
#include "fsi/stepper.hpp"

namespace fsi {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Creates `dir`, or accepts an existing empty one. A non-empty directory is
/// cleared when `overwrite` is set and rejected otherwise.
void prepare_output_dir(const std::filesystem::path& dir, bool overwrite);

/// Legacy ASCII VTK of one state on the reference mesh: vertex velocity,
/// pressure and the displacement extended linearly in x2.
void write_vtk_state(std::ostream& os, const Discretization& disc, const State& state);

/// One row per step: energy terms, ledger, GCL residual, Newton iterations
/// and phase timings.
void write_energy_csv(std::ostream& os, std::span<const StepRecord> records);
void write_gcl_csv(std::ostream& os, std::span<const StepRecord> records);

struct RunManifest {
  AppConfig config;
  std::string output_dir;
  unsigned seed = 0;
  PhaseTimes times;
  double wall_seconds = 0.0;
};

void write_manifest(std::ostream& os, const RunManifest& manifest);

/// Build identifier compiled into the binary.
std::string build_id();

}  // namespace fsi
