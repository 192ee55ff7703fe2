#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "fsi/config.hpp"
#include "fsi/geometry.hpp"
#include "fsi/linsolve.hpp"
#include "fsi/output.hpp"
#include "fsi/studies.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kAcceptance = 4 };

struct Options {
  std::string config;
  std::string out;
  std::string axis = "h";
  int levels = 0;
  std::string scheme;
  std::string ustar;
  bool overwrite = false;
};

fsi::AppConfig resolve(const Options& o) {
  fsi::AppConfig cfg = o.config.empty() ? fsi::AppConfig{} : fsi::load_config(o.config);
  if (o.scheme == "semi") cfg.sim.scheme = fsi::Scheme::SemiImplicit;
  if (o.scheme == "full") cfg.sim.scheme = fsi::Scheme::FullyImplicit;
  if (o.ustar == "scheme_r") cfg.sim.ustar = fsi::UStar::SchemeR;
  if (o.ustar == "appendix") cfg.sim.ustar = fsi::UStar::Appendix;
  try {
    cfg.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw fsi::ConfigError(e.what(), 0);
  }
  return cfg;
}

fs::path output_dir(const Options& o, const char* fallback) {
  fs::path dir = o.out.empty() ? fs::path(fallback) : fs::path(o.out);
  fsi::prepare_output_dir(dir, o.overwrite);
  return dir;
}

std::ofstream open(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw fsi::OutputError("cannot write " + p.string());
  return os;
}

void progress(const std::string& msg) { std::cerr << "  " << msg << '\n'; }

void write_manifest(const fs::path& dir, const fsi::AppConfig& cfg, const fsi::PhaseTimes& times,
                    double wall) {
  fsi::RunManifest m;
  m.config = cfg;
  m.output_dir = fs::absolute(dir).string();
  m.times = times;
  m.wall_seconds = wall;
  auto os = open(dir / "manifest.json");
  fsi::write_manifest(os, m);
}

int cmd_run(const Options& o) {
  const fsi::AppConfig cfg = resolve(o);
  const fs::path dir = output_dir(o, "fsi_run");
  const fsi::Discretization disc(cfg.sim.build_mesh(), cfg.sim.quadrature_degree, cfg.sim.structure_bc);

  fsi::RunOptions opt;
  int frame = 0;
  const int every = cfg.sim.output_every;
  auto snapshot = [&](const fsi::State& s) {
    std::ostringstream name;
    name << "state_" << std::setw(5) << std::setfill('0') << frame++ << ".vtk";
    auto os = open(dir / name.str());
    fsi::write_vtk_state(os, disc, s);
  };
  if (every > 0) {
    snapshot(fsi::zero_state(disc));
    opt.observer = [&](const fsi::State& s, const fsi::StepRecord&) {
      if (s.step % every == 0) snapshot(s);
    };
  }
  const fsi::Trajectory traj = fsi::run(disc, cfg.sim, opt);
  {
    auto os = open(dir / "energy.csv");
    fsi::write_energy_csv(os, traj.records);
  }
  {
    auto os = open(dir / "gcl.csv");
    fsi::write_gcl_csv(os, traj.records);
  }
  write_manifest(dir, cfg, traj.times, traj.wall_seconds);

  double min_height = 1.0;
  for (const auto& r : traj.records) min_height = std::min(min_height, r.min_height);
  const double final_energy = traj.records.empty() ? 0.0 : traj.records.back().energy.total;
  std::cout << "steps        " << traj.records.size() << '\n'
            << "final energy " << final_energy << '\n'
            << "min height   " << min_height << '\n'
            << "wall clock   " << traj.wall_seconds << " s\n"
            << "output       " << dir.string() << '\n';
  return kOk;
}

int cmd_convergence(const Options& o) {
  const fsi::AppConfig cfg = resolve(o);
  const fs::path dir = output_dir(o, "fsi_convergence");
  fsi::LadderResult r;
  const auto t0 = std::chrono::steady_clock::now();
  if (o.axis == "h") {
    r = fsi::h_convergence(cfg.sim, cfg.study, o.levels, progress);
  } else {
    fsi::StudyConfig study = cfg.study;
    if (o.levels > 0) study.tau_ladder.resize(std::min<std::size_t>(study.tau_ladder.size(), o.levels));
    r = fsi::tau_convergence(cfg.sim, study, progress);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path file = dir / (o.axis == "h" ? "h_convergence.csv" : "tau_convergence.csv");
  {
    auto os = open(file);
    fsi::write_ladder_csv(os, r);
  }
  write_manifest(dir, cfg, {}, wall);
  fsi::write_ladder_csv(std::cout, r);

  bool ok = true;
  for (int c = 0; c < fsi::ErrorRow::kColumns; ++c) {
    if (!(r.slopes[c] >= cfg.study.slope_floor)) {
      std::cerr << "slope of " << fsi::ErrorRow::column_name(c) << " = " << r.slopes[c]
                << " is below " << cfg.study.slope_floor << '\n';
      ok = false;
    }
  }
  return ok ? kOk : kAcceptance;
}

int cmd_compare(const Options& o) {
  const fsi::AppConfig cfg = resolve(o);
  const fs::path dir = output_dir(o, "fsi_compare");
  const auto t0 = std::chrono::steady_clock::now();
  const fsi::CompareResult r = fsi::compare_schemes(cfg.sim, cfg.study, progress);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    auto os = open(dir / "compare.csv");
    fsi::write_compare_csv(os, r);
  }
  write_manifest(dir, cfg, {}, wall);
  fsi::write_compare_csv(std::cout, r);
  std::cout << "difference slope " << r.difference_slope << '\n';

  bool ok = r.difference_slope >= cfg.study.slope_floor;
  if (!ok) std::cerr << "semi/full difference does not shrink like O(tau)\n";
  for (const auto& row : r.rows) {
    if (!(row.semi_wall < row.full_wall)) {
      std::cerr << "semi-implicit run at tau = " << row.tau << " was not faster\n";
      ok = false;
    }
  }
  return ok ? kOk : kAcceptance;
}

int cmd_energy_check(const Options& o) {
  fsi::AppConfig cfg = resolve(o);
  if (o.config.empty()) cfg.sim.final_time = 0.4;
  constexpr double kLedgerTol = 1e-10;
  const double gcl_tol = 1e-12 * cfg.sim.params.length;
  const fsi::Discretization disc(cfg.sim.build_mesh(), cfg.sim.quadrature_degree, cfg.sim.structure_bc);

  bool ok = true;
  std::cout << "ustar      max_ledger_residual  max_ledger_unforced  max_gcl\n";
  for (fsi::UStar u : {fsi::UStar::SchemeR, fsi::UStar::Appendix}) {
    fsi::SimulationConfig sim = cfg.sim;
    sim.ustar = u;
    const fsi::Trajectory traj = fsi::run(disc, sim);
    double all = 0.0, unforced = 0.0, gcl = 0.0;
    for (const auto& r : traj.records) {
      all = std::max(all, std::abs(r.ledger.residual));
      if (r.t > sim.params.forcing.cutoff) unforced = std::max(unforced, std::abs(r.ledger.residual));
      gcl = std::max(gcl, r.gcl);
    }
    const bool primary = u == cfg.sim.ustar;
    std::cout << std::left << std::setw(11) << (u == fsi::UStar::SchemeR ? "scheme_r" : "appendix")
              << std::setw(21) << all << std::setw(21) << unforced << gcl
              << (primary ? "  (checked)" : "") << '\n';
    if (gcl > gcl_tol) ok = false;
    if (primary && all > kLedgerTol) ok = false;
  }
  if (cfg.sim.scheme == fsi::Scheme::FullyImplicit)
    std::cout << "note: the ledger is exact for the semi-implicit scheme only\n";
  return ok ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fluid-structure interaction solver on a periodic channel with an elastic top plate"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--scheme", o.scheme, "time discretisation")->check(CLI::IsMember({"semi", "full"}));
    sub->add_option("--ustar", o.ustar, "extrapolated velocity in the dJ/dt term")
        ->check(CLI::IsMember({"scheme_r", "appendix"}));
    sub->add_flag("--overwrite", o.overwrite, "clear a non-empty output directory");
  };

  auto* run = app.add_subcommand("run", "run one simulation and write CSV, VTK and a manifest");
  common(run);
  auto* conv = app.add_subcommand("convergence", "refinement ladder against a finer reference");
  common(conv);
  conv->add_option("--axis", o.axis, "refined parameter")->check(CLI::IsMember({"h", "tau"}));
  conv->add_option("--levels", o.levels, "ladder levels, at least 3")->check(CLI::Range(3, 16));
  auto* cmp = app.add_subcommand("compare", "semi-implicit against fully implicit");
  common(cmp);
  auto* energy = app.add_subcommand("energy-check", "discrete energy identity and GCL check");
  common(energy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(o);
    if (*conv) return cmd_convergence(o);
    if (*cmp) return cmd_compare(o);
    if (*energy) return cmd_energy_check(o);
  } catch (const fsi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const fsi::OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kConfig;
  } catch (const fsi::StepError& e) {
    std::cerr << "numerical failure at step " << e.step() << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const fsi::ContactError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const fsi::SingularMatrixError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid setup: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
