#include "fsi/studies.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

namespace fsi {

namespace {

int ratio(double a, double b, const char* what) {
  const double r = a / b;
  const int n = static_cast<int>(std::lround(r));
  if (n < 1 || std::abs(r - n) > 1e-6 * r) throw std::invalid_argument(what);
  return n;
}

void fill_slopes(LadderResult& r) {
  for (int c = 0; c < ErrorRow::kColumns; ++c) {
    std::vector<double> e;
    for (const auto& row : r.rows) e.push_back(row.column(c));
    r.slopes[c] = fit_rate(r.params, e);
  }
}

void report(const Progress& p, const std::string& msg) {
  if (p) p(msg);
}

std::string describe(const char* what, double v) {
  std::ostringstream os;
  os << what << ' ' << v;
  return os.str();
}

}  // namespace

LadderResult tau_convergence(const SimulationConfig& base, const StudyConfig& study,
                             const Progress& progress) {
  if (study.tau_ladder.size() < 3) throw std::invalid_argument("the time-step ladder needs at least 3 levels");
  const auto t0 = std::chrono::steady_clock::now();
  SimulationConfig cfg = base;
  cfg.scheme = Scheme::SemiImplicit;
  cfg.final_time = study.final_time;
  const Discretization disc(build_reference_mesh(base.params.length, study.tau_mesh_nx, study.tau_mesh_ny),
                            base.quadrature_degree, base.structure_bc);

  double finest = study.tau_ladder.front();
  for (double t : study.tau_ladder) finest = std::min(finest, t);
  const int cadence = ratio(finest, study.reference_tau, "ladder steps must be multiples of the reference step");

  SimulationConfig ref_cfg = cfg;
  ref_cfg.tau = study.reference_tau;
  report(progress, describe("reference run, tau =", ref_cfg.tau));
  RunOptions keep;
  keep.keep_every = cadence;
  keep.record_energy = false;
  const Trajectory ref = run(disc, ref_cfg, keep);

  LadderResult result;
  result.param_name = "tau";
  for (double tau : study.tau_ladder) {
    report(progress, describe("ladder run, tau =", tau));
    const int stride = ratio(tau, finest, "ladder steps must be multiples of the finest step");
    SimulationConfig c = cfg;
    c.tau = tau;
    ErrorAccumulator acc(disc, disc);
    RunOptions opt;
    opt.record_energy = false;
    opt.observer = [&](const State& s, const StepRecord&) {
      const std::size_t idx = static_cast<std::size_t>(s.step) * stride;
      if (idx >= ref.snapshots.size()) throw std::runtime_error("reference trajectory is too short");
      acc.add(s, ref.snapshots[idx], tau);
    };
    run(disc, c, opt);
    result.params.push_back(tau);
    result.rows.push_back(acc.result());
  }
  fill_slopes(result);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

LadderResult h_convergence(const SimulationConfig& base, const StudyConfig& study, int levels,
                           const Progress& progress) {
  if (levels <= 0) levels = study.h_levels;
  if (levels < 3) throw std::invalid_argument("the mesh ladder needs at least 3 levels");
  const auto t0 = std::chrono::steady_clock::now();
  SimulationConfig cfg = base;
  cfg.scheme = Scheme::SemiImplicit;
  cfg.final_time = study.final_time;
  cfg.tau = study.h_tau;

  std::vector<std::unique_ptr<Discretization>> discs;
  Mesh m = build_reference_mesh(base.params.length, study.h_base_nx, study.h_base_ny);
  for (int l = 0; l <= levels; ++l) {
    discs.push_back(std::make_unique<Discretization>(m, base.quadrature_degree, base.structure_bc));
    if (l < levels) m = refine_uniform(m);
  }

  std::vector<Trajectory> coarse;
  RunOptions keep;
  keep.keep_every = 1;
  keep.keep_initial = false;
  keep.record_energy = false;
  for (int l = 0; l < levels; ++l) {
    report(progress, describe("ladder run, h =", discs[l]->mesh.h));
    coarse.push_back(run(*discs[l], cfg, keep));
  }

  std::vector<ErrorAccumulator> acc;
  for (int l = 0; l < levels; ++l) acc.emplace_back(*discs[l], *discs[levels]);
  RunOptions opt;
  opt.record_energy = false;
  opt.observer = [&](const State& s, const StepRecord&) {
    for (int l = 0; l < levels; ++l) acc[l].add(coarse[l].snapshots[s.step - 1], s, cfg.tau);
  };
  report(progress, describe("reference run, h =", discs[levels]->mesh.h));
  run(*discs[levels], cfg, opt);

  LadderResult result;
  result.param_name = "h";
  for (int l = 0; l < levels; ++l) {
    result.params.push_back(discs[l]->mesh.h);
    result.rows.push_back(acc[l].result());
  }
  fill_slopes(result);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

CompareResult compare_schemes(const SimulationConfig& base, const StudyConfig& study,
                              const Progress& progress) {
  if (study.compare_ladder.size() < 3) throw std::invalid_argument("the comparison ladder needs at least 3 levels");
  SimulationConfig cfg = base;
  cfg.final_time = study.compare_final_time;
  const Discretization disc(build_reference_mesh(base.params.length, study.compare_nx, study.compare_ny),
                            base.quadrature_degree, base.structure_bc);
  double finest = study.compare_ladder.front();
  for (double t : study.compare_ladder) finest = std::min(finest, t);

  CompareResult result;
  result.reference_tau = finest / 4.0;
  SimulationConfig ref_cfg = cfg;
  ref_cfg.scheme = Scheme::SemiImplicit;
  ref_cfg.tau = result.reference_tau;
  report(progress, describe("reference run, tau =", ref_cfg.tau));
  RunOptions keep_ref;
  keep_ref.keep_every = 4;
  keep_ref.record_energy = false;
  const Trajectory ref = run(disc, ref_cfg, keep_ref);

  std::vector<double> taus, diffs;
  for (double tau : study.compare_ladder) {
    const int stride = ratio(tau, finest, "ladder steps must be multiples of the finest step");
    CompareRow row;
    row.tau = tau;
    SimulationConfig c = cfg;
    c.tau = tau;
    RunOptions keep;
    keep.keep_every = 1;
    keep.keep_initial = false;
    keep.record_energy = false;

    report(progress, describe("semi-implicit, tau =", tau));
    c.scheme = Scheme::SemiImplicit;
    const Trajectory semi = run(disc, c, keep);
    report(progress, describe("fully implicit, tau =", tau));
    c.scheme = Scheme::FullyImplicit;
    const Trajectory full = run(disc, c, keep);

    ErrorAccumulator diff(disc, disc), es(disc, disc), ef(disc, disc);
    for (std::size_t k = 0; k < semi.snapshots.size(); ++k) {
      const State& r = ref.snapshots[(k + 1) * stride];
      diff.add(semi.snapshots[k], full.snapshots[k], tau);
      es.add(semi.snapshots[k], r, tau);
      ef.add(full.snapshots[k], r, tau);
    }
    row.difference_l2l2 = diff.result().u_l2_l2;
    row.semi_error = es.result();
    row.full_error = ef.result();
    row.semi_wall = semi.wall_seconds;
    row.full_wall = full.wall_seconds;
    row.semi_times = semi.times;
    row.full_times = full.times;
    row.newton_average = full.average_newton();
    for (const auto& rec : full.records) row.newton_max = std::max(row.newton_max, rec.newton_iterations);
    taus.push_back(tau);
    diffs.push_back(row.difference_l2l2);
    result.rows.push_back(row);
  }
  result.difference_slope = fit_rate(taus, diffs);
  return result;
}

void write_ladder_csv(std::ostream& os, const LadderResult& r) {
  write_error_table(os, r.param_name, r.params, r.rows);
}

void write_compare_csv(std::ostream& os, const CompareResult& r) {
  os << "tau,u_semi_minus_full_L2L2,semi_grad_e_u_L2L2,full_grad_e_u_L2L2,semi_grad_e_eta_LinfL2,"
        "full_grad_e_eta_LinfL2,semi_wall,full_wall,semi_assembly,semi_factorization,semi_solve,"
        "full_assembly,full_factorization,full_solve,avg_newton,max_newton\n";
  os << std::setprecision(6) << std::scientific;
  for (const auto& row : r.rows) {
    os << row.tau << ',' << row.difference_l2l2 << ',' << row.semi_error.grad_u_l2_l2 << ','
       << row.full_error.grad_u_l2_l2 << ',' << row.semi_error.deta_linf_l2 << ','
       << row.full_error.deta_linf_l2 << ',' << row.semi_wall << ',' << row.full_wall << ','
       << row.semi_times.assembly << ',' << row.semi_times.factorization << ','
       << row.semi_times.solve << ',' << row.full_times.assembly << ','
       << row.full_times.factorization << ',' << row.full_times.solve << ','
       << std::defaultfloat << row.newton_average << ',' << row.newton_max << std::scientific
       << '\n';
  }
  os << std::defaultfloat;
}

}  // namespace fsi
