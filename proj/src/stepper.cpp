#include "fsi/stepper.hpp"

#include <chrono>
#include <cmath>

#include "fsi/trace_ops.hpp"

namespace fsi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void SimulationConfig::validate() const {
  params.validate();
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(final_time >= tau)) throw std::invalid_argument("final time must be at least tau");
  if (nx < 2 || ny < 1) throw std::invalid_argument("mesh needs nx >= 2 and ny >= 1");
  if (level < 0) throw std::invalid_argument("refinement level must be non-negative");
  if (!(eta_floor >= 0.0 && eta_floor < 1.0)) throw std::invalid_argument("eta_floor must lie in [0, 1)");
  if (newton.max_iterations < 1) throw std::invalid_argument("newton max iterations must be positive");
  if (output_every < 0) throw std::invalid_argument("output cadence must be non-negative");
}

int SimulationConfig::num_steps() const {
  return static_cast<int>(std::ceil(final_time / tau - 1e-9));
}

Mesh SimulationConfig::build_mesh() const {
  Mesh m = build_reference_mesh(params.length, nx, ny);
  for (int i = 0; i < level; ++i) m = refine_uniform(m);
  return m;
}

Stepper::Stepper(const Discretization& disc, SimulationConfig config)
    : disc_(disc), config_(std::move(config)) {}

State Stepper::step(const State& prev, StepInfo* info) {
  return config_.scheme == Scheme::SemiImplicit ? step_semi_implicit(prev, info)
                                                 : step_fully_implicit(prev, info);
}

void Stepper::check_contact(const State& s) const {
  const double h = min_height(s.d);
  if (!(h > config_.eta_floor))
    throw StepError("contact: minimum fluid height " + std::to_string(h) + " at or below floor " +
                        std::to_string(config_.eta_floor) + " at step " + std::to_string(s.step),
                    s.step);
}

State Stepper::finish(const State& prev, const Eigen::VectorXd& x, bool ahead) const {
  const double tau = config_.tau;
  State next;
  next.t = prev.t + tau;
  next.step = prev.step + 1;
  unpack(disc_.layout, x, next.u, next.p, next.z);
  const std::vector<double> xi = next.xi(disc_.layout);
  next.d.resize(prev.d.size());
  for (std::size_t i = 0; i < xi.size(); ++i) next.d[i] = prev.d[i] + tau * xi[i];
  next.d_geom = prev.d;
  next.d_geom_prev = prev.d_geom;
  next.displacement_ahead = ahead;
  return next;
}

State Stepper::step_semi_implicit(const State& prev, StepInfo* info) {
  const double tau = config_.tau;
  const int k = prev.step + 1;
  StepInfo local;
  try {
    if (!(min_height(prev.d) > config_.eta_floor))
      throw StepError("contact: fluid height at or below the floor before step " + std::to_string(k), k);
    auto t0 = Clock::now();
    const GeometryCache geom = step_geometry(disc_, prev, tau);
    const LinearSystem sys =
        assemble_semi_implicit(disc_, geom, prev, config_.params, tau, config_.ustar, kAllTerms);
    local.times.assembly = seconds_since(t0);
    t0 = Clock::now();
    lu_.factorize(sys.matrix);
    local.times.factorization = seconds_since(t0);
    t0 = Clock::now();
    SolveStats stats;
    const Eigen::VectorXd x = lu_.solve(sys.rhs, &stats);
    local.times.solve = seconds_since(t0);
    local.backward_error = stats.backward_error;
    State next = finish(prev, x, true);
    check_contact(next);
    if (info) *info = local;
    return next;
  } catch (const StepError&) {
    throw;
  } catch (const ContactError& e) {
    throw StepError(std::string("contact at step ") + std::to_string(k) + ": " + e.what(), k);
  } catch (const SingularMatrixError& e) {
    throw StepError(std::string("singular system at step ") + std::to_string(k) + ": " + e.what(), k);
  }
}

State Stepper::step_fully_implicit(const State& prev, StepInfo* info) {
  const double tau = config_.tau;
  const int k = prev.step + 1;
  const NewtonOptions& opt = config_.newton;
  StepInfo local;
  try {
    Eigen::VectorXd x;
    if (opt.predictor) {
      State pred = step_semi_implicit(prev, nullptr);
      x = pack(disc_.layout, pred.u, pred.p, pred.z);
    } else {
      x = pack(disc_.layout, prev.u, prev.p, prev.z);
    }
    auto t0 = Clock::now();
    ResidualJacobian rj = assemble_fully_implicit(disc_, x, prev, config_.params, tau);
    local.times.assembly += seconds_since(t0);
    double r0 = rj.residual.lpNorm<Eigen::Infinity>();
    local.residual_history.push_back(r0);
    bool converged = false;
    for (int it = 1; it <= opt.max_iterations; ++it) {
      t0 = Clock::now();
      lu_.factorize(rj.jacobian);
      local.times.factorization += seconds_since(t0);
      t0 = Clock::now();
      SolveStats stats;
      x -= lu_.solve(rj.residual, &stats);
      local.times.solve += seconds_since(t0);
      local.backward_error = std::max(local.backward_error, stats.backward_error);
      local.newton_iterations = it;
      t0 = Clock::now();
      rj = assemble_fully_implicit(disc_, x, prev, config_.params, tau);
      local.times.assembly += seconds_since(t0);
      const double r = rj.residual.lpNorm<Eigen::Infinity>();
      local.residual_history.push_back(r);
      if (!std::isfinite(r)) break;
      if (r <= opt.abs_tol || r <= opt.rel_tol * r0) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NewtonError("Newton did not converge at step " + std::to_string(k) + " after " +
                            std::to_string(local.newton_iterations) + " iterations",
                        k, local.residual_history);
    State next = finish(prev, x, false);
    next.newton_iterations = local.newton_iterations;
    check_contact(next);
    if (info) *info = local;
    return next;
  } catch (const StepError&) {
    throw;
  } catch (const ContactError& e) {
    throw StepError(std::string("contact at step ") + std::to_string(k) + ": " + e.what(), k);
  } catch (const SingularMatrixError& e) {
    throw StepError(std::string("singular system at step ") + std::to_string(k) + ": " + e.what(), k);
  }
}

State step_semi_implicit(const Discretization& disc, const State& prev,
                         const SimulationConfig& config) {
  Stepper s(disc, config);
  return s.step_semi_implicit(prev);
}

State step_fully_implicit(const Discretization& disc, const State& prev,
                          const SimulationConfig& config) {
  Stepper s(disc, config);
  return s.step_fully_implicit(prev);
}

double Trajectory::average_newton() const {
  if (records.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : records) s += r.newton_iterations;
  return s / static_cast<double>(records.size());
}

Trajectory run(const Discretization& disc, const SimulationConfig& config,
               const RunOptions& options) {
  config.validate();
  Stepper stepper(disc, config);
  Trajectory traj;
  State state = zero_state(disc);
  if (options.keep_initial && options.keep_every > 0) traj.snapshots.push_back(state);
  EnergyReport e_prev = energy(disc, state, config.params);
  const auto t_start = Clock::now();
  const int n = config.num_steps();
  traj.records.reserve(n);
  for (int k = 1; k <= n; ++k) {
    StepInfo info;
    State next = stepper.step(state, &info);
    StepRecord rec;
    rec.step = next.step;
    rec.t = next.t;
    rec.newton_iterations = info.newton_iterations;
    rec.times = info.times;
    rec.gcl = gcl_residual(disc, next);
    rec.min_height = min_height(next.d);
    if (options.record_energy) {
      rec.energy = energy(disc, next, config.params);
      rec.ledger = energy_ledger(disc, state, next, e_prev, rec.energy, config.params, config.tau);
      e_prev = rec.energy;
    }
    traj.times += info.times;
    if (options.observer) options.observer(next, rec);
    traj.records.push_back(rec);
    state = std::move(next);
    if (options.keep_every > 0 && k % options.keep_every == 0) traj.snapshots.push_back(state);
  }
  traj.wall_seconds = seconds_since(t_start);
  traj.final_state = std::move(state);
  return traj;
}

Trajectory run(const SimulationConfig& config, const RunOptions& options) {
  config.validate();
  const Discretization disc(config.build_mesh(), config.quadrature_degree, config.structure_bc);
  return run(disc, config, options);
}

}  // namespace fsi
