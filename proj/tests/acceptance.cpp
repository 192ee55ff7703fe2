#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fsi/studies.hpp"
#include "support.hpp"

using namespace fsi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

SimulationConfig reference_experiment() {
  SimulationConfig c;
  c.params.forcing.amplitude = 200.0;
  c.params.forcing.cutoff = 0.2;
  c.nx = 16;
  c.ny = 8;
  c.tau = 2.5e-3;
  return c;
}

void progress(const std::string& msg) { std::cerr << "  " << msg << '\n'; }

double max_gcl = 0.0;

void track_gcl(const Trajectory& t) {
  for (const auto& r : t.records) max_gcl = std::max(max_gcl, std::abs(r.gcl));
}

Outcome energy_identity() {
  SimulationConfig c = reference_experiment();
  c.final_time = 0.4;
  const Trajectory t = run(c);
  track_gcl(t);
  double unforced = 0.0, all = 0.0;
  for (const auto& r : t.records) {
    all = std::max(all, std::abs(r.ledger.residual));
    if (r.t > 0.2 + 1e-12) unforced = std::max(unforced, std::abs(r.ledger.residual));
  }
  return {unforced <= 1e-10, "max ledger residual on (0.2, 0.4] " + sci(unforced) + " (whole run " + sci(all) +
                                 "), limit 1e-10"};
}

Outcome volume_conservation() {
  // full-scheme and clamped runs on top of the runs of the other criteria
  SimulationConfig c = reference_experiment();
  c.final_time = 0.2;
  c.scheme = Scheme::FullyImplicit;
  track_gcl(run(c));
  c.scheme = Scheme::SemiImplicit;
  c.structure_bc = StructureBC::Clamped;
  track_gcl(run(c));
  const double limit = 1e-12 * c.params.length;
  return {max_gcl <= limit, "max |int xi| " + sci(max_gcl) + ", limit " + sci(limit)};
}

std::string slopes_text(const LadderResult& r) {
  std::ostringstream os;
  for (int c = 0; c < ErrorRow::kColumns; ++c)
    os << (c ? ", " : "") << ErrorRow::column_name(c) << ' ' << sci(r.slopes[c]);
  return os.str();
}

Outcome tau_rates() {
  const LadderResult r = tau_convergence(reference_experiment(), StudyConfig{}, progress);
  bool ok = true;
  for (double s : r.slopes) ok = ok && s >= 0.8 && s <= 1.4;
  return {ok, "slopes " + slopes_text(r) + ", band [0.8, 1.4]"};
}

Outcome h_rates() {
  const LadderResult r = h_convergence(reference_experiment(), StudyConfig{}, 3, progress);
  // columns: e_u, e_xi, e_eta, grad_e_eta, e_zeta, grad_e_u
  const bool linear[] = {false, false, false, true, false, true};
  bool ok = true;
  for (int c = 0; c < ErrorRow::kColumns; ++c) {
    const double lo = linear[c] ? 0.8 : 1.6, hi = linear[c] ? 1.4 : 2.4;
    ok = ok && r.slopes[c] >= lo && r.slopes[c] <= hi;
  }
  return {ok, "slopes " + slopes_text(r) + ", bands [0.8, 1.4] for gradients, [1.6, 2.4] otherwise"};
}

int compare_newton_max = 0;
double compare_newton_avg = 0.0;

Outcome scheme_agreement() {
  const CompareResult r = compare_schemes(reference_experiment(), StudyConfig{}, progress);
  bool faster = true;
  double semi = 0.0, full = 0.0;
  for (const auto& row : r.rows) {
    faster = faster && row.semi_wall < row.full_wall;
    semi += row.semi_wall;
    full += row.full_wall;
    compare_newton_max = std::max(compare_newton_max, row.newton_max);
    compare_newton_avg = std::max(compare_newton_avg, row.newton_average);
  }
  const bool ok = r.difference_slope >= 0.8 && r.difference_slope <= 1.4 && faster;
  return {ok, "difference slope " + sci(r.difference_slope) + " (band [0.8, 1.4]); wall semi " + sci(semi) +
                  " s vs full " + sci(full) + " s"};
}

Outcome newton() {
  SimulationConfig c = reference_experiment();
  c.scheme = Scheme::FullyImplicit;
  c.tau = 5e-3;
  c.final_time = 0.4;
  const Trajectory t = run(c);
  track_gcl(t);
  int worst = compare_newton_max;
  for (const auto& r : t.records) worst = std::max(worst, r.newton_iterations);

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Discretization disc(build_reference_mesh(2.0, 8, 4));
  double worst_fd = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    State prev = testing::random_state(disc, rng);
    prev.t = 0.1;
    Eigen::VectorXd x(disc.layout.system_size), dir(disc.layout.system_size);
    for (int i = 0; i < x.size(); ++i) {
      x[i] = 0.5 * U(rng);
      dir[i] = U(rng);
    }
    const double eps = 1e-6;
    const Eigen::VectorXd Jd = assemble_fully_implicit_jacobian(disc, x, prev, c.params, c.tau) * dir;
    const Eigen::VectorXd fd = (assemble_fully_implicit_residual(disc, x + eps * dir, prev, c.params, c.tau) -
                                assemble_fully_implicit_residual(disc, x - eps * dir, prev, c.params, c.tau)) /
                               (2 * eps);
    worst_fd = std::max(worst_fd, (fd - Jd).norm() / Jd.norm());
  }
  return {worst <= 5 && worst_fd <= 1e-5,
          "max iterations " + std::to_string(worst) + " (average " + sci(t.average_newton()) +
              " at tau 5e-3), Jacobian vs differences " + sci(worst_fd) + ", limits 5 and 1e-5"};
}

Outcome riesz() {
  std::vector<double> h;
  const auto e = testing::riesz_errors({8, 16, 32, 64, 128}, &h);
  const double s = fit_rate(h, e);
  return {s >= 0.9, "slope " + sci(s) + " over 4 halvings, limit 0.9"};
}

Outcome properties() {
  std::mt19937 rng(99);
  const Discretization disc(build_reference_mesh(2.0, 8, 4));
  const double skew = testing::convection_skew_defect(disc, rng);
  const double stokes = testing::flat_stokes_defect(disc, 1.0);
  const double riesz = testing::riesz_idempotence_defect(disc.surface, rng);
  const double bubble = testing::bubble_square_defect(disc);
  const double area = testing::area_defect(disc.mesh);
  const bool ok = skew <= 1e-12 && stokes <= 1e-13 && riesz <= 1e-12 && bubble <= 1e-14 && area <= 1e-13;
  return {ok, "skew " + sci(skew) + ", flat Stokes " + sci(stokes) + ", idempotence " + sci(riesz) +
                  ", bubble square " + sci(bubble) + ", area " + sci(area)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  // volume conservation collects the runs of criteria 1 and 6, so it goes last
  const std::vector<Criterion> order{
      {1, "energy identity", energy_identity}, {7, "Riesz projection", riesz},
      {8, "property suites", properties},      {3, "time-step convergence", tau_rates},
      {4, "mesh convergence", h_rates},        {5, "semi vs fully implicit", scheme_agreement},
      {6, "Newton behaviour", newton},         {2, "volume conservation", volume_conservation},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  for (const auto& c : order) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::cerr << "criterion " << c.id << ": " << c.name << '\n';
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.pass;
    lines.emplace_back(c.id, "criterion " + std::to_string(c.id) + " " + (o.pass ? "PASS" : "FAIL") + "  " +
                                 c.name + ": " + o.detail);
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [id, line] : lines) std::cout << line << '\n';
  return all ? 0 : 1;
}
