#include "fsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "fsi/trace_ops.hpp"

namespace fsi {

namespace {

double fluid_kinetic(const Discretization& disc, const GeometryCache& g,
                     const std::vector<double>& u, bool use_prev_height) {
  const DofLayout& L = disc.layout;
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(disc.mesh.triangles.size()); ++t)
    for (int q = 0; q < disc.num_qp(); ++q) {
      const BasisEval& be = disc.basis_at(t, q);
      const auto& p = g.at(t, q);
      double uq[2] = {0.0, 0.0};
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 2; ++c) uq[c] += u[L.local_velocity_dof(disc.mesh, t, a, c)] * be.value[a];
      const double J = use_prev_height ? p.J_prev : p.ale.J;
      sum += p.weight * J * (uq[0] * uq[0] + uq[1] * uq[1]);
    }
  return sum;
}

double viscous_dissipation(const Discretization& disc, const GeometryCache& g,
                           const std::vector<double>& u, double mu) {
  const DofLayout& L = disc.layout;
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(disc.mesh.triangles.size()); ++t)
    for (int q = 0; q < disc.num_qp(); ++q) {
      const BasisEval& be = disc.basis_at(t, q);
      const auto& p = g.at(t, q);
      double gu[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 2; ++c) {
          const double coef = u[L.local_velocity_dof(disc.mesh, t, a, c)];
          gu[c][0] += coef * be.grad[a][0];
          gu[c][1] += coef * be.grad[a][1];
        }
      const auto& Fi = p.ale.Finv;
      double G[2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) G[i][j] = gu[i][0] * Fi[0][j] + gu[i][1] * Fi[1][j];
      double d2 = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const double D = 0.5 * (G[i][j] + G[j][i]);
          d2 += D * D;
        }
      sum += p.weight * p.ale.J * d2;
    }
  return 2.0 * mu * sum;
}

double load_work(const Discretization& disc, const std::vector<double>& xi,
                 const PhysicalParams& params, double t) {
  const SurfaceMesh& S = disc.surface;
  const auto& g = gauss5();
  double sum = 0.0;
  for (int seg = 0; seg < S.size(); ++seg) {
    const double h = S.width(seg), x0 = S.left(seg);
    const double a = xi[seg], b = xi[S.next(seg)];
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const double s = g.points[q];
      sum += g.weights[q] * h * params.forcing(t, x0 + s * h) * (a * (1.0 - s) + b * s);
    }
  }
  return sum;
}

std::vector<double> difference(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace

EnergyReport energy(const Discretization& disc, const State& s, const PhysicalParams& P) {
  const auto& now = s.displacement_now();
  const GeometryCache g = build_geometry_cache(disc.mesh, disc.surface, disc.columns, *disc.rule,
                                               now, now, 1.0);
  EnergyReport e;
  e.fluid_kinetic = 0.5 * P.rho_f * fluid_kinetic(disc, g, s.u, false);
  const std::vector<double> xi = s.xi(disc.layout);
  e.structure_kinetic = 0.5 * P.rho_s * trace_inner(disc.surface, xi, xi);
  e.elastic = 0.5 * P.gamma1 * trace_grad_inner(disc.surface, s.d, s.d);
  const std::vector<double> z = discrete_laplace(disc.surface, s.d);
  e.bending = 0.5 * P.gamma2 * trace_inner(disc.surface, z, z);
  e.total = e.fluid_kinetic + e.structure_kinetic + e.elastic + e.bending;
  return e;
}

LedgerTerms energy_ledger(const Discretization& disc, const State& prev, const State& next,
                          const PhysicalParams& params, double tau) {
  return energy_ledger(disc, prev, next, energy(disc, prev, params), energy(disc, next, params),
                       params, tau);
}

LedgerTerms energy_ledger(const Discretization& disc, const State& prev, const State& next,
                          const EnergyReport& e_prev, const EnergyReport& e_next,
                          const PhysicalParams& P, double tau) {
  const SurfaceMesh& S = disc.surface;
  const GeometryCache g = build_geometry_cache(disc.mesh, S, disc.columns, *disc.rule,
                                               next.displacement_now(), prev.displacement_now(), tau);
  LedgerTerms l;
  l.viscous = viscous_dissipation(disc, g, next.u, P.mu);
  const std::vector<double> xi = next.xi(disc.layout), xi_old = prev.xi(disc.layout);
  l.damping = P.gamma3 * trace_grad_inner(S, xi, xi);
  l.work = load_work(disc, xi, P, next.t);

  const std::vector<double> du = difference(next.u, prev.u);
  const std::vector<double> dxi = difference(xi, xi_old);
  const std::vector<double> dd = difference(next.d, prev.d);
  const std::vector<double> dz = discrete_laplace(S, dd);
  const double num = 0.5 * P.rho_f * fluid_kinetic(disc, g, du, true) +
                     0.5 * P.rho_s * trace_inner(S, dxi, dxi) +
                     0.5 * P.gamma1 * trace_grad_inner(S, dd, dd) +
                     0.5 * P.gamma2 * trace_inner(S, dz, dz);
  l.numerical = num / tau;
  l.delta_energy = e_next.total - e_prev.total;
  const double r = l.delta_energy + tau * (l.viscous + l.damping + l.numerical) - tau * l.work;
  l.residual = std::abs(r) / std::max(e_next.total, 1.0);
  return l;
}

double gcl_residual(const Discretization& disc, const State& state) {
  return trace_integral(disc.surface, state.xi(disc.layout));
}

double ErrorRow::column(int i) const {
  switch (i) {
    case 0: return u_linf_l2;
    case 1: return xi_linf_l2;
    case 2: return eta_linf_l2;
    case 3: return deta_linf_l2;
    case 4: return zeta_linf_l2;
    case 5: return grad_u_l2_l2;
    default: throw std::out_of_range("error column");
  }
}

const char* ErrorRow::column_name(int i) {
  static const char* names[] = {"e_u_LinfL2",        "e_xi_LinfL2",   "e_eta_LinfL2",
                                "grad_e_eta_LinfL2", "e_zeta_LinfL2", "grad_e_u_L2L2"};
  if (i < 0 || i >= kColumns) throw std::out_of_range("error column");
  return names[i];
}

namespace {

/// Buckets triangles by the x1 range of their bounding boxes.
class TriangleLocator {
 public:
  explicit TriangleLocator(const Mesh& m) : mesh_(m) {
    const int nt = static_cast<int>(m.triangles.size());
    nb_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(nt))));
    buckets_.resize(static_cast<std::size_t>(nb_) * nb_);
    for (int t = 0; t < nt; ++t) {
      double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
      for (int v : m.triangles[t]) {
        x0 = std::min(x0, m.vertices[v].x);
        x1 = std::max(x1, m.vertices[v].x);
        y0 = std::min(y0, m.vertices[v].y);
        y1 = std::max(y1, m.vertices[v].y);
      }
      for (int i = bx(x0 - 1e-12); i <= bx(x1 + 1e-12); ++i)
        for (int j = by(y0 - 1e-12); j <= by(y1 + 1e-12); ++j)
          buckets_[static_cast<std::size_t>(j) * nb_ + i].push_back(t);
    }
  }

  /// Triangle containing p with barycentric coordinates, or -1.
  int find(Point p, std::array<double, 3>& bary) const {
    const auto& cand = buckets_[static_cast<std::size_t>(by(p.y)) * nb_ + bx(p.x)];
    int best = -1;
    double best_min = -1e300;
    for (int t : cand) {
      const auto& tri = mesh_.triangles[t];
      const Point a = mesh_.vertices[tri[0]], b = mesh_.vertices[tri[1]], c = mesh_.vertices[tri[2]];
      const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
      const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
      const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
      const double lo = std::min({1.0 - l1 - l2, l1, l2});
      if (lo > best_min) {
        best_min = lo;
        best = t;
        bary = {1.0 - l1 - l2, l1, l2};
      }
    }
    return best_min >= -1e-10 ? best : -1;
  }

 private:
  int bx(double x) const {
    return std::clamp(static_cast<int>(x / mesh_.length * nb_), 0, nb_ - 1);
  }
  int by(double y) const { return std::clamp(static_cast<int>(y * nb_), 0, nb_ - 1); }

  const Mesh& mesh_;
  int nb_ = 1;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace

ErrorAccumulator::ErrorAccumulator(const Discretization& coarse, const Discretization& fine)
    : coarse_(coarse), fine_(fine) {
  if (std::abs(coarse.mesh.length - fine.mesh.length) > 1e-12)
    throw StructureError("meshes cover different domains");
  const TriangleLocator locator(coarse.mesh);
  const int nt = static_cast<int>(fine.mesh.triangles.size());
  samples_.reserve(static_cast<std::size_t>(nt) * fine.num_qp());
  for (int t = 0; t < nt; ++t) {
    const auto& tri = fine.mesh.triangles[t];
    Point c{0.0, 0.0};
    for (int v : tri) {
      c.x += fine.mesh.vertices[v].x / 3.0;
      c.y += fine.mesh.vertices[v].y / 3.0;
    }
    std::array<double, 3> bary;
    const int ct = locator.find(c, bary);
    if (ct < 0) throw StructureError("reference mesh is not nested in the coarse mesh");
    for (int v : tri) {
      std::array<double, 3> bv;
      if (locator.find(fine.mesh.vertices[v], bv) < 0)
        throw StructureError("reference mesh is not nested in the coarse mesh");
      const auto& ctri = coarse.mesh.triangles[ct];
      const Point a = coarse.mesh.vertices[ctri[0]], b = coarse.mesh.vertices[ctri[1]],
                  cc = coarse.mesh.vertices[ctri[2]];
      const Point p = fine.mesh.vertices[v];
      const double det = (b.x - a.x) * (cc.y - a.y) - (cc.x - a.x) * (b.y - a.y);
      const double l1 = ((p.x - a.x) * (cc.y - a.y) - (cc.x - a.x) * (p.y - a.y)) / det;
      const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
      if (std::min({1.0 - l1 - l2, l1, l2}) < -1e-10)
        throw StructureError("reference mesh is not nested in the coarse mesh");
    }
    const auto grads = barycentric_gradients(coarse.mesh, ct);
    for (int q = 0; q < fine.num_qp(); ++q) {
      const Point x = fine.qp_point(t, q);
      const auto& ctri = coarse.mesh.triangles[ct];
      const Point a = coarse.mesh.vertices[ctri[0]];
      std::array<double, 3> l;
      l[1] = grads[1][0] * (x.x - a.x) + grads[1][1] * (x.y - a.y);
      l[2] = grads[2][0] * (x.x - a.x) + grads[2][1] * (x.y - a.y);
      l[0] = 1.0 - l[1] - l[2];
      samples_.push_back({ct, evaluate_basis(grads, l)});
    }
  }
  segment_map_.resize(fine.surface.size());
  for (int s = 0; s < fine.surface.size(); ++s) {
    const double mid = 0.5 * (fine.surface.left(s) + fine.surface.right(s));
    const int cs = coarse.surface.segment_of(mid);
    if (fine.surface.left(s) < coarse.surface.left(cs) - 1e-12 ||
        fine.surface.right(s) > coarse.surface.right(cs) + 1e-12)
      throw StructureError("reference surface grid is not nested in the coarse one");
    segment_map_[s] = cs;
  }
}

void ErrorAccumulator::add(const State& cs, const State& fs, double tau) {
  const DofLayout& CL = coarse_.layout;
  const DofLayout& FL = fine_.layout;
  double u2 = 0.0, g2 = 0.0;
  const int nt = static_cast<int>(fine_.mesh.triangles.size());
  for (int t = 0; t < nt; ++t)
    for (int q = 0; q < fine_.num_qp(); ++q) {
      const Sample& smp = samples_[static_cast<std::size_t>(t) * fine_.num_qp() + q];
      const BasisEval& fb = fine_.basis_at(t, q);
      const double w = fine_.qp_weight(t, q);
      for (int c = 0; c < 2; ++c) {
        double e = 0.0, gx = 0.0, gy = 0.0;
        for (int a = 0; a < 4; ++a) {
          const double uc = cs.u[CL.local_velocity_dof(coarse_.mesh, smp.coarse_tri, a, c)];
          const double uf = fs.u[FL.local_velocity_dof(fine_.mesh, t, a, c)];
          e += uc * smp.basis.value[a] - uf * fb.value[a];
          gx += uc * smp.basis.grad[a][0] - uf * fb.grad[a][0];
          gy += uc * smp.basis.grad[a][1] - uf * fb.grad[a][1];
        }
        u2 += w * e * e;
        g2 += w * (gx * gx + gy * gy);
      }
    }

  const SurfaceMesh& FS = fine_.surface;
  const SurfaceMesh& CS = coarse_.surface;
  const std::vector<double> cxi = cs.xi(CL), fxi = fs.xi(FL);
  const std::vector<double>& cd = cs.displacement_now();
  const std::vector<double>& fd = fs.displacement_now();
  const std::vector<double> cz = discrete_laplace(CS, cd), fz = discrete_laplace(FS, fd);
  const auto& gr = gauss5();
  double xi2 = 0.0, eta2 = 0.0, deta2 = 0.0, z2 = 0.0;
  for (int s = 0; s < FS.size(); ++s) {
    const int c = segment_map_[s];
    const double h = FS.width(s), x0 = FS.left(s);
    const int fn = FS.next(s);
    const double fslope = (fd[fn] - fd[s]) / h;
    const double cslope = (cd[CS.next(c)] - cd[c]) / CS.width(c);
    deta2 += h * (cslope - fslope) * (cslope - fslope);
    for (std::size_t q = 0; q < gr.points.size(); ++q) {
      const double r = gr.points[q], w = gr.weights[q] * h, x = x0 + r * h;
      const double r_c = (x - CS.left(c)) / CS.width(c);
      auto fine_at = [&](const std::vector<double>& f) { return f[s] * (1.0 - r) + f[fn] * r; };
      auto coarse_at = [&](const std::vector<double>& f) {
        return f[c] * (1.0 - r_c) + f[CS.next(c)] * r_c;
      };
      const double exi = coarse_at(cxi) - fine_at(fxi);
      const double eeta = coarse_at(cd) - fine_at(fd);
      const double ez = coarse_at(cz) - fine_at(fz);
      xi2 += w * exi * exi;
      eta2 += w * eeta * eeta;
      z2 += w * ez * ez;
    }
  }
  acc_.u_linf_l2 = std::max(acc_.u_linf_l2, std::sqrt(u2));
  acc_.xi_linf_l2 = std::max(acc_.xi_linf_l2, std::sqrt(xi2));
  acc_.eta_linf_l2 = std::max(acc_.eta_linf_l2, std::sqrt(eta2));
  acc_.deta_linf_l2 = std::max(acc_.deta_linf_l2, std::sqrt(deta2));
  acc_.zeta_linf_l2 = std::max(acc_.zeta_linf_l2, std::sqrt(z2));
  grad_sum_ += tau * g2;
  u_sum_ += tau * u2;
}

ErrorRow ErrorAccumulator::result() const {
  ErrorRow r = acc_;
  r.grad_u_l2_l2 = std::sqrt(grad_sum_);
  r.u_l2_l2 = std::sqrt(u_sum_);
  return r;
}

ErrorRow error_norms(const Discretization& coarse, std::span<const State> coarse_traj,
                     const Discretization& fine, std::span<const State> ref_traj, double tau) {
  ErrorAccumulator acc(coarse, fine);
  std::size_t j = 0;
  for (const State& c : coarse_traj) {
    if (c.step == 0) continue;
    while (j < ref_traj.size() && ref_traj[j].t < c.t - 1e-9 * std::max(1.0, c.t)) ++j;
    if (j == ref_traj.size() || std::abs(ref_traj[j].t - c.t) > 1e-9 * std::max(1.0, c.t))
      throw StructureError("reference trajectory has no sample at t = " + std::to_string(c.t));
    acc.add(c, ref_traj[j], tau);
  }
  return acc.result();
}

double fit_rate(std::span<const double> params, std::span<const double> errors) {
  if (params.size() != errors.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (params.size() < 3) throw std::invalid_argument("fit_rate needs at least 3 points");
  const double n = static_cast<double>(params.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!(params[i] > 0.0) || !(errors[i] > 0.0))
      throw std::invalid_argument("fit_rate needs positive values");
    const double x = std::log(params[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_error_table(std::ostream& os, const std::string& param_name,
                       std::span<const double> params, std::span<const ErrorRow> rows) {
  os << param_name;
  for (int c = 0; c < ErrorRow::kColumns; ++c) os << ',' << ErrorRow::column_name(c);
  os << '\n' << std::setprecision(6) << std::scientific;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << params[i];
    for (int c = 0; c < ErrorRow::kColumns; ++c) os << ',' << rows[i].column(c);
    os << '\n';
  }
  if (rows.size() >= 3) {
    os << "slope";
    for (int c = 0; c < ErrorRow::kColumns; ++c) {
      std::vector<double> e;
      for (const auto& r : rows) e.push_back(r.column(c));
      os << ',' << std::fixed << std::setprecision(3) << fit_rate(params, e) << std::scientific;
    }
    os << '\n';
  }
  os << std::defaultfloat;
}

}  // namespace fsi
