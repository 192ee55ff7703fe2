#include "fsi/assembly.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "fsi/dual.hpp"

namespace fsi {

void PhysicalParams::validate() const {
  if (!(rho_f > 0.0)) throw std::invalid_argument("rho_f must be positive");
  if (!(rho_s > 0.0)) throw std::invalid_argument("rho_s must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(gamma1 > 0.0)) throw std::invalid_argument("gamma1 must be positive");
  if (!(gamma2 > 0.0)) throw std::invalid_argument("gamma2 must be positive");
  if (!(gamma3 >= 0.0)) throw std::invalid_argument("gamma3 must be non-negative");
  if (!(length > 0.0)) throw std::invalid_argument("length must be positive");
}

int assembly_threads() {
  if (const char* env = std::getenv("FSI_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

Eigen::VectorXd pack(const DofLayout& L, const std::vector<double>& u,
                     const std::vector<double>& p, const std::vector<double>& z) {
  Eigen::VectorXd x(L.system_size);
  for (int i = 0; i < L.num_free_velocity; ++i) x(i) = u[L.system_to_velocity[i]];
  for (int v = 0; v < L.num_vertices; ++v) x(L.pressure_index(v)) = p[v];
  for (int i = 0; i < L.num_top; ++i) x(L.z_index(i)) = z[i];
  return x;
}

void unpack(const DofLayout& L, const Eigen::VectorXd& x, std::vector<double>& u,
            std::vector<double>& p, std::vector<double>& z) {
  u.assign(L.num_velocity(), 0.0);
  p.assign(L.num_vertices, 0.0);
  z.assign(L.num_top, 0.0);
  for (int i = 0; i < L.num_free_velocity; ++i) u[L.system_to_velocity[i]] = x(i);
  for (int v = 0; v < L.num_vertices; ++v) p[v] = x(L.pressure_index(v));
  for (int i = 0; i < L.num_top; ++i) z[i] = x(L.z_index(i));
}

namespace {

constexpr int kMaxVars = 13;
using D13 = Dual<kMaxVars>;
using D4 = Dual<4>;

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw DataError(std::string("non-finite value in ") + what);
}

/// Local unknown slots of one triangle: 8 velocity dofs (basis a, comp c at
/// 2a + c), 3 pressures and, for the implicit geometry, the structure
/// velocity at the two nodes of the triangle's column.
struct ElementVars {
  int n = 0;
  std::array<int, kMaxVars> sys{};
  std::array<int, 8> vel{};
  std::array<int, 3> pres{};
  std::array<int, 2> xi{};

  int slot_of(int s) {
    if (s < 0) return -1;
    for (int i = 0; i < n; ++i)
      if (sys[i] == s) return i;
    sys[n] = s;
    return n++;
  }
};

ElementVars element_vars(const Discretization& disc, int tri, bool with_column) {
  const DofLayout& L = disc.layout;
  ElementVars ev;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 2; ++c)
      ev.vel[2 * a + c] = ev.slot_of(L.velocity_to_system[L.local_velocity_dof(disc.mesh, tri, a, c)]);
  for (int a = 0; a < 3; ++a)
    ev.pres[a] = ev.slot_of(L.pressure_index(disc.mesh.dof_vertex[disc.mesh.triangles[tri][a]]));
  ev.xi = {-1, -1};
  if (with_column) {
    const int seg = disc.columns[tri];
    ev.xi[0] = ev.slot_of(L.top_u2_system[seg]);
    ev.xi[1] = ev.slot_of(L.top_u2_system[disc.surface.next(seg)]);
  }
  return ev;
}

template <class T>
T seeded(double value, int slot) {
  if constexpr (std::is_same_v<T, double>) {
    return value;
  } else {
    return slot >= 0 ? T::variable(value, slot) : T(value);
  }
}

struct FluidInput {
  const Discretization* disc;
  const PhysicalParams* params;
  double tau;
  unsigned terms;
  UStar ustar;
  const GeometryCache* cache;  // frozen geometry of the linear step
  std::array<double, 8> u_old;
  std::array<double, 2> d_old;  // column nodes, implicit geometry only
};

/// Residual of one triangle for the fully implicit step: momentum rows
/// (2a + c) and continuity rows, with the geometry following the structure
/// velocity of the triangle's column.
template <class T>
void fluid_kernel(const FluidInput& in, int tri, const std::array<T, 8>& u,
                  const std::array<T, 3>& p, const std::array<T, 2>& xi_col,
                  std::array<T, 8>& r_vel, std::array<T, 3>& r_p) {
  const Discretization& disc = *in.disc;
  const PhysicalParams& P = *in.params;
  const double tau = in.tau;
  const unsigned terms = in.terms;
  for (auto& r : r_vel) r = T(0.0);
  for (auto& r : r_p) r = T(0.0);

  const int seg = disc.columns[tri];
  const double h = disc.surface.width(seg), x_left = disc.surface.left(seg);

  for (int q = 0; q < disc.num_qp(); ++q) {
    const BasisEval& be = disc.basis_at(tri, q);
    const Point x = disc.qp_point(tri, q);
    const double wq = disc.qp_weight(tri, q);
    const double s = (x.x - x_left) / h;
    const T xi_x = xi_col[0] * (1.0 - s) + xi_col[1] * s;
    const T d_x = (in.d_old[0] * (1.0 - s) + in.d_old[1] * s) + tau * xi_x;
    const T slope = ((in.d_old[1] - in.d_old[0]) + tau * (xi_col[1] - xi_col[0])) / h;
    const T eta = 1.0 + d_x;
    if (!(value_of(eta) > 0.0)) throw ContactError("non-positive fluid height in Newton guess");
    const AleMap<T> ale = ale_from_height(eta, slope, x.y);
    const T& J = ale.J;
    const T& Jdot = xi_x;
    const auto& Fi = ale.Finv;

    // Velocity and its gradient, grad_u[i][j] = d_j u_i.
    std::array<T, 2> uq{T(0.0), T(0.0)};
    Mat2<T> grad_u;
    for (auto& row : grad_u) row = {T(0.0), T(0.0)};
    std::array<double, 2> uo{0.0, 0.0};
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 2; ++c) {
        const T& coef = u[2 * a + c];
        uq[c] += coef * be.value[a];
        grad_u[c][0] += coef * be.grad[a][0];
        grad_u[c][1] += coef * be.grad[a][1];
        uo[c] += in.u_old[2 * a + c] * be.value[a];
      }
    T pq(0.0);
    for (int a = 0; a < 3; ++a) pq += p[a] * be.value[a];

    // G = grad_u F^{-1}, the Eulerian velocity gradient.
    Mat2<T> G;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) G[i][j] = grad_u[i][0] * Fi[0][j] + grad_u[i][1] * Fi[1][j];
    const T trG = G[0][0] + G[1][1];
    Mat2<T> D;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) D[i][j] = 0.5 * (G[i][j] + G[j][i]);

    // Velocity relative to the mesh, (0, x2 dJ/dt).
    const std::array<T, 2> v{uq[0], uq[1] - x.y * xi_x};
    const std::array<T, 2> Fiv{Fi[0][0] * v[0] + Fi[0][1] * v[1], Fi[1][0] * v[0] + Fi[1][1] * v[1]};
    const std::array<T, 2> Gv{grad_u[0][0] * Fiv[0] + grad_u[0][1] * Fiv[1],
                              grad_u[1][0] * Fiv[0] + grad_u[1][1] * Fiv[1]};

    const T JwT = wq * J;
    for (int b = 0; b < 4; ++b) {
      const double Nb = be.value[b];
      // F^{-T} grad N_b and grad N_b . F^{-1} v
      const std::array<T, 2> g{Fi[0][0] * be.grad[b][0] + Fi[1][0] * be.grad[b][1],
                               Fi[0][1] * be.grad[b][0] + Fi[1][1] * be.grad[b][1]};
      const T gradN_Fiv = be.grad[b][0] * Fiv[0] + be.grad[b][1] * Fiv[1];
      for (int c = 0; c < 2; ++c) {
        T r(0.0);
        if (terms & kInertia) r += (P.rho_f / tau * Nb) * JwT * (uq[c] - uo[c]);
        if (terms & kJdot) r += (0.5 * P.rho_f * wq * Nb) * Jdot * uq[c];
        if (terms & kConvection) r += (0.5 * P.rho_f) * JwT * (Gv[c] * Nb - uq[c] * gradN_Fiv);
        if (terms & kViscous) r += (2.0 * P.mu) * JwT * (D[c][0] * g[0] + D[c][1] * g[1]);
        if (terms & kPressure) r -= JwT * pq * g[c];
        r_vel[2 * b + c] += r;
      }
    }
    if (terms & kPressure) {
      const T div = JwT * trG;
      for (int a = 0; a < 3; ++a) r_p[a] -= div * be.value[a];
    }
  }
}

/// Local matrix and right-hand side of one triangle for the linear step on
/// the frozen geometry. Local unknowns: velocity 2a + c (a = 0..3, bubble
/// last), pressure 8 + a.
void linear_kernel(const FluidInput& in, int tri, std::array<std::array<double, 11>, 11>& A,
                   std::array<double, 11>& rhs) {
  const Discretization& disc = *in.disc;
  const PhysicalParams& P = *in.params;
  const double tau = in.tau;
  const unsigned terms = in.terms;
  for (auto& row : A) row.fill(0.0);
  rhs.fill(0.0);
  // Coefficient of u^k in u*, and of u^{k-1} moved to the right-hand side.
  const double star_new = in.ustar == UStar::SchemeR ? -1.0 : 2.0;
  const double star_old = in.ustar == UStar::SchemeR ? 2.0 : -1.0;

  for (int q = 0; q < disc.num_qp(); ++q) {
    const BasisEval& be = disc.basis_at(tri, q);
    const auto& geo = in.cache->at(tri, q);
    const auto& Fi = geo.ale.Finv;
    const double Jw = geo.weight * geo.ale.J;
    const double Jdot_w = geo.weight * geo.Jdot;

    std::array<double, 2> uo{0.0, 0.0};
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 2; ++c) uo[c] += in.u_old[2 * a + c] * be.value[a];
    const std::array<double, 2> v{uo[0] - geo.w[0], uo[1] - geo.w[1]};
    const std::array<double, 2> Fiv{Fi[0][0] * v[0] + Fi[0][1] * v[1],
                                    Fi[1][0] * v[0] + Fi[1][1] * v[1]};

    std::array<std::array<double, 2>, 4> g;  // F^{-T} grad N
    std::array<double, 4> adv;                // grad N . F^{-1} v
    for (int a = 0; a < 4; ++a) {
      g[a] = {Fi[0][0] * be.grad[a][0] + Fi[1][0] * be.grad[a][1],
              Fi[0][1] * be.grad[a][0] + Fi[1][1] * be.grad[a][1]};
      adv[a] = be.grad[a][0] * Fiv[0] + be.grad[a][1] * Fiv[1];
    }

    for (int b = 0; b < 4; ++b) {
      const double Nb = be.value[b];
      for (int a = 0; a < 4; ++a) {
        const double Na = be.value[a];
        double diag = 0.0;  // same-component coupling
        if (terms & kInertia) diag += P.rho_f / tau * Jw * Na * Nb;
        if (terms & kJdot) diag += 0.5 * P.rho_f * Jdot_w * star_new * Na * Nb;
        if (terms & kConvection) diag += 0.5 * P.rho_f * Jw * (adv[a] * Nb - Na * adv[b]);
        const double gg = g[a][0] * g[b][0] + g[a][1] * g[b][1];
        for (int c = 0; c < 2; ++c)
          for (int cp = 0; cp < 2; ++cp) {
            double val = c == cp ? diag : 0.0;
            if (terms & kViscous) val += P.mu * Jw * ((c == cp ? gg : 0.0) + g[a][c] * g[b][cp]);
            A[2 * b + c][2 * a + cp] += val;
          }
      }
      for (int c = 0; c < 2; ++c) {
        double r = 0.0;
        if (terms & kInertia) r += P.rho_f / tau * Jw * uo[c] * Nb;
        if (terms & kJdot) r -= 0.5 * P.rho_f * Jdot_w * star_old * uo[c] * Nb;
        rhs[2 * b + c] += r;
      }
    }
    if (terms & kPressure)
      for (int a = 0; a < 3; ++a) {
        const double Na = be.value[a];
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 2; ++c) {
            A[2 * b + c][8 + a] -= Jw * Na * g[b][c];
            A[8 + a][2 * b + c] -= Jw * Na * g[b][c];
          }
      }
  }
}

struct SurfaceInput {
  const Discretization* disc;
  const PhysicalParams* params;
  double tau;
  double t_new;
  unsigned terms;
  std::array<double, 2> xi_old;
  std::array<double, 2> d_old;
};

/// Plate rows (structure velocity) and z rows of one top segment.
template <class T>
void surface_kernel(const SurfaceInput& in, int seg, const std::array<T, 2>& xi,
                    const std::array<T, 2>& z, std::array<T, 2>& r_xi, std::array<T, 2>& r_z) {
  const PhysicalParams& P = *in.params;
  const SurfaceMesh& S = in.disc->surface;
  const double h = S.width(seg), x0 = S.left(seg), tau = in.tau;
  const std::array<double, 2> dpsi{-1.0 / h, 1.0 / h};
  const T d_slope = (in.d_old[1] - in.d_old[0]) / h + tau * (xi[1] - xi[0]) / h;
  const T xi_slope = (xi[1] - xi[0]) / h;
  const T z_slope = (z[1] - z[0]) / h;
  r_xi = {T(0.0), T(0.0)};
  r_z = {T(0.0), T(0.0)};
  const auto& g = gauss5();
  for (std::size_t q = 0; q < g.points.size(); ++q) {
    const double s = g.points[q], wq = g.weights[q] * h;
    const std::array<double, 2> psi{1.0 - s, s};
    const T xi_q = xi[0] * (1.0 - s) + xi[1] * s;
    const double xi_old_q = in.xi_old[0] * (1.0 - s) + in.xi_old[1] * s;
    const T z_q = z[0] * (1.0 - s) + z[1] * s;
    const double load = (in.terms & kLoad) ? P.forcing(in.t_new, x0 + s * h) : 0.0;
    for (int i = 0; i < 2; ++i) {
      if (in.terms & kStructure) {
        r_xi[i] += wq * (P.rho_s * (xi_q - xi_old_q) / tau * psi[i] +
                         (P.gamma1 * d_slope - P.gamma2 * z_slope + P.gamma3 * xi_slope) * dpsi[i]);
        r_z[i] += wq * (z_q * psi[i] + d_slope * dpsi[i]);
      }
      r_xi[i] -= wq * load * psi[i];
    }
  }
}

struct Scatter {
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd residual;
};

template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int threads = std::min(assembly_threads(), std::max(n, 1));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

struct ElementResult {
  ElementVars vars;
  std::array<int, 11> rows{};  // system row of the local residual entries
  std::array<double, 11> r{};
  std::array<std::array<double, kMaxVars>, 11> jac{};
};

void scatter_elements(const std::vector<ElementResult>& results, bool want_jacobian, Scatter& out) {
  for (const auto& er : results)
    for (int i = 0; i < 11; ++i) {
      const int row = er.rows[i];
      if (row < 0) continue;
      out.residual(row) += er.r[i];
      if (want_jacobian)
        for (int s = 0; s < er.vars.n; ++s) out.triplets.emplace_back(row, er.vars.sys[s], er.jac[i][s]);
    }
}

void element_rows(const Discretization& disc, int tri, ElementResult& er) {
  const DofLayout& L = disc.layout;
  const Mesh& M = disc.mesh;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 2; ++c)
      er.rows[2 * a + c] = L.velocity_to_system[L.local_velocity_dof(M, tri, a, c)];
  for (int a = 0; a < 3; ++a) er.rows[8 + a] = L.pressure_index(M.dof_vertex[M.triangles[tri][a]]);
}

/// Fully implicit element sweep at the full velocity `u` and pressures `p`.
Scatter assemble_fluid_implicit(const Discretization& disc, const FluidInput& proto,
                                const std::vector<double>& u, const std::vector<double>& p,
                                const std::vector<double>& u_old, const std::vector<double>& d_old,
                                bool want_jacobian) {
  const DofLayout& L = disc.layout;
  const Mesh& M = disc.mesh;
  const int nt = static_cast<int>(M.triangles.size());
  std::vector<ElementResult> results(nt);

  parallel_for(nt, [&](int tri) {
    ElementResult& er = results[tri];
    er.vars = element_vars(disc, tri, true);
    element_rows(disc, tri, er);
    FluidInput in = proto;
    std::array<D13, 8> ul;
    std::array<D13, 3> pl;
    std::array<D13, 2> xl;
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 2; ++c) {
        const int dof = L.local_velocity_dof(M, tri, a, c);
        ul[2 * a + c] = seeded<D13>(u[dof], want_jacobian ? er.vars.vel[2 * a + c] : -1);
        in.u_old[2 * a + c] = u_old[dof];
      }
    for (int a = 0; a < 3; ++a)
      pl[a] = seeded<D13>(p[M.dof_vertex[M.triangles[tri][a]]], want_jacobian ? er.vars.pres[a] : -1);
    const int seg = disc.columns[tri];
    const int nodes[2] = {seg, disc.surface.next(seg)};
    for (int k = 0; k < 2; ++k) {
      const int vdof = L.vertex_dof(L.top_vertex[nodes[k]], 1);
      xl[k] = seeded<D13>(u[vdof], want_jacobian ? er.vars.xi[k] : -1);
      in.d_old[k] = d_old[nodes[k]];
    }
    std::array<D13, 8> rv;
    std::array<D13, 3> rp;
    fluid_kernel<D13>(in, tri, ul, pl, xl, rv, rp);
    for (int i = 0; i < 11; ++i) {
      const D13& r = i < 8 ? rv[i] : rp[i - 8];
      er.r[i] = r.v;
      for (int s = 0; s < er.vars.n; ++s) er.jac[i][s] = r.d[s];
    }
  });

  Scatter out;
  out.residual = Eigen::VectorXd::Zero(L.system_size);
  if (want_jacobian) out.triplets.reserve(static_cast<std::size_t>(nt) * 11 * kMaxVars);
  scatter_elements(results, want_jacobian, out);
  return out;
}

/// Linear-step element sweep; the residual holds minus the right-hand side.
Scatter assemble_fluid_linear(const Discretization& disc, const FluidInput& proto,
                              const std::vector<double>& u_old) {
  const DofLayout& L = disc.layout;
  const Mesh& M = disc.mesh;
  const int nt = static_cast<int>(M.triangles.size());
  std::vector<ElementResult> results(nt);

  parallel_for(nt, [&](int tri) {
    ElementResult& er = results[tri];
    er.vars = element_vars(disc, tri, false);
    element_rows(disc, tri, er);
    FluidInput in = proto;
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 2; ++c) in.u_old[2 * a + c] = u_old[L.local_velocity_dof(M, tri, a, c)];
    std::array<std::array<double, 11>, 11> A;
    std::array<double, 11> rhs;
    linear_kernel(in, tri, A, rhs);
    std::array<int, 11> slot;
    for (int i = 0; i < 8; ++i) slot[i] = er.vars.vel[i];
    for (int i = 0; i < 3; ++i) slot[8 + i] = er.vars.pres[i];
    for (int i = 0; i < 11; ++i) {
      er.r[i] = -rhs[i];
      for (int j = 0; j < 11; ++j)
        if (slot[j] >= 0) er.jac[i][slot[j]] = A[i][j];
    }
  });

  Scatter out;
  out.residual = Eigen::VectorXd::Zero(L.system_size);
  out.triplets.reserve(static_cast<std::size_t>(nt) * 11 * 11);
  scatter_elements(results, true, out);
  return out;
}

void assemble_surface(const Discretization& disc, const SurfaceInput& proto,
                      const std::vector<double>& u, const std::vector<double>& z,
                      const std::vector<double>& u_old, const std::vector<double>& d_old,
                      bool want_jacobian, Scatter& out) {
  const DofLayout& L = disc.layout;
  const SurfaceMesh& S = disc.surface;
  for (int seg = 0; seg < S.size(); ++seg) {
    const int nodes[2] = {seg, S.next(seg)};
    SurfaceInput in = proto;
    std::array<D4, 2> xi, zz;
    std::array<int, 4> sys{};
    for (int k = 0; k < 2; ++k) {
      const int vdof = L.vertex_dof(L.top_vertex[nodes[k]], 1);
      sys[k] = L.top_u2_system[nodes[k]];
      sys[2 + k] = L.z_index(nodes[k]);
      xi[k] = (want_jacobian && sys[k] >= 0) ? D4::variable(u[vdof], k) : D4(u[vdof]);
      zz[k] = want_jacobian ? D4::variable(z[nodes[k]], 2 + k) : D4(z[nodes[k]]);
      in.xi_old[k] = u_old[vdof];
      in.d_old[k] = d_old[nodes[k]];
    }
    std::array<D4, 2> r_xi, r_z;
    surface_kernel<D4>(in, seg, xi, zz, r_xi, r_z);
    for (int k = 0; k < 2; ++k) {
      const D4* rows[2] = {&r_xi[k], &r_z[k]};
      const int row_idx[2] = {sys[k], sys[2 + k]};
      for (int m = 0; m < 2; ++m) {
        if (row_idx[m] < 0) continue;
        out.residual(row_idx[m]) += rows[m]->v;
        if (want_jacobian)
          for (int s = 0; s < 4; ++s)
            if (sys[s] >= 0) out.triplets.emplace_back(row_idx[m], sys[s], rows[m]->d[s]);
      }
    }
  }
}

SparseMatrix to_matrix(int n, const std::vector<Eigen::Triplet<double>>& triplets) {
  SparseMatrix A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

void check_prev(const DofLayout& L, const State& prev) {
  if (static_cast<int>(prev.u.size()) != L.num_velocity() ||
      static_cast<int>(prev.d.size()) != L.num_top ||
      static_cast<int>(prev.d_geom.size()) != L.num_top)
    throw DataError("state does not match the discretization");
  check_finite(prev.u, "velocity");
  check_finite(prev.d, "displacement");
  check_finite(prev.d_geom, "displacement history");
}

Scatter full_sweep(const Discretization& disc, const Eigen::VectorXd& guess, const State& prev,
                   const PhysicalParams& params, double tau, unsigned terms, bool want_jacobian) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  const DofLayout& L = disc.layout;
  check_prev(L, prev);
  if (guess.size() != L.system_size) throw DataError("guess vector has the wrong size");
  if (!guess.allFinite()) throw DataError("non-finite value in Newton guess");
  std::vector<double> u, p, z;
  unpack(L, guess, u, p, z);
  FluidInput fin{&disc, &params, tau, terms, UStar::SchemeR, nullptr, {}, {}};
  Scatter sc = assemble_fluid_implicit(disc, fin, u, p, prev.u, prev.d, want_jacobian);
  SurfaceInput sin{&disc, &params, tau, prev.t + tau, terms, {}, {}};
  assemble_surface(disc, sin, u, z, prev.u, prev.d, want_jacobian, sc);
  return sc;
}

}  // namespace

GeometryCache step_geometry(const Discretization& disc, const State& prev, double tau) {
  return build_geometry_cache(disc.mesh, disc.surface, disc.columns, *disc.rule, prev.d,
                              prev.d_geom, tau);
}

LinearSystem assemble_semi_implicit(const Discretization& disc, const State& prev,
                                    const PhysicalParams& params, double tau, UStar ustar,
                                    unsigned terms) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  check_prev(disc.layout, prev);
  const GeometryCache cache = step_geometry(disc, prev, tau);
  return assemble_semi_implicit(disc, cache, prev, params, tau, ustar, terms);
}

LinearSystem assemble_semi_implicit(const Discretization& disc, const GeometryCache& geometry,
                                    const State& prev, const PhysicalParams& params,
                                    double tau, UStar ustar, unsigned terms) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(geometry.min_height > 0.0)) throw ContactError("non-positive fluid height");
  const DofLayout& L = disc.layout;
  check_prev(L, prev);
  FluidInput fin{&disc, &params, tau, terms, ustar, &geometry, {}, {}};
  Scatter sc = assemble_fluid_linear(disc, fin, prev.u);
  // The plate rows are affine in the unknowns and are linearized about zero.
  const std::vector<double> u0(L.num_velocity(), 0.0), z0(L.num_top, 0.0);
  SurfaceInput sin{&disc, &params, tau, prev.t + tau, terms, {}, {}};
  assemble_surface(disc, sin, u0, z0, prev.u, prev.d, true, sc);
  LinearSystem sys;
  sys.matrix = to_matrix(L.system_size, sc.triplets);
  sys.rhs = -sc.residual;
  return sys;
}

Eigen::VectorXd assemble_fully_implicit_residual(const Discretization& disc,
                                                 const Eigen::VectorXd& guess, const State& prev,
                                                 const PhysicalParams& params, double tau,
                                                 unsigned terms) {
  return full_sweep(disc, guess, prev, params, tau, terms, false).residual;
}

SparseMatrix assemble_fully_implicit_jacobian(const Discretization& disc,
                                              const Eigen::VectorXd& guess, const State& prev,
                                              const PhysicalParams& params, double tau,
                                              JacobianMode mode, unsigned terms) {
  if (mode == JacobianMode::Analytic) {
    Scatter sc = full_sweep(disc, guess, prev, params, tau, terms, true);
    return to_matrix(disc.layout.system_size, sc.triplets);
  }
  const int n = disc.layout.system_size;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd x = guess;
  for (int j = 0; j < n; ++j) {
    const double h = 1e-7 * (1.0 + std::abs(guess(j)));
    x(j) = guess(j) + h;
    const Eigen::VectorXd rp = assemble_fully_implicit_residual(disc, x, prev, params, tau, terms);
    x(j) = guess(j) - h;
    const Eigen::VectorXd rm = assemble_fully_implicit_residual(disc, x, prev, params, tau, terms);
    x(j) = guess(j);
    const Eigen::VectorXd col = (rp - rm) / (2.0 * h);
    for (int i = 0; i < n; ++i)
      if (col(i) != 0.0) triplets.emplace_back(i, j, col(i));
  }
  return to_matrix(n, triplets);
}

ResidualJacobian assemble_fully_implicit(const Discretization& disc, const Eigen::VectorXd& guess,
                                         const State& prev, const PhysicalParams& params,
                                         double tau, unsigned terms) {
  Scatter sc = full_sweep(disc, guess, prev, params, tau, terms, true);
  return {sc.residual, to_matrix(disc.layout.system_size, sc.triplets)};
}

}  // namespace fsi
