#include "support.hpp"

#include <cmath>
#include <numbers>

#include "fsi/quadrature.hpp"
#include "fsi/trace_ops.hpp"

namespace fsi::testing {

State random_state(const Discretization& disc, std::mt19937& rng, double u_amp, double d_amp) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const DofLayout& L = disc.layout;
  State s = zero_state(disc);
  for (int i = 0; i < L.num_velocity(); ++i)
    if (L.velocity_to_system[i] >= 0) s.u[i] = u_amp * U(rng);
  for (auto& v : s.p) v = U(rng);
  for (auto& v : s.z) v = U(rng);
  for (auto* d : {&s.d, &s.d_geom, &s.d_geom_prev})
    for (auto& v : *d) v = d_amp * U(rng);
  return s;
}

Eigen::MatrixXd flat_stokes_oracle(const Discretization& disc, double mu) {
  const Mesh& mesh = disc.mesh;
  const DofLayout& L = disc.layout;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(L.system_size, L.system_size);
  const TriangleRule& rule = triangle_rule(4);
  using T2 = std::array<std::array<double, 2>, 2>;
  auto strain = [](const std::array<double, 2>& grad, int c) {
    T2 e{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) e[i][j] = 0.5 * ((i == c ? grad[j] : 0.0) + (j == c ? grad[i] : 0.0));
    return e;
  };
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const double area2 = 2.0 * mesh.signed_area(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const BasisEval be = evaluate_basis(mesh, t, rule.points[q]);
      const double w = rule.weights[q] * area2;
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 2; ++c) {
          const int row = L.velocity_to_system[L.local_velocity_dof(mesh, t, b, c)];
          if (row < 0) continue;
          const T2 eb = strain(be.grad[b], c);
          for (int a = 0; a < 4; ++a)
            for (int cp = 0; cp < 2; ++cp) {
              const int col = L.velocity_to_system[L.local_velocity_dof(mesh, t, a, cp)];
              if (col < 0) continue;
              const T2 ea = strain(be.grad[a], cp);
              double s = 0.0;
              for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) s += ea[i][j] * eb[i][j];
              A(row, col) += 2.0 * mu * w * s;
            }
          for (int a = 0; a < 3; ++a) {
            const int pcol = L.pressure_index(mesh.dof_vertex[mesh.triangles[t][a]]);
            const double v = -w * be.value[a] * be.grad[b][c];
            A(row, pcol) += v;
            A(pcol, row) += v;
          }
        }
    }
  }
  return A;
}

Eigen::MatrixXd dense(const Eigen::SparseMatrix<double>& A) { return Eigen::MatrixXd(A); }

double convection_skew_defect(const Discretization& disc, std::mt19937& rng) {
  const State prev = random_state(disc, rng);
  PhysicalParams params;
  const LinearSystem sys = assemble_semi_implicit(disc, prev, params, 1e-2, UStar::SchemeR, kConvection);
  const int n = disc.layout.num_free_velocity;
  const Eigen::MatrixXd C = dense(sys.matrix).topLeftCorner(n, n);
  return (C + C.transpose()).cwiseAbs().maxCoeff();
}

double flat_stokes_defect(const Discretization& disc, double mu) {
  PhysicalParams params;
  params.mu = mu;
  const LinearSystem sys =
      assemble_semi_implicit(disc, zero_state(disc), params, 1e-2, UStar::SchemeR, kViscous | kPressure);
  return (dense(sys.matrix) - flat_stokes_oracle(disc, mu)).cwiseAbs().maxCoeff();
}

double riesz_idempotence_defect(const SurfaceMesh& surf, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> v(surf.size());
  for (auto& x : v) x = U(rng);
  auto f = [&](double x) {
    const int s = surf.segment_of(x);
    const double th = (x - surf.left(s)) / surf.width(s);
    return (1.0 - th) * v[s] + th * v[surf.next(s)];
  };
  auto df = [&](double x) {
    const int s = surf.segment_of(x);
    return (v[surf.next(s)] - v[s]) / surf.width(s);
  };
  const TraceField r = riesz_project(surf, f, df);
  double m = 0.0;
  for (int i = 0; i < surf.size(); ++i) m = std::max(m, std::abs(r.values[i] - v[i]));
  return m;
}

double bubble_square_defect(const Discretization& disc) {
  double worst = 0.0;
  for (int t = 0; t < static_cast<int>(disc.mesh.triangles.size()); ++t) {
    double s = 0.0;
    for (int q = 0; q < disc.num_qp(); ++q) s += disc.qp_weight(t, q) * std::pow(disc.basis_at(t, q).value[3], 2);
    const double exact = 81.0 / 560.0 * 2.0 * disc.mesh.signed_area(t);
    worst = std::max(worst, std::abs(s - exact) / exact);
  }
  return worst;
}

double area_defect(const Mesh& mesh) {
  double worst = 0.0;
  Mesh m = mesh;
  for (int l = 0; l < 3; ++l) {
    double sum = 0.0;
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) sum += m.signed_area(t);
    worst = std::max(worst, std::abs(sum - m.length));
    m = refine_uniform(m);
  }
  return worst;
}

std::vector<double> riesz_errors(const std::vector<int>& cells, std::vector<double>* h) {
  using std::numbers::pi;
  std::vector<double> errors;
  for (int n : cells) {
    const SurfaceMesh surf = surface_mesh(build_reference_mesh(2.0, n, 2));
    const TraceField r = riesz_project(surf, [](double x) { return std::sin(pi * x); },
                                       [](double x) { return pi * std::cos(pi * x); });
    const std::vector<double> z = discrete_laplace(surf, std::span<const double>(r.values));
    errors.push_back(trace_l2_error(surf, z, [](double x) { return -pi * pi * std::sin(pi * x); }));
    if (h) h->push_back(2.0 / n);
  }
  return errors;
}

}  // namespace fsi::testing
