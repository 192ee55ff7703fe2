#include "fsi/trace_ops.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <stdexcept>

#include "fsi/quadrature.hpp"

namespace fsi {

TraceMatrices trace_matrices(const SurfaceMesh& surf) {
  const int n = surf.size();
  std::vector<Eigen::Triplet<double>> m, k;
  for (int s = 0; s < n; ++s) {
    const int i = s, j = surf.next(s);
    const double h = surf.width(s);
    m.emplace_back(i, i, h / 3.0);
    m.emplace_back(j, j, h / 3.0);
    m.emplace_back(i, j, h / 6.0);
    m.emplace_back(j, i, h / 6.0);
    k.emplace_back(i, i, 1.0 / h);
    k.emplace_back(j, j, 1.0 / h);
    k.emplace_back(i, j, -1.0 / h);
    k.emplace_back(j, i, -1.0 / h);
  }
  TraceMatrices tm;
  tm.mass.resize(n, n);
  tm.stiffness.resize(n, n);
  tm.mass.setFromTriplets(m.begin(), m.end());
  tm.stiffness.setFromTriplets(k.begin(), k.end());
  return tm;
}

std::vector<double> discrete_laplace(const SurfaceMesh& surf, std::span<const double> eta) {
  const TraceMatrices tm = trace_matrices(surf);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass(tm.mass);
  if (mass.info() != Eigen::Success) throw std::runtime_error("trace mass matrix factorization failed");
  const Eigen::Map<const Eigen::VectorXd> e(eta.data(), static_cast<Eigen::Index>(eta.size()));
  const Eigen::VectorXd rhs = -(tm.stiffness * e);
  const Eigen::VectorXd z = mass.solve(rhs);
  return {z.data(), z.data() + z.size()};
}

TraceField discrete_laplace(const SurfaceMesh& surf, const TraceField& eta) {
  return {TraceRole::SecondDerivative, discrete_laplace(surf, eta.values)};
}

TraceField riesz_project(const SurfaceMesh& surf, const std::function<double(double)>& eta,
                         const std::function<double(double)>& deta) {
  const int n = surf.size();
  const auto& g = gauss5();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  for (int s = 0; s < n; ++s) {
    const int i = s, j = surf.next(s);
    const double h = surf.width(s), x0 = surf.left(s);
    A(i, i) += 1.0 / h;
    A(j, j) += 1.0 / h;
    A(i, j) -= 1.0 / h;
    A(j, i) -= 1.0 / h;
    // Mean constraint row and column: int psi_i.
    A(n, i) += 0.5 * h;
    A(n, j) += 0.5 * h;
    A(i, n) += 0.5 * h;
    A(j, n) += 0.5 * h;
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const double x = x0 + g.points[q] * h, w = g.weights[q] * h;
      const double dv = deta(x);
      b(i) += w * dv * (-1.0 / h);
      b(j) += w * dv * (1.0 / h);
      b(n) += w * eta(x);
    }
  }
  const Eigen::VectorXd r = A.partialPivLu().solve(b);
  return {TraceRole::Displacement, std::vector<double>(r.data(), r.data() + n)};
}

double trace_l2_error(const SurfaceMesh& surf, std::span<const double> field,
                      const std::function<double(double)>& f) {
  const auto& g = gauss5();
  double s2 = 0.0;
  for (int s = 0; s < surf.size(); ++s) {
    const double h = surf.width(s), x0 = surf.left(s);
    const double a = field[s], b = field[surf.next(s)];
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const double t = g.points[q];
      const double e = a + t * (b - a) - f(x0 + t * h);
      s2 += g.weights[q] * h * e * e;
    }
  }
  return std::sqrt(s2);
}

double trace_integral(const SurfaceMesh& surf, std::span<const double> field) {
  double s = 0.0;
  for (int i = 0; i < surf.size(); ++i) s += 0.5 * surf.width(i) * (field[i] + field[surf.next(i)]);
  return s;
}

double trace_inner(const SurfaceMesh& surf, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (int i = 0; i < surf.size(); ++i) {
    const int j = surf.next(i);
    const double h = surf.width(i);
    s += h / 6.0 * (2.0 * a[i] * b[i] + a[i] * b[j] + a[j] * b[i] + 2.0 * a[j] * b[j]);
  }
  return s;
}

double trace_grad_inner(const SurfaceMesh& surf, std::span<const double> a,
                        std::span<const double> b) {
  double s = 0.0;
  for (int i = 0; i < surf.size(); ++i) {
    const int j = surf.next(i);
    s += (a[j] - a[i]) * (b[j] - b[i]) / surf.width(i);
  }
  return s;
}

std::vector<double> project_initial_velocity(
    const Mesh& mesh, const DofLayout& layout,
    const std::function<std::array<double, 2>(Point)>& u0) {
  std::vector<double> u(layout.num_velocity(), 0.0);
  for (std::size_t g = 0; g < mesh.vertices.size(); ++g) {
    const int v = mesh.dof_vertex[g];
    const auto val = u0(mesh.vertices[g]);
    u[layout.vertex_dof(v, 0)] = val[0];
    u[layout.vertex_dof(v, 1)] = val[1];
  }
  for (int i = 0; i < layout.num_velocity(); ++i)
    if (layout.dirichlet[i]) u[i] = 0.0;
  return u;
}

}  // namespace fsi
