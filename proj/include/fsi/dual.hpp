#pragma once

#include <array>
#include <cmath>

namespace fsi {

/// Forward-mode dual number with a fixed number of tangent directions.
/// Element kernels are templated on the scalar so the same code yields
/// residuals (double) and exact local Jacobians (Dual<N>).
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Dual variable(double value, int dir) {
    Dual x(value);
    x.d[dir] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    for (int i = 0; i < N; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
    v *= inv;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator+(Dual a, double b) { a.v += b; return a; }
  friend Dual operator+(double b, Dual a) { a.v += b; return a; }
  friend Dual operator-(Dual a, double b) { a.v -= b; return a; }
  friend Dual operator-(double b, const Dual& a) { return Dual(b) - a; }
  friend Dual operator*(Dual a, double b) { return a *= b; }
  friend Dual operator*(double b, Dual a) { return a *= b; }
  friend Dual operator/(Dual a, double b) { return a *= (1.0 / b); }
  friend Dual operator/(double b, const Dual& a) { return Dual(b) / a; }
  friend Dual operator-(Dual a) {
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    return a;
  }
};

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Dual<N>& x) { return x.v; }

}  // namespace fsi
