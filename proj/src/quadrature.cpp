#include "fsi/quadrature.hpp"

#include <string>

namespace fsi {
namespace {

void add_centroid(TriangleRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.5 * w);
}

void add_orbit3(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  for (const auto& p : {std::array{a, a, b}, std::array{a, b, a}, std::array{b, a, a}}) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

void add_orbit6(TriangleRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const auto& p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c},
                        std::array{b, c, a}, std::array{c, a, b}, std::array{c, b, a}}) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

TriangleRule make_rule(int degree) {
  TriangleRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      add_centroid(r, 1.0);
      break;
    case 2:
      add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
    case 4:
      add_orbit3(r, 0.44594849091596488632, 0.22338158967801146570);
      add_orbit3(r, 0.09157621350977074346, 0.10995174365532186764);
      break;
    case 5:
      add_centroid(r, 0.225);
      add_orbit3(r, 0.47014206410511508977, 0.13239415278850618074);
      add_orbit3(r, 0.10128650732345633880, 0.12593918054482715260);
      break;
    case 6:
      add_orbit3(r, 0.24928674517091042129, 0.11678627572637936603);
      add_orbit3(r, 0.06308901449150222834, 0.050844906370206816921);
      add_orbit6(r, 0.053145049844816947353, 0.31035245103378440542, 0.082851075618373575194);
      break;
    default:
      throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  }
  return r;
}

SegmentRule make_gauss5() {
  SegmentRule s;
  s.degree = 9;
  const double x1 = 0.53846931010568309104, x2 = 0.90617984593866399280;
  const double w0 = 128.0 / 225.0, w1 = 0.47862867049936646804, w2 = 0.23692688505618908751;
  for (auto [x, w] : {std::pair{-x2, w2}, {-x1, w1}, {0.0, w0}, {x1, w1}, {x2, w2}}) {
    s.points.push_back(0.5 * (x + 1.0));
    s.weights.push_back(0.5 * w);
  }
  return s;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const std::array<TriangleRule, 6> rules{make_rule(1), make_rule(2), make_rule(3),
                                                 make_rule(4), make_rule(5), make_rule(6)};
  if (degree < 1 || degree > 6)
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  return rules[degree - 1];
}

const SegmentRule& gauss5() {
  static const SegmentRule rule = make_gauss5();
  return rule;
}

QuadratureRule quadrature_rule(int degree) { return {triangle_rule(degree), gauss5()}; }

}  // namespace fsi
