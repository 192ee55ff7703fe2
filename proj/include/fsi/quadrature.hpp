#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace fsi {

/// Symmetric rules on the reference triangle (0,0), (1,0), (0,1); weights
/// sum to its area 1/2. Points are barycentric (l0, l1, l2).
struct TriangleRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct SegmentRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

struct QuadratureRule {
  TriangleRule triangle;
  SegmentRule segment;
};

/// Rule exact for polynomials of total degree <= `degree` (1..6).
/// Throws std::invalid_argument otherwise.
QuadratureRule quadrature_rule(int degree);

const TriangleRule& triangle_rule(int degree);
/// Five-point Gauss-Legendre, exact to degree 9.
const SegmentRule& gauss5();

}  // namespace fsi
