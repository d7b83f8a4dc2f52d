#include <doctest.h>

#include <cmath>

#include "toda/quadrature.hpp"

using namespace toda;
using quad::cplx;

namespace {

// Brute-force midpoint rule, the independent oracle for the singular
// quadratures below.
double midpoint(const std::function<double(double)>& f, double a, double b,
                long panels) {
  double h = (b - a) / panels;
  double acc = 0.0;
  for (long k = 0; k < panels; ++k) acc += f(a + (k + 0.5) * h);
  return acc * h;
}

}  // namespace

TEST_CASE("chebyshev reproduces the arcsine integral") {
  // integral of 1/sqrt(1-x^2) over [-1,1] = pi
  double v = quad::chebyshev([](double) { return 1.0; }, -1.0, 1.0);
  CHECK(std::abs(v - std::acos(-1.0)) < 1e-12);
}

TEST_CASE("gap integral of 1/R^{1/2} matches a brute-force midpoint rule") {
  // (a, b) = (1/2, -4): R = (l+5)(l+3)(-1-l)(1-l) on the gap (-3, -1)
  auto rs = [](double l) {
    return std::sqrt((l + 5.0) * (l + 3.0) * (-1.0 - l) * (1.0 - l));
  };
  auto smooth = [&](double l) {
    return 1.0 / std::sqrt((l + 5.0) * (1.0 - l));
  };
  double fast = quad::chebyshev(smooth, -3.0, -1.0);
  // Brute force: the sine substitution l = -2 + sin(t) removes the endpoint
  // singularities, then a plain midpoint rule with 1e6 panels applies.
  const double pi = std::acos(-1.0);
  double brute = midpoint(
      [&](double t) { return std::cos(t) / rs(-2.0 + std::sin(t)); },
      -pi / 2.0, pi / 2.0, 1000000);
  CHECK(std::abs(fast - brute) < 1e-8 * std::abs(fast) + 1e-8);
}

TEST_CASE("odd integrand about the gap midpoint vanishes") {
  // band edges -5,-3,-1,1 are symmetric about -2, so the full weight is even
  // there and (l+2) integrates to zero.
  auto g = [](double l) { return (l + 2.0) / std::sqrt((l + 5.0) * (1.0 - l)); };
  double v = quad::chebyshev(g, -3.0, -1.0);
  CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("sqrt_endpoint handles a bare inverse-square-root factor") {
  // integral over [0,1] of 1/sqrt(x) = 2
  double v = quad::sqrt_endpoint([](double x) { return 1.0 / std::sqrt(x); },
                                 0.0, 1.0, 0.0);
  CHECK(std::abs(v - 2.0) < 1e-12);
  // singular at the right end: integral of 1/sqrt(1-x) over [0,1] = 2
  double w = quad::sqrt_endpoint(
      [](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0, 1.0);
  CHECK(std::abs(w - 2.0) < 1e-12);
}

TEST_CASE("tail substitution integrates a rational decay") {
  // integral over (-inf, -1] of 1/x^2 = 1
  double v = quad::tail_to_minus_inf([](double x) { return 1.0 / (x * x); }, -1.0);
  CHECK(std::abs(v - 1.0) < 1e-11);
}

TEST_CASE("complex segment integrates along a path") {
  // integral of 1/s from 1 to i along the straight segment = Log(i) = i pi/2
  cplx v = quad::segment([](const cplx& s) { return 1.0 / s; }, cplx(1.0),
                         cplx(0.0, 1.0));
  CHECK(std::abs(v - cplx(0.0, std::acos(-1.0) / 2.0)) < 1e-12);
}

TEST_CASE("non-convergent integrand raises") {
  quad::Options opt;
  opt.max_doublings = 2;
  // 1/x on (0,1] is not integrable
  CHECK_THROWS_AS(
      quad::segment([](double x) { return 1.0 / x; }, 1e-30, 1.0, opt),
      QuadratureError);
}
