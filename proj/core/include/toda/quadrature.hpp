#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "toda/errors.hpp"

namespace toda::quad {

using cplx = std::complex<double>;

/// Gauss-Legendre rule on [-1, 1]. Rules are computed once per order and cached.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

const Rule& gauss_legendre(int n);

struct Options {
  double rel_tol = 1e-11;
  double abs_floor = 1e-15;
  int n0 = 16;             // starting order
  int max_doublings = 12;  // gives up at n0 * 2^max_doublings nodes
};

/// Integral of f over the straight segment [a, b], order-adaptive.
cplx segment(const std::function<cplx(const cplx&)>& f, cplx a, cplx b,
             const Options& opt = {});
double segment(const std::function<double(double)>& f, double a, double b,
               const Options& opt = {});

/// Integral of f(x) / sqrt((x-a)(b-x)) over [a, b] (Gauss-Chebyshev nodes;
/// the inverse-square-root endpoint weight is absorbed exactly).
double chebyshev(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

/// Integral of g over [a, b] where g carries a 1/sqrt(x - e) singularity at the
/// endpoint e (e == a or e == b). Quadratic node clustering at e.
double sqrt_endpoint(const std::function<double(double)>& g, double a, double b,
                     double e, const Options& opt = {});

/// Integral of f(x) / sqrt(|x - e|) over [a, b] with f regular at the endpoint
/// e; the square-root weight is absorbed analytically, so f is never probed on
/// a rounded-to-zero distance.
double sqrt_endpoint_regular(const std::function<double(double)>& f, double a,
                             double b, double e, const Options& opt = {});

/// Same, along a straight complex segment with the singular endpoint at a.
cplx segment_sqrt_endpoint(const std::function<cplx(const cplx&)>& g, cplx a,
                           cplx b, const Options& opt = {});

/// Integral along the segment [a, b] of f(s) / sqrt(s - a), f regular at a;
/// equals 2 sqrt(b - a) * integral of f(a + (b-a) u^2) over u in [0, 1].
cplx segment_inv_sqrt(const std::function<cplx(const cplx&)>& f, cplx a, cplx b,
                      const Options& opt = {});

/// Integral of g over (-inf, a] for g decaying like C / x^2; substitution
/// x = a + 1 - 1/u maps the tail to the unit interval.
double tail_to_minus_inf(const std::function<double(double)>& g, double a,
                         const Options& opt = {});

}  // namespace toda::quad
