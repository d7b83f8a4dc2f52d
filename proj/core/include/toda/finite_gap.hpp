#pragma once

#include "toda/surface.hpp"
#include "toda/theta.hpp"

namespace toda::finitegap {

/// Parameters of the two-band solution with prescribed phase: the initial
/// Dirichlet divisor from Jacobi inversion, the theta truncation order and
/// the winding rates of the divisor in n and t.
struct FiniteGapParams {
  const surface::SurfaceContext* ctx = nullptr;
  double delta = 0.0;
  surface::GapPoint p0;
  double s0 = 0.0;       // a-cycle fraction of p0
  int m_theta = 0;
  double n_rate = 0.0;   // Lambda / (2 pi i)
  double t_rate = 0.0;   // U / (2 pi i)
  double z_base = 0.0;   // A(infinity_+) - A(p0) - Xi collapsed to its real part
};

/// Divisor point with integral_{b+2a}^{p0} zeta = -delta / (2 pi) (mod 1).
surface::GapPoint jacobi_invert(double delta, const surface::SurfaceContext& ctx);

FiniteGapParams make_params(const surface::SurfaceContext& ctx, double delta);

/// Real theta argument Z(n, t) at infinity_+ (the purely imaginary lattice
/// parts cancel against the Riemann constant).
double theta_argument(long n, double t, const FiniteGapParams& p);

/// Moving Dirichlet eigenvalue: solves the inversion problem on the a-cycle.
surface::GapPoint dirichlet_eigenvalue(long n, double t, const FiniteGapParams& p);

struct AB {
  double a_hat, b_hat;
};

/// b_hat = b - lambda(n, t); a_hat = cap * sqrt(th(Z(n-1)) th(Z(n+1))) / th(Z(n)).
AB finite_gap_solution(long n, double t, const FiniteGapParams& p);

}  // namespace toda::finitegap
