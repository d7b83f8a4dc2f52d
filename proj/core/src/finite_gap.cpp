#include "toda/finite_gap.hpp"

#include <cmath>

namespace toda::finitegap {

namespace {
const double kPi = std::acos(-1.0);

double frac(double x) { return x - std::floor(x); }
}  // namespace

surface::GapPoint jacobi_invert(double delta, const surface::SurfaceContext& ctx) {
  return ctx.a_cycle_point(frac(-delta / (2.0 * kPi)));
}

FiniteGapParams make_params(const surface::SurfaceContext& ctx, double delta) {
  FiniteGapParams p;
  p.ctx = &ctx;
  p.delta = delta;
  p.s0 = frac(-delta / (2.0 * kPi));
  p.p0 = ctx.a_cycle_point(p.s0);
  p.m_theta = theta_truncation(ctx.tau_im());
  // Winding rates of the divisor along the a-cycle. The stored periods carry
  // the b-loop orientation that keeps Im tau > 0; the flow direction matching
  // the equations is the opposite one (pinned by the Toda-residual check).
  p.n_rate = -ctx.lambda_im() / (2.0 * kPi);
  p.t_rate = -ctx.u_im() / (2.0 * kPi);
  p.z_base = ctx.abel_infinity() - p.s0 - 0.5;
  return p;
}

double theta_argument(long n, double t, const FiniteGapParams& p) {
  return p.z_base - n * p.n_rate - t * p.t_rate;
}

surface::GapPoint dirichlet_eigenvalue(long n, double t, const FiniteGapParams& p) {
  const double s = frac(p.s0 + n * p.n_rate + t * p.t_rate);
  return p.ctx->a_cycle_point(s);
}

AB finite_gap_solution(long n, double t, const FiniteGapParams& p) {
  const surface::SurfaceContext& ctx = *p.ctx;
  const double tau = ctx.tau_im();
  const double th0 = theta(theta_argument(n, t, p), tau, p.m_theta);
  const double thm = theta(theta_argument(n - 1, t, p), tau, p.m_theta);
  const double thp = theta(theta_argument(n + 1, t, p), tau, p.m_theta);
  if (std::abs(th0) < 1e-13) throw Error("finite_gap_solution: theta vanished");
  if (thm * thp <= 0.0) throw Error("finite_gap_solution: theta ratio not positive");

  AB out;
  out.a_hat = ctx.capacity() * std::sqrt(thm * thp) / th0;
  out.b_hat = ctx.spectrum().b - dirichlet_eigenvalue(n, t, p).lambda;
  return out;
}

}  // namespace toda::finitegap
