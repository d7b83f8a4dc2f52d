#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "toda/errors.hpp"
#include "toda/joukovski.hpp"

namespace toda::surface {

using cplx = std::complex<double>;

/// Two-band spectrum [b-2a, b+2a] U [-1, 1] of the normalized problem, with
/// the z-plane images q = z(b-2a), q1 = z(b+2a) of the left band edges.
struct TwoBandSpectrum {
  double a = 0.0, b = 0.0;
  double e1 = 0.0, e2 = 0.0;  // left band edges b -+ 2a
  double q = 0.0, q1 = 0.0;   // -1 < q1 < q < 0

  TwoBandSpectrum() = default;
  TwoBandSpectrum(double a_, double b_);

  double gap_lo() const { return e2; }
  double gap_hi() const { return -1.0; }
};

/// sqrt((z-q)(z-q1)(z-1/q)(z-1/q1)) with principal factor roots: holomorphic
/// off I U I*, ~ z^2 at infinity, positive on (q, 1].
cplx phat(const cplx& z, const TwoBandSpectrum& sp);

/// Point of the gap part of the surface, parametrized by the a-cycle arc
/// fraction s in [0,1): s in [0,1/2] is the upper-sheet pass b+2a -> -1,
/// s in (1/2,1) returns on the lower sheet.
struct GapPoint {
  double lambda = 0.0;
  bool upper = true;
  double s = 0.0;
};

/// Cached genus-1 quantities for a fixed spectrum. Immutable after build();
/// all evaluators are const and reentrant.
class SurfaceContext {
 public:
  static SurfaceContext build(const TwoBandSpectrum& sp);

  const TwoBandSpectrum& spectrum() const { return sp_; }
  double gamma1() const { return gamma1_; }
  double gamma2() const { return gamma2_; }
  double lambda_im() const { return lambda_im_; }  // Lambda = i * lambda_im
  double u_im() const { return u_im_; }            // U = i * u_im
  double tau_im() const { return tau_im_; }        // tau = i * tau_im
  double zeta_norm() const { return zeta_norm_; }  // c with zeta = c dl / R^{1/2}
  double capacity() const { return capacity_; }    // logarithmic capacity
  double b_tilde() const { return b_tilde_; }
  double abel_infinity() const { return abel_inf_; }
  double xi_left() const { return xi_left_; }      // xi_{aleph+1}
  double xi_right() const { return xi_right_; }    // xi_0

  /// c * integral_{b+2a}^{lambda} of the holomorphic differential along the
  /// upper gap; increases from 0 to 1/2 on [b+2a, -1].
  double gap_abel(double lambda) const;
  GapPoint a_cycle_point(double s) const;

  /// A(p) for a gap point: -tau/2 plus the real arc fraction.
  cplx abel_map(const GapPoint& p) const;

 private:
  TwoBandSpectrum sp_;
  double gamma1_ = 0.0, gamma2_ = 0.0;
  double lambda_im_ = 0.0, u_im_ = 0.0, tau_im_ = 0.0;
  double zeta_norm_ = 0.0;
  double capacity_ = 0.0, b_tilde_ = 0.0;
  double abel_inf_ = 0.0;
  double xi_left_ = 0.0, xi_right_ = 0.0;
  double abel_mid_ = 0.0;  // gap_abel at the gap midpoint, cached
};

std::pair<double, double> gammas(const TwoBandSpectrum& sp);

struct MuPair {
  double mu1, mu2;  // mu1 < mu2
};
MuPair mu_pair(double xi, const SurfaceContext& ctx);

/// (xi_{aleph+1}, xi_0): the xi-interval on which both mu's sit in the gap.
std::pair<double, double> sector_bounds(const SurfaceContext& ctx);

/// Unique root in (mu1, mu2) of integral_{mu0}^{-1} (l-mu1)(l-mu2)/R^{1/2} dl = 0.
double mu_zero(double xi, const SurfaceContext& ctx);

/// g(z, xi) integrated from 1 along a cut-avoiding path. For z on the real
/// axis inside [1/q, q] use g_eval_side.
cplx g_eval(const cplx& z, double xi, const SurfaceContext& ctx);
cplx g_eval_side(double x, int side, double xi, const SurfaceContext& ctx);

struct Periods {
  double lambda_im = 0.0;
  double u_im = 0.0;
  double jump_check = 0.0;  // max over J of |g_+ - g_- + U + xi Lambda|
};
Periods periods(const SurfaceContext& ctx, double xi);

/// K(xi) = lim_{z->0} (Phi - g), evaluated at |z| in {1e-3, 1e-4} on the
/// positive axis with Richardson extrapolation.
cplx k_const_full(double xi, const SurfaceContext& ctx);
double k_const(double xi, const SurfaceContext& ctx);

struct Capacity {
  double a_tilde = 0.0;
  double b_tilde = 0.0;
};
Capacity capacity(const TwoBandSpectrum& sp);

struct SectorPartition {
  std::vector<double> xi;  // xi_0 > xi_1 > ... > xi_{aleph+1}
  std::vector<std::pair<double, double>> intervals;  // I_eps^j, j = 1..aleph+1
  std::vector<bool> empty;
};

/// Solves mu0(xi_j) = lambda_j for each gap eigenvalue and trims by eps.
SectorPartition xi_partition(const SurfaceContext& ctx,
                             const std::vector<double>& gap_lambdas, double eps);

void save_json(const SurfaceContext& ctx, const std::string& path);

}  // namespace toda::surface
