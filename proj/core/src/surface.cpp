#include "toda/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "toda/quadrature.hpp"

namespace toda::surface {

namespace {

// Orientation of the b-cycle loop around the left band; fixed so that the
// jump of g across the gap equals -(U + xi Lambda) (checked by periods()).
constexpr double kBCycleSign = 1.0;

JoukovskiMap right_map() { return JoukovskiMap{0.5, 0.0}; }

// R(lambda) = (l-e1)(l-e2)(e3-l)(e4-l); positive on the gap and outside the
// convex hull of the spectrum, negative on the bands.
double rpoly(double l, const TwoBandSpectrum& sp) {
  return (l - sp.e1) * (l - sp.e2) * (-1.0 - l) * (1.0 - l);
}

// Positive branch on the gap (the sign convention with (l-n1)(l-n2)/R^{1/2}
// -> -1 at +infinity makes R^{1/2} > 0 between the bands).
double rsqrt_gap(double l, const TwoBandSpectrum& sp) {
  return std::sqrt(rpoly(l, sp));
}

// Polynomial extrapolation to r = 0 from samples (r_i, v_i).
cplx extrapolate_to_zero(const std::vector<double>& rs, const std::vector<cplx>& vs) {
  cplx acc = 0.0;
  for (size_t i = 0; i < rs.size(); ++i) {
    double w = 1.0;
    for (size_t j = 0; j < rs.size(); ++j)
      if (j != i) w *= -rs[j] / (rs[i] - rs[j]);
    acc += w * vs[i];
  }
  return acc;
}

// Gap integral of f with the full weight 1/R^{1/2} (both endpoints singular).
double gap_integral(const std::function<double(double)>& f,
                    const TwoBandSpectrum& sp) {
  auto smooth = [&](double l) {
    return f(l) / std::sqrt((l - sp.e1) * (1.0 - l));
  };
  return quad::chebyshev(smooth, sp.e2, -1.0);
}

// Left-band integral of f with weight 1/|R|^{1/2}.
double band_integral(const std::function<double(double)>& f,
                     const TwoBandSpectrum& sp) {
  auto smooth = [&](double l) {
    return f(l) / std::sqrt((-1.0 - l) * (1.0 - l));
  };
  return quad::chebyshev(smooth, sp.e1, sp.e2);
}

struct GPath {
  std::vector<cplx> pts;  // polyline from 1 to the target
};

GPath g_path(const cplx& z, int side) {
  GPath p;
  p.pts.push_back(1.0);
  const bool positive_real = z.imag() == 0.0 && z.real() > 0.0;
  if (!positive_real) {
    double r = std::max(1.0, 1.3 * std::abs(z));
    double sgn = (side != 0) ? side : (z.imag() >= 0.0 ? 1.0 : -1.0);
    p.pts.push_back(cplx(0.0, sgn * r));
  }
  p.pts.push_back(z);
  return p;
}

// Returns the branch point matching z, or NaN.
double branch_point_near(const cplx& z, const TwoBandSpectrum& sp) {
  const double eps = 1e-13;
  for (double bp : {sp.q, sp.q1, 1.0 / sp.q, 1.0 / sp.q1})
    if (std::abs(z - bp) < eps) return bp;
  return std::numeric_limits<double>::quiet_NaN();
}

bool is_branch_point(const cplx& z, const TwoBandSpectrum& sp) {
  return !std::isnan(branch_point_near(z, sp));
}

// phat with the sqrt(z - bp) factor removed (bp must be one of the roots).
cplx phat_omit(const cplx& z, const TwoBandSpectrum& sp, double bp) {
  cplx prod = 1.0;
  for (double r : {sp.q, sp.q1, 1.0 / sp.q, 1.0 / sp.q1})
    if (r != bp) prod *= std::sqrt(z - r);
  return prod;
}

}  // namespace

TwoBandSpectrum::TwoBandSpectrum(double a_, double b_) : a(a_), b(b_) {
  if (a <= 0.0) throw ConfigError("spectrum: a must be positive");
  e1 = b - 2.0 * a;
  e2 = b + 2.0 * a;
  if (!(e2 < -1.0)) throw ConfigError("spectrum: b + 2a < -1 required");
  const JoukovskiMap jm = right_map();
  q = jm.z(cplx(e1, 0.0)).real();
  q1 = jm.z(cplx(e2, 0.0)).real();
}

cplx phat(const cplx& z, const TwoBandSpectrum& sp) {
  return std::sqrt(z - sp.q) * std::sqrt(z - sp.q1) * std::sqrt(z - 1.0 / sp.q) *
         std::sqrt(z - 1.0 / sp.q1);
}

std::pair<double, double> gammas(const TwoBandSpectrum& sp) {
  const double i0 = gap_integral([](double) { return 1.0; }, sp);
  const double i1 = gap_integral([](double l) { return l; }, sp);
  const double i2 = gap_integral([](double l) { return l * l; }, sp);
  return {i2 / i0, i1 / i0};
}

SurfaceContext SurfaceContext::build(const TwoBandSpectrum& sp) {
  SurfaceContext ctx;
  ctx.sp_ = sp;

  auto [g1, g2] = gammas(sp);
  ctx.gamma1_ = g1;
  ctx.gamma2_ = g2;

  const double i0 = gap_integral([](double) { return 1.0; }, sp);
  ctx.zeta_norm_ = 1.0 / (2.0 * i0);

  // b-periods: the loop around the left band evaluates to 2i times the band
  // integral of the density against 1/|R|^{1/2}.
  ctx.tau_im_ = kBCycleSign * 2.0 * ctx.zeta_norm_ *
                band_integral([](double) { return 1.0; }, sp);
  ctx.lambda_im_ = kBCycleSign * 2.0 *
                   band_integral([&](double l) { return l - g2; }, sp);
  ctx.u_im_ = kBCycleSign * 2.0 *
              band_integral([&](double l) { return l * l - sp.b * l + (sp.b * g2 - g1); }, sp);

  // A(infinity_+): path from b-2a to -infinity along the real axis, where the
  // upper-sheet branch is -sqrt(R).
  auto f_inf = [&](double l) { return 1.0 / std::sqrt(rpoly(l, sp)); };
  auto f_inf_reg = [&](double l) {
    return 1.0 / std::sqrt((sp.e2 - l) * (-1.0 - l) * (1.0 - l));
  };
  double ai = quad::sqrt_endpoint_regular(f_inf_reg, sp.e1 - 1.0, sp.e1, sp.e1) +
              quad::tail_to_minus_inf(f_inf, sp.e1 - 1.0);
  ctx.abel_inf_ = ctx.zeta_norm_ * ai;

  ctx.xi_left_ = sp.b + (1.0 - g1) / (1.0 + g2);
  ctx.xi_right_ = sp.b + (g1 - sp.e2 * sp.e2) / (sp.e2 - g2);

  Capacity cap = ::toda::surface::capacity(sp);
  ctx.capacity_ = cap.a_tilde;
  ctx.b_tilde_ = cap.b_tilde;
  return ctx;
}

double SurfaceContext::gap_abel(double lambda) const {
  const TwoBandSpectrum& sp = sp_;
  if (lambda <= sp.e2) return 0.0;
  if (lambda >= -1.0) return 0.5;
  const double mid = 0.5 * (sp.e2 - 1.0);
  if (lambda <= mid) {
    auto f = [&](double l) {
      return 1.0 / std::sqrt((l - sp.e1) * (-1.0 - l) * (1.0 - l));
    };
    return zeta_norm_ * quad::sqrt_endpoint_regular(f, sp.e2, lambda, sp.e2);
  }
  // Approach -1 from the regular side: 1/2 minus the remaining piece.
  auto f = [&](double l) {
    return 1.0 / std::sqrt((l - sp.e1) * (l - sp.e2) * (1.0 - l));
  };
  return 0.5 - zeta_norm_ * quad::sqrt_endpoint_regular(f, lambda, -1.0, -1.0);
}

GapPoint SurfaceContext::a_cycle_point(double s) const {
  s -= std::floor(s);
  GapPoint p;
  p.s = s;
  p.upper = s <= 0.5;
  const double target = p.upper ? s : 1.0 - s;
  double lo = sp_.e2, hi = -1.0;
  if (target <= 0.0) {
    p.lambda = sp_.e2;
    return p;
  }
  if (target >= 0.5) {
    p.lambda = -1.0;
    return p;
  }
  for (int it = 0; it < 100; ++it) {
    double m = 0.5 * (lo + hi);
    if (gap_abel(m) < target)
      lo = m;
    else
      hi = m;
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(lo))) break;
  }
  p.lambda = 0.5 * (lo + hi);
  return p;
}

cplx SurfaceContext::abel_map(const GapPoint& p) const {
  return cplx(p.s, -0.5 * tau_im_);
}

MuPair mu_pair(double xi, const SurfaceContext& ctx) {
  const double b = ctx.spectrum().b;
  const double disc = (b - xi) * (b - xi) +
                      4.0 * (ctx.gamma1() + (xi - b) * ctx.gamma2());
  if (disc < 0.0) throw Error("mu_pair: negative discriminant");
  const double root = std::sqrt(disc);
  return MuPair{0.5 * (b - xi - root), 0.5 * (b - xi + root)};
}

std::pair<double, double> sector_bounds(const SurfaceContext& ctx) {
  return {ctx.xi_left(), ctx.xi_right()};
}

double mu_zero(double xi, const SurfaceContext& ctx) {
  const TwoBandSpectrum& sp = ctx.spectrum();
  const MuPair mu = mu_pair(xi, ctx);
  auto F = [&](double m0) {
    auto f = [&](double l) {
      return (l - mu.mu1) * (l - mu.mu2) /
             std::sqrt((l - sp.e1) * (l - sp.e2) * (1.0 - l));
    };
    return quad::sqrt_endpoint_regular(f, m0, -1.0, -1.0);
  };
  double lo = std::max(mu.mu1, sp.e2) + 1e-12;
  double hi = std::min(mu.mu2, -1.0) - 1e-12;
  double flo = F(lo), fhi = F(hi);
  if (flo * fhi > 0.0) throw BracketError("mu_zero: no sign change in (mu1, mu2)");
  for (int it = 0; it < 80; ++it) {
    double m = 0.5 * (lo + hi);
    double fm = F(m);
    if (flo * fm <= 0.0) {
      hi = m;
      fhi = fm;
    } else {
      lo = m;
      flo = fm;
    }
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct GIntegrand {
  cplx y1, y1i, y2, y2i;
  double xi;
  const TwoBandSpectrum* sp;

  cplx num(const cplx& s) const {
    return (s - y1) * (s - y1i) * (s - y2) * (s - y2i);
  }
  cplx raw(const cplx& s) const { return num(s) / (2.0 * s * s * phat(s, *sp)); }
  // raw minus the singular part 1/(2 s^2) + xi / s, regular near the origin.
  cplx reg(const cplx& s) const { return raw(s) - 0.5 / (s * s) - xi / s; }
  // reg * sqrt(s - bp), with the vanishing root cancelled analytically.
  cplx reg_reduced(const cplx& s, double bp) const {
    return num(s) / (2.0 * s * s * phat_omit(s, *sp, bp)) -
           (0.5 / (s * s) + xi / s) * std::sqrt(s - bp);
  }
};

GIntegrand make_g_integrand(double xi, const SurfaceContext& ctx) {
  const MuPair mu = mu_pair(xi, ctx);
  const JoukovskiMap jm = right_map();
  GIntegrand gi;
  gi.y1 = jm.z(cplx(mu.mu1, 0.0));
  gi.y2 = jm.z(cplx(mu.mu2, 0.0));
  gi.y1i = 1.0 / gi.y1;
  gi.y2i = 1.0 / gi.y2;
  gi.xi = xi;
  gi.sp = &ctx.spectrum();
  return gi;
}

cplx g_along_path(const GPath& path, const GIntegrand& gi) {
  cplx total = 0.0;
  cplx logsum = 0.0;
  for (size_t k = 0; k + 1 < path.pts.size(); ++k) {
    const cplx a = path.pts[k], b = path.pts[k + 1];
    const bool last = (k + 2 == path.pts.size());
    const double bp = last ? branch_point_near(b, *gi.sp)
                           : std::numeric_limits<double>::quiet_NaN();
    if (!std::isnan(bp)) {
      // reverse the segment so the singular endpoint sits at the start
      auto f = [&](const cplx& s) { return gi.reg_reduced(s, bp); };
      total -= quad::segment_inv_sqrt(f, b, a);
    } else {
      auto f = [&](const cplx& s) { return gi.reg(s); };
      total += quad::segment(f, a, b);
    }
    logsum += std::log(b / a);  // straight segments never wind about 0
  }
  const cplx z = path.pts.back();
  return total + (0.5 - 0.5 / z) + gi.xi * logsum;
}

}  // namespace

cplx g_eval(const cplx& z, double xi, const SurfaceContext& ctx) {
  const TwoBandSpectrum& sp = ctx.spectrum();
  if (z.imag() == 0.0 && z.real() >= 1.0 / sp.q && z.real() <= sp.q &&
      !is_branch_point(z, sp))
    throw BranchError("g_eval: real point inside the cut needs g_eval_side");
  return g_along_path(g_path(z, 0), make_g_integrand(xi, ctx));
}

cplx g_eval_side(double x, int side, double xi, const SurfaceContext& ctx) {
  return g_along_path(g_path(cplx(x, 0.0), side), make_g_integrand(xi, ctx));
}

Periods periods(const SurfaceContext& ctx, double xi) {
  Periods p;
  p.lambda_im = ctx.lambda_im();
  p.u_im = ctx.u_im();
  const TwoBandSpectrum& sp = ctx.spectrum();
  const double two_pi = 2.0 * std::acos(-1.0);
  const cplx expected = -cplx(0.0, ctx.u_im() + xi * ctx.lambda_im());
  double worst = 0.0;
  const int m = 20;
  for (int k = 1; k <= m; ++k) {
    const double x = -1.0 + (sp.q1 + 1.0) * k / (m + 1.0);
    // The two approach paths wind oppositely about the log point at the
    // origin; remove the resulting 2 pi i xi before comparing with the
    // b-period jump (invisible in exp(t g) since t xi is an integer).
    const cplx jump = g_eval_side(x, -1, xi, ctx) - g_eval_side(x, +1, xi, ctx) +
                      cplx(0.0, two_pi * xi);
    worst = std::max(worst, std::abs(jump - expected));
  }
  p.jump_check = worst;
  return p;
}

cplx k_const_full(double xi, const SurfaceContext& ctx) {
  auto v = [&](double r) {
    const cplx phi = 0.5 * (r - 1.0 / r) + xi * std::log(r);
    return phi - g_eval(cplx(r, 0.0), xi, ctx);
  };
  // Three-point extrapolation: the two-point version at {1e-3, 1e-4} leaves a
  // quadratic residual of a few 1e-6, too coarse for the downstream checks.
  const std::vector<double> rs{1e-3, 1e-4, 1e-5};
  std::vector<cplx> vs;
  for (double r : rs) vs.push_back(v(r));
  return extrapolate_to_zero(rs, vs);
}

double k_const(double xi, const SurfaceContext& ctx) {
  return k_const_full(xi, ctx).real();
}

Capacity capacity(const TwoBandSpectrum& sp) {
  auto [g1, g2] = gammas(sp);
  const JoukovskiMap jm = right_map();
  const cplx y3 = jm.z(cplx(g2, 0.0));
  const cplx y3i = 1.0 / y3;
  auto w = [&](const cplx& s) { return (s - y3) * (s - y3i) / (s * phat(s, sp)); };

  const double c = std::min(0.3, 0.5 * std::abs(sp.q));
  auto w_red = [&](const cplx& s) {
    // w * sqrt(s - q) with the vanishing phat factor cancelled
    return (s - y3) * (s - y3i) / (s * phat_omit(s, sp, sp.q));
  };
  auto tail_at = [&](double r) {
    // path q -> q - ic -> -ic -> c, then c -> r with the 1/s part removed
    cplx acc = quad::segment_inv_sqrt(w_red, cplx(sp.q, 0.0), cplx(sp.q, -c));
    acc += quad::segment(w, cplx(sp.q, -c), cplx(0.0, -c));
    acc += quad::segment(w, cplx(0.0, -c), cplx(c, 0.0));
    acc += quad::segment([&](const cplx& s) { return w(s) - 1.0 / s; }, cplx(c, 0.0),
                         cplx(r, 0.0));
    acc += std::log(cplx(r / c, 0.0));
    // finite part: subtract the log of the endpoint
    return acc - std::log(cplx(r, 0.0));
  };
  const std::vector<double> rs{1e-3, 1e-4, 1e-5};
  std::vector<cplx> cv;
  for (double r : rs) cv.push_back(tail_at(r));
  const cplx cq = extrapolate_to_zero(rs, cv);
  const double slope = ((cv[0] - cv[1]) / (rs[0] - rs[1])).real();

  Capacity out;
  out.a_tilde = 0.5 * std::exp(cq.real());
  out.b_tilde = -0.5 * slope;
  return out;
}

SectorPartition xi_partition(const SurfaceContext& ctx,
                             const std::vector<double>& gap_lambdas, double eps) {
  std::vector<double> lams = gap_lambdas;
  std::sort(lams.begin(), lams.end());  // ascending: lambda_1 < ... < lambda_aleph

  SectorPartition part;
  part.xi.push_back(ctx.xi_right());
  const double lo = ctx.xi_left(), hi = ctx.xi_right();
  const double margin = 1e-7 * (hi - lo);
  for (double lam : lams) {
    // mu0 is decreasing in xi, so solve from the rightmost eigenvalue down.
    double a = lo + margin, b = hi - margin;
    for (int it = 0; it < 70; ++it) {
      double m = 0.5 * (a + b);
      if (mu_zero(m, ctx) > lam)
        a = m;
      else
        b = m;
      if (b - a < 1e-12 * std::max(1.0, std::abs(hi))) break;
    }
    part.xi.push_back(0.5 * (a + b));
  }
  // lambda ascending gives xi descending; xi_0 first, then xi_1 > ... > xi_aleph
  std::sort(part.xi.begin() + 1, part.xi.end(), std::greater<double>());
  part.xi.push_back(ctx.xi_left());

  for (size_t j = 1; j < part.xi.size(); ++j) {
    double lo_j = part.xi[j] + eps;
    double hi_j = part.xi[j - 1] - eps;
    part.intervals.emplace_back(lo_j, hi_j);
    part.empty.push_back(!(lo_j < hi_j));
  }
  return part;
}

void save_json(const SurfaceContext& ctx, const std::string& path) {
  nlohmann::json j;
  const TwoBandSpectrum& sp = ctx.spectrum();
  j["a"] = sp.a;
  j["b"] = sp.b;
  j["q"] = sp.q;
  j["q1"] = sp.q1;
  j["gamma1"] = ctx.gamma1();
  j["gamma2"] = ctx.gamma2();
  j["lambda_im"] = ctx.lambda_im();
  j["u_im"] = ctx.u_im();
  j["tau_im"] = ctx.tau_im();
  j["zeta_norm"] = ctx.zeta_norm();
  j["capacity"] = ctx.capacity();
  j["b_tilde"] = ctx.b_tilde();
  j["abel_infinity"] = ctx.abel_infinity();
  j["xi_left"] = ctx.xi_left();
  j["xi_right"] = ctx.xi_right();
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << j.dump(2) << "\n";
}

}  // namespace toda::surface
