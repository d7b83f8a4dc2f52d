#include "toda/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace toda::scattering {

namespace {

constexpr double kSeedTol = 1e-6;

cplx pow_int(cplx base, long e) {
  if (e < 0) return 1.0 / pow_int(base, -e);
  cplx r = 1.0;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

JoukovskiMap right_map(const lattice::SteplikeLattice& s) {
  return JoukovskiMap{s.backgrounds().a_plus, s.backgrounds().b_plus};
}
JoukovskiMap left_map(const lattice::SteplikeLattice& s) {
  return JoukovskiMap{s.backgrounds().a_minus, s.backgrounds().b_minus};
}

}  // namespace

cplx JostSolution::psi(int n) const {
  return scaled_at(n) * pow_int(base, right ? n : -static_cast<long>(n));
}

JostSolution jost_right(const cplx& z, const lattice::SteplikeLattice& s, int n_lo) {
  if (std::abs(z) == 0.0) throw Error("jost_right: z = 0");
  const int hi = s.n_max();
  if (n_lo >= hi) throw WindowError("jost_right: n_lo beyond window");
  const auto& bg = s.backgrounds();
  if (std::abs(s.a(hi) - bg.a_plus) + std::abs(s.b(hi) - bg.b_plus) > kSeedTol)
    throw WindowError("jost_right: seed row not on background");

  const cplx lam = right_map(s).lambda(z);
  JostSolution j;
  j.lo = n_lo;
  j.hi = hi + 1;
  j.base = z;
  j.right = true;
  j.vals.assign(j.hi - j.lo + 1, 0.0);
  auto at = [&](int n) -> cplx& { return j.vals[n - j.lo]; };
  at(hi + 1) = 1.0;
  at(hi) = 1.0;
  for (int n = hi; n > n_lo; --n) {
    // a(n-1) psi(n-1) = (lam - b(n)) psi(n) - a(n) psi(n+1), scaled by z^{-(n-1)}
    at(n - 1) = z * ((lam - s.b(n)) * at(n) - s.a(n) * z * at(n + 1)) / s.a(n - 1);
  }
  return j;
}

JostSolution jost_left(const cplx& z, const lattice::SteplikeLattice& s, int n_hi) {
  const int lo = s.n_min();
  if (n_hi <= lo) throw WindowError("jost_left: n_hi before window");
  const auto& bg = s.backgrounds();
  if (std::abs(s.a(lo) - bg.a_minus) + std::abs(s.b(lo) - bg.b_minus) > kSeedTol)
    throw WindowError("jost_left: seed row not on background");

  const cplx lam = right_map(s).lambda(z);
  const cplx zeta = left_map(s).z(lam);
  JostSolution j;
  j.lo = lo - 1;
  j.hi = n_hi;
  j.base = zeta;
  j.right = false;
  j.vals.assign(j.hi - j.lo + 1, 0.0);
  auto at = [&](int n) -> cplx& { return j.vals[n - j.lo]; };
  at(lo - 1) = 1.0;
  at(lo) = 1.0;
  for (int n = lo; n < n_hi; ++n) {
    // a(n) psi(n+1) = (lam - b(n)) psi(n) - a(n-1) psi(n-1), scaled by zeta^{n+1}
    at(n + 1) = zeta * ((lam - s.b(n)) * at(n) - s.a(n - 1) * zeta * at(n - 1)) / s.a(n);
  }
  return j;
}

cplx wronskian_at(const cplx& z, const lattice::SteplikeLattice& s, int n) {
  JostSolution jr = jost_right(z, s, n - 2);
  JostSolution jl = jost_left(z, s, n + 2);
  return s.a(n - 1) * (jl.psi(n - 1) * jr.psi(n) - jr.psi(n - 1) * jl.psi(n));
}

cplx wronskian(const cplx& z, const lattice::SteplikeLattice& s) {
  return wronskian_at(z, s, 0);
}

double wronskian_lambda(double lam, const lattice::SteplikeLattice& s) {
  const cplx z = right_map(s).z(cplx(lam, 0.0));
  return wronskian(z, s).real();
}

std::vector<Eigenvalue> eigenvalues(const lattice::SteplikeLattice& s) {
  const auto& bg = s.backgrounds();
  const double gap_lo = bg.b_minus + 2.0 * bg.a_minus;
  const double gap_hi = bg.b_plus - 2.0 * bg.a_plus;
  const double lo_band = bg.b_minus - 2.0 * bg.a_minus;
  const double hi_band = bg.b_plus + 2.0 * bg.a_plus;
  const double span = hi_band - lo_band;
  const double edge_margin = 2e-3 * span;

  std::vector<double> spec = lattice::jacobi_spectrum(s);
  std::vector<std::pair<double, bool>> candidates;  // (lambda, in_gap)
  for (double lam : spec) {
    if (lam > gap_lo + 1e-12 && lam < gap_hi - 1e-12)
      candidates.emplace_back(lam, true);
    else if (lam < lo_band - 1e-12 || lam > hi_band + 1e-12)
      candidates.emplace_back(lam, false);
  }

  const JoukovskiMap jm = right_map(s);
  std::vector<Eigenvalue> out;
  for (auto [lam0, in_gap] : candidates) {
    // Bracket the Wronskian sign change around the truncated-matrix estimate.
    double h = 1e-6 * std::max(1.0, span);
    double a = lam0 - h, b = lam0 + h;
    double fa = wronskian_lambda(a, s), fb = wronskian_lambda(b, s);
    bool bracketed = fa * fb < 0.0;
    for (int grow = 0; !bracketed && grow < 10; ++grow) {
      h *= 4.0;
      a = lam0 - h;
      b = lam0 + h;
      if (in_gap) {
        a = std::max(a, gap_lo + 1e-12);
        b = std::min(b, gap_hi - 1e-12);
      }
      fa = wronskian_lambda(a, s);
      fb = wronskian_lambda(b, s);
      bracketed = fa * fb < 0.0;
    }
    if (!bracketed) {
      const double edge_dist =
          in_gap ? std::min(lam0 - gap_lo, gap_hi - lam0)
                 : std::min(std::abs(lam0 - lo_band), std::abs(lam0 - hi_band));
      if (edge_dist < edge_margin) continue;  // truncation artifact near a band edge
      throw BracketError("eigenvalues: Wronskian zero not bracketed near lambda = " +
                         std::to_string(lam0));
    }
    for (int it = 0; it < 90; ++it) {
      double m = 0.5 * (a + b);
      double fm = wronskian_lambda(m, s);
      if (fa * fm <= 0.0) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
      if (b - a < 1e-15 * std::max(1.0, std::abs(m))) break;
    }
    Eigenvalue ev;
    ev.lambda = 0.5 * (a + b);
    ev.z = jm.z(cplx(ev.lambda, 0.0)).real();
    ev.in_gap = in_gap;
    ev.gamma = 0.0;
    out.push_back(ev);
  }

  // Gap eigenvalues first in decreasing z; the remaining points follow.
  std::stable_sort(out.begin(), out.end(), [](const Eigenvalue& x, const Eigenvalue& y) {
    if (x.in_gap != y.in_gap) return x.in_gap;
    return x.z > y.z;
  });
  return out;
}

void norming_constants(const lattice::SteplikeLattice& s, std::vector<Eigenvalue>& evs) {
  for (Eigenvalue& ev : evs) {
    const cplx z(ev.z, 0.0);
    JostSolution jr = jost_right(z, s, -2);
    JostSolution jl = jost_left(z, s, 2);

    // Match site: the eigenfunction is proportional to both solutions.
    int n_star = 0;
    double best = -1.0;
    for (int n = -1; n <= 1; ++n) {
      double m = std::min(std::abs(jr.psi(n)), std::abs(jl.psi(n)));
      if (m > best) {
        best = m;
        n_star = n;
      }
    }
    const cplx c = jr.psi(n_star) / jl.psi(n_star);

    double sum = 0.0;
    for (int n = n_star + 1; n <= s.n_max(); ++n) {
      double v = jr.psi(n).real();
      sum += v * v;
    }
    // Geometric tail beyond the window where psi(n) = z^n exactly.
    const double zr = ev.z;
    const double tail_r = std::pow(zr, 2 * (s.n_max() + 1)) / (1.0 - zr * zr);
    sum += tail_r;

    const double zeta = jl.base.real();
    for (int n = s.n_min(); n <= n_star; ++n) {
      double v = (c * jl.psi(n)).real();
      sum += v * v;
    }
    const double cl = std::abs(c);
    const double tail_l =
        cl * cl * std::pow(zeta, 2 * (-s.n_min() + 1)) / (1.0 - zeta * zeta);
    sum += tail_l;

    ev.gamma = 1.0 / sum;
  }
}

double chi_abs(double s_on_I, const lattice::SteplikeLattice& s) {
  const auto& bg = s.backgrounds();
  const JoukovskiMap jm = right_map(s);
  const double lam = jm.lambda(cplx(s_on_I, 0.0)).real();
  const double w = (lam - bg.b_minus) / (2.0 * bg.a_minus);
  if (std::abs(w) >= 1.0)
    throw Error("chi_abs: point not strictly inside I");

  // W(s - i0) by two-offset linear extrapolation.
  const double d1 = 1e-4, d2 = 1e-5;
  const cplx w1 = wronskian(cplx(s_on_I, -d1), s);
  const cplx w2 = wronskian(cplx(s_on_I, -d2), s);
  const cplx w0 = (d1 * w2 - d2 * w1) / (d1 - d2);
  const double aw2 = std::norm(w0);
  const double sin_theta = std::sqrt(1.0 - w * w);
  // The band factors enter through the spectral half-differences
  // a_+ (s - 1/s) and a_- (zeta^{-1} - zeta) = 2 a_- sin(theta); the bare
  // differences would leave a constant a_+ a_- mismatch in the phase
  // constants downstream.
  return bg.a_plus * (s_on_I - 1.0 / s_on_I) * 2.0 * bg.a_minus * sin_theta / aw2;
}

Resonance resonance_classify(const lattice::SteplikeLattice& s, double tol_res) {
  const auto& bg = s.backgrounds();
  const JoukovskiMap jm = right_map(s);
  const double q = jm.z(cplx(bg.b_minus - 2.0 * bg.a_minus, 0.0)).real();
  const double q1 = jm.z(cplx(bg.b_minus + 2.0 * bg.a_minus, 0.0)).real();

  Resonance r;
  r.abs_w_q = std::abs(wronskian(cplx(q, 0.0), s));
  r.abs_w_q1 = std::abs(wronskian(cplx(q1, 0.0), s));
  r.q_resonant = r.abs_w_q < tol_res;
  r.q1_resonant = r.abs_w_q1 < tol_res;
  r.q_indeterminate = !r.q_resonant && r.abs_w_q < 10.0 * tol_res;
  r.q1_indeterminate = !r.q1_resonant && r.abs_w_q1 < 10.0 * tol_res;
  if (r.q_resonant && r.q1_resonant)
    r.ell = 1;
  else if (!r.q_resonant && !r.q1_resonant)
    r.ell = -1;
  else
    r.ell = 0;
  return r;
}

std::vector<ReflectionSample> reflection_samples(const lattice::SteplikeLattice& s,
                                                 int n_grid) {
  const double pi = std::acos(-1.0);
  std::vector<ReflectionSample> out;
  out.reserve(n_grid);
  auto bracket = [&](const JostSolution& f, const JostSolution& g) {
    // a(0) (f(0) g(1) - g(0) f(1))
    return s.a(0) * (f.psi(0) * g.psi(1) - g.psi(0) * f.psi(1));
  };
  for (int k = 0; k < n_grid; ++k) {
    const double th = pi * (k + 0.5) / n_grid;
    const cplx z = std::polar(1.0, th);
    JostSolution jr = jost_right(z, s, -2);
    JostSolution jri = jost_right(1.0 / z, s, -2);
    JostSolution jl = jost_left(z, s, 2);
    const cplx T = bracket(jri, jr) / bracket(jl, jr);
    const cplx R = T * bracket(jl, jri) / bracket(jr, jri);
    out.push_back(ReflectionSample{z, R, T});
  }
  return out;
}

ScatteringData analyze(const lattice::SteplikeLattice& s, const AnalyzeOptions& opt) {
  ScatteringData d;
  const auto& bg = s.backgrounds();
  const JoukovskiMap jm = right_map(s);
  d.q = jm.z(cplx(bg.b_minus - 2.0 * bg.a_minus, 0.0)).real();
  d.q1 = jm.z(cplx(bg.b_minus + 2.0 * bg.a_minus, 0.0)).real();

  d.eigenvalues = eigenvalues(s);
  norming_constants(s, d.eigenvalues);
  d.resonance = resonance_classify(s, opt.tol_res);

  const double pi = std::acos(-1.0);
  for (int k = 0; k < opt.chi_grid; ++k) {
    // Chebyshev-distributed sample points on the open interval (q1, q).
    const double x = std::cos((2.0 * k + 1.0) * pi / (2.0 * opt.chi_grid));
    const double sv = 0.5 * (d.q + d.q1) + 0.5 * (d.q - d.q1) * x;
    d.chi_samples.emplace_back(sv, chi_abs(sv, s));
  }
  d.reflection = reflection_samples(s, opt.reflection_grid);
  return d;
}

void save_json(const ScatteringData& d, const std::string& path) {
  nlohmann::json j;
  j["q"] = d.q;
  j["q1"] = d.q1;
  j["eigenvalues"] = nlohmann::json::array();
  for (const auto& ev : d.eigenvalues)
    j["eigenvalues"].push_back({{"z", ev.z},
                                {"lambda", ev.lambda},
                                {"in_gap", ev.in_gap},
                                {"gamma", ev.gamma}});
  j["resonance"] = {{"q_resonant", d.resonance.q_resonant},
                    {"q1_resonant", d.resonance.q1_resonant},
                    {"q_indeterminate", d.resonance.q_indeterminate},
                    {"q1_indeterminate", d.resonance.q1_indeterminate},
                    {"ell", d.resonance.ell},
                    {"abs_w_q", d.resonance.abs_w_q},
                    {"abs_w_q1", d.resonance.abs_w_q1}};
  j["chi_abs"] = nlohmann::json::array();
  for (auto [sv, cv] : d.chi_samples) j["chi_abs"].push_back({sv, cv});
  j["reflection"] = nlohmann::json::array();
  for (const auto& r : d.reflection)
    j["reflection"].push_back({{"re_z", r.z.real()},
                               {"im_z", r.z.imag()},
                               {"re_r", r.R.real()},
                               {"im_r", r.R.imag()},
                               {"re_t", r.T.real()},
                               {"im_t", r.T.imag()}});
  j["warnings"] = d.warnings;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << j.dump(2) << "\n";
}

ScatteringData load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  nlohmann::json j;
  f >> j;
  ScatteringData d;
  d.q = j.at("q").get<double>();
  d.q1 = j.at("q1").get<double>();
  for (const auto& e : j.at("eigenvalues"))
    d.eigenvalues.push_back(Eigenvalue{e.at("z").get<double>(),
                                       e.at("lambda").get<double>(),
                                       e.at("in_gap").get<bool>(),
                                       e.at("gamma").get<double>()});
  const auto& r = j.at("resonance");
  d.resonance.q_resonant = r.at("q_resonant").get<bool>();
  d.resonance.q1_resonant = r.at("q1_resonant").get<bool>();
  d.resonance.q_indeterminate = r.at("q_indeterminate").get<bool>();
  d.resonance.q1_indeterminate = r.at("q1_indeterminate").get<bool>();
  d.resonance.ell = r.at("ell").get<int>();
  d.resonance.abs_w_q = r.at("abs_w_q").get<double>();
  d.resonance.abs_w_q1 = r.at("abs_w_q1").get<double>();
  for (const auto& c : j.at("chi_abs"))
    d.chi_samples.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  for (const auto& rr : j.at("reflection"))
    d.reflection.push_back(ReflectionSample{
        cplx(rr.at("re_z").get<double>(), rr.at("im_z").get<double>()),
        cplx(rr.at("re_r").get<double>(), rr.at("im_r").get<double>()),
        cplx(rr.at("re_t").get<double>(), rr.at("im_t").get<double>())});
  for (const auto& w : j.at("warnings")) d.warnings.push_back(w.get<std::string>());
  return d;
}

}  // namespace toda::scattering
