// Acceptance suite: exercises every gate criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "toda/finite_gap.hpp"
#include "toda/lattice.hpp"
#include "toda/phase.hpp"
#include "toda/pipeline.hpp"
#include "toda/scattering.hpp"
#include "toda/surface.hpp"

using namespace toda;
using cplx = std::complex<double>;

namespace {

const double kPi = std::acos(-1.0);
int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int id, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %d: %s (%s) [%.1f s]\n", pass ? "PASS" : "FAIL", id,
              name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

lattice::SteplikeLattice fig1_profile(int half) {
  lattice::SteplikeLattice s(-half, half, lattice::Backgrounds{0.5, -4.0, 0.5, 0.0});
  s.set_b(0, -1.7);
  return s;
}

phase::PhaseInputs make_phase_inputs(const lattice::SteplikeLattice& lat,
                                     const surface::TwoBandSpectrum& sp,
                                     const scattering::ScatteringData& sd) {
  phase::PhaseInputs in;
  in.spec = &sp;
  in.q_resonant = sd.resonance.q_resonant;
  in.q1_resonant = sd.resonance.q1_resonant;
  in.ell = sd.resonance.ell;
  for (const auto& e : sd.eigenvalues) {
    if (e.in_gap)
      in.gap_z.push_back(e.z);
    else if (e.z < 0.0 && e.z > sp.q)
      in.extra_z.push_back(e.z);
  }
  std::sort(in.gap_z.begin(), in.gap_z.end(), std::greater<double>());
  auto cache = std::make_shared<std::map<double, double>>();
  const lattice::SteplikeLattice* lp = &lat;
  in.chi_abs = [lp, cache](double s) {
    auto it = cache->find(s);
    if (it != cache->end()) return it->second;
    double v = scattering::chi_abs(s, *lp);
    (*cache)[s] = v;
    return v;
  };
  return in;
}

// --- criterion 1: g-function identity suite -------------------------------

void criterion_1() {
  Timer timer;
  surface::TwoBandSpectrum sp(0.5, -4.0);
  auto ctx = surface::SurfaceContext::build(sp);
  double worst = 0.0;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ur(-2.2, 2.2);

  for (double xi : {0.1, -0.3}) {
    // antisymmetry g(1/z) = -g(z) on 20 random points
    int done = 0;
    while (done < 20) {
      cplx z(ur(rng), ur(rng));
      if (std::abs(z) < 0.2 || std::abs(z.imag()) < 0.05) continue;
      worst = std::max(worst, std::abs(surface::g_eval(z, xi, ctx) +
                                       surface::g_eval(1.0 / z, xi, ctx)));
      ++done;
    }
    // Re g = 0 on the unit circle and on I
    for (int k = 1; k <= 20; ++k) {
      worst = std::max(worst,
                       std::abs(surface::g_eval(std::polar(1.0, kPi * k / 21.0), xi, ctx).real()));
      const double s = sp.q1 + (sp.q - sp.q1) * k / 21.0;
      worst = std::max(worst, std::abs(surface::g_eval_side(s, +1, xi, ctx).real()));
    }
    // zeros at the outer branch points, modulo the i pi xi log lattice
    for (double bp : {sp.q, 1.0 / sp.q}) {
      const cplx g = surface::g_eval(cplx(bp, 0.0), xi, ctx);
      const double k = std::round(g.imag() / (kPi * xi));
      worst = std::max(worst, std::abs(g - cplx(0.0, k * kPi * xi)));
    }
    // jump across J (20-point grid inside periods())
    worst = std::max(worst, surface::periods(ctx, xi).jump_check);
  }

  const double sec = timer.seconds();
  report(1, "g-function identity suite (propg a-f, zeros mod i.pi.xi)",
         worst <= 1e-7 && sec < 10.0, "max residual " + fmt(worst) + ", limit 1e-7",
         sec);
}

// --- criterion 2: mu / Gamma algebra ---------------------------------------

void criterion_2() {
  Timer timer;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ua(0.2, 1.0), ub(0.0, 2.0);
  double worst_vieta = 0.0, worst_collision = 0.0;
  bool inequalities = true;

  for (int k = 0; k < 20; ++k) {
    const double a = ua(rng);
    const double b = -1.0 - 2.0 * a - 0.3 - ub(rng);
    surface::TwoBandSpectrum sp(a, b);
    auto ctx = surface::SurfaceContext::build(sp);
    const double g1 = ctx.gamma1(), g2 = ctx.gamma2();
    inequalities = inequalities && g1 > 1.0 && g2 < -1.0 && g2 * g2 < g1;

    auto [lo, hi] = surface::sector_bounds(ctx);
    for (int i = 1; i <= 5; ++i) {
      const double xi = lo + (hi - lo) * i / 6.0;
      auto mu = surface::mu_pair(xi, ctx);
      worst_vieta = std::max(worst_vieta, std::abs(mu.mu1 + mu.mu2 - (b - xi)));
      worst_vieta =
          std::max(worst_vieta, std::abs(mu.mu1 * mu.mu2 - ((b - xi) * g2 - g1)));
    }
    worst_collision =
        std::max(worst_collision, std::abs(surface::mu_pair(hi, ctx).mu1 - sp.e2));
    worst_collision =
        std::max(worst_collision, std::abs(surface::mu_pair(lo, ctx).mu2 + 1.0));
  }

  const double sec = timer.seconds();
  report(2, "mu/Gamma algebra (Vieta, inequalities, endpoint collisions)",
         worst_vieta <= 1e-12 && inequalities && worst_collision <= 1e-8,
         "vieta " + fmt(worst_vieta) + ", collisions " + fmt(worst_collision), sec);
}

// --- criterion 3: finite-gap correctness -----------------------------------

void criterion_3() {
  Timer timer;
  auto ctx = surface::SurfaceContext::build(surface::TwoBandSpectrum(0.5, -4.0));
  auto params = finitegap::make_params(ctx, 0.7);

  const double h = 1e-4;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const long n = -10 + i;
    for (int k = 0; k < 20; ++k) {
      const double t = 0.1 + 0.1 * k;
      auto ab_p = finitegap::finite_gap_solution(n, t + h, params);
      auto ab_m = finitegap::finite_gap_solution(n, t - h, params);
      auto ab_0 = finitegap::finite_gap_solution(n, t, params);
      auto ab_l = finitegap::finite_gap_solution(n - 1, t, params);
      auto ab_r = finitegap::finite_gap_solution(n + 1, t, params);
      const double rb = (ab_p.b_hat - ab_m.b_hat) / (2 * h) -
                        2.0 * (ab_0.a_hat * ab_0.a_hat - ab_l.a_hat * ab_l.a_hat);
      const double ra = (ab_p.a_hat - ab_m.a_hat) / (2 * h) -
                        ab_0.a_hat * (ab_r.b_hat - ab_0.b_hat);
      worst = std::max({worst, std::abs(rb), std::abs(ra)});
    }
  }

  double worst_periodic = 0.0;
  for (int n = -10; n < 10; ++n)
    for (int k = 0; k < 20; ++k) {
      const double t = 0.1 + 0.1 * k;
      auto x = finitegap::finite_gap_solution(n, t, params);
      auto y = finitegap::finite_gap_solution(n + 2, t, params);
      worst_periodic = std::max({worst_periodic, std::abs(x.a_hat - y.a_hat),
                                 std::abs(x.b_hat - y.b_hat)});
    }

  const double sec = timer.seconds();
  report(3, "finite-gap flow residual and equal-band periodicity",
         worst <= 1e-6 && worst_periodic <= 1e-10 && sec < 30.0,
         "residual " + fmt(worst) + ", periodicity " + fmt(worst_periodic), sec);
}

// --- criterion 4: phase-jump dual route ------------------------------------

void criterion_4() {
  Timer timer;
  surface::TwoBandSpectrum sp(0.5, -4.0);

  std::vector<std::pair<std::string, lattice::SteplikeLattice>> profiles;
  profiles.emplace_back("fig1", fig1_profile(150));
  {
    lattice::SteplikeLattice s(-150, 150, lattice::Backgrounds{0.5, -4.0, 0.5, 0.0});
    s.set_b(0, -1.7);
    s.set_b(8, -2.6);
    profiles.emplace_back("two wells", std::move(s));
  }
  {
    lattice::SteplikeLattice s(-150, 150, lattice::Backgrounds{0.5, -4.0, 0.5, 0.0});
    s.set_b(0, -1.4);
    s.set_b(7, -2.1);
    s.set_b(-9, -1.2);
    profiles.emplace_back("three sites", std::move(s));
  }
  {
    lattice::SteplikeLattice s(-150, 150, lattice::Backgrounds{0.5, -4.0, 0.5, 0.0});
    s.set_b(0, -2.0);
    s.set_a(3, 0.9);
    s.set_b(6, -1.5);
    profiles.emplace_back("site mix", std::move(s));
  }

  double worst = 0.0;
  int jumps = 0;
  bool multi_ok = true;
  for (auto& [name, lat] : profiles) {
    auto sd = scattering::analyze(lat);
    auto in = make_phase_inputs(lat, sp, sd);
    if (name != "fig1" && in.gap_z.size() < 2) multi_ok = false;
    const int sectors = phase::sector_count(in);
    std::vector<double> deltas(sectors + 1);
    for (int j = 1; j <= sectors; ++j) deltas[j] = phase::delta_j(j, in);
    for (int j = 1; j < sectors; ++j) {
      const double direct = deltas[j] - deltas[j + 1];
      const double closed = phase::delta_jump(j, in);
      worst = std::max(worst, std::abs(std::remainder(direct - closed, 2.0 * kPi)));
      ++jumps;
    }
  }

  const double sec = timer.seconds();
  report(4, "phase-jump dual route (sector difference vs closed form)",
         worst <= 1e-6 && multi_ok && sec < 60.0,
         fmt(worst) + " over " + std::to_string(jumps) + " jumps", sec);
}

// --- criterion 5: end-to-end asymptotics with corrupted control -------------

void criterion_5() {
  Timer timer;
  harness::RunConfig cfg = harness::preset_config("fig1");
  cfg.t_list = {50.0, 100.0, 150.0, 200.0};
  cfg.t_end = 200.0;

  auto p = harness::Pipeline::prepare(cfg);
  auto rep = harness::run_compare(p);
  bool pass = !rep.sectors.empty();
  double worst_final = 0.0;
  for (const auto& s : rep.sectors) {
    pass = pass && s.errors_decrease && s.slope_log_err_b < 0.0 &&
           s.final_err_b < 1e-2;
    worst_final = std::max(worst_final, s.final_err_b);
  }

  auto bad = harness::run_compare(p, 1.0);
  bool control_fails = true;
  double control_final = 1e300;
  for (const auto& s : bad.sectors) {
    control_fails = control_fails && s.final_err_b > 1e-2;
    control_final = std::min(control_final, s.final_err_b);
  }

  const double sec = timer.seconds();
  report(5, "end-to-end asymptotics (fig1, decaying error + control)",
         pass && control_fails && sec < 300.0,
         "final err " + fmt(worst_final) + ", control err " + fmt(control_final),
         sec);
}

// --- criterion 6: scattering self-consistency ------------------------------

void criterion_6() {
  Timer timer;
  lattice::SteplikeLattice s = fig1_profile(150);

  double worst_site = 0.0;
  const cplx w0 = scattering::wronskian_at(cplx(-0.3, 0.0), s, 0);
  for (int n = -4; n <= 5; ++n) {
    const cplx wn = scattering::wronskian_at(cplx(-0.3, 0.0), s, n);
    worst_site = std::max(worst_site, std::abs(wn - w0) / std::max(1.0, std::abs(w0)));
  }

  auto evs = scattering::eigenvalues(s);
  double worst_dual = 1e300;
  bool one_eigen = evs.size() == 1 && evs[0].in_gap;
  if (one_eigen) {
    for (double lam : lattice::jacobi_spectrum(s))
      if (lam > -3.0 && lam < -1.0)
        worst_dual = std::abs(lam - evs[0].lambda);
  }

  double gamma_rel = 1e300;
  if (one_eigen) {
    scattering::norming_constants(s, evs);
    lattice::EvolveOptions opt;
    opt.dt = 0.002;
    auto ev1 = lattice::evolve(s, 1.0, opt).snapshots.back();
    auto evs1 = scattering::eigenvalues(ev1);
    scattering::norming_constants(ev1, evs1);
    const double law = evs[0].gamma * std::exp(evs[0].z - 1.0 / evs[0].z);
    gamma_rel = std::abs(evs1[0].gamma / law - 1.0);
  }

  const double sec = timer.seconds();
  report(6, "scattering self-consistency (Wronskian, dual oracle, gamma law)",
         worst_site <= 1e-12 && one_eigen && worst_dual <= 1e-8 && gamma_rel <= 1e-5,
         "site " + fmt(worst_site) + ", dual " + fmt(worst_dual) + ", gamma " +
             fmt(gamma_rel),
         sec);
}

// --- criterion 7: capacity dual route ---------------------------------------

void criterion_7() {
  Timer timer;
  double worst = 0.0;
  for (auto [a, b] : {std::pair{0.5, -4.0}, {0.7, -3.7}}) {
    auto ctx = surface::SurfaceContext::build(surface::TwoBandSpectrum(a, b));
    const double k1 = surface::k_const(0.05, ctx);
    const double k2 = surface::k_const(0.15, ctx);
    const double implied = 0.5 * std::exp(-(k2 - k1) / 0.1);
    worst = std::max(worst, std::abs(implied - ctx.capacity()));
  }
  const double sec = timer.seconds();
  report(7, "capacity dual route (expansion constant vs dK/dxi)", worst <= 1e-6,
         "difference " + fmt(worst), sec);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
