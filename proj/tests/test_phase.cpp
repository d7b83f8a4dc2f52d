#include <doctest.h>

#include <cmath>
#include <complex>

#include "toda/lattice.hpp"
#include "toda/phase.hpp"
#include "toda/scattering.hpp"

using namespace toda;
using phase::cplx;
using phase::PhaseInputs;
using surface::TwoBandSpectrum;

namespace {

const double kPi = std::acos(-1.0);

// Inputs with a synthetic |chi| profile; no lattice behind them.
PhaseInputs synthetic_inputs(const TwoBandSpectrum& sp, std::vector<double> gap_z,
                             bool q_res = false, bool q1_res = false) {
  PhaseInputs in;
  in.spec = &sp;
  in.gap_z = std::move(gap_z);
  in.q_resonant = q_res;
  in.q1_resonant = q1_res;
  in.ell = (q_res && q1_res) ? 1 : (!q_res && !q1_res ? -1 : 0);
  const double q = sp.q, q1 = sp.q1;
  in.chi_abs = [q, q1, q_res, q1_res](double s) {
    // positive model with the admissible edge classes: square-root vanishing
    // at a nonresonant edge, inverse-square-root blow-up at a resonant one
    double v = 1.3 + 0.4 * std::sin(3.0 * s);
    v *= std::pow(q - s, q_res ? -0.5 : 0.5);
    v *= std::pow(s - q1, q1_res ? -0.5 : 0.5);
    return v;
  };
  return in;
}

PhaseInputs fig1_inputs(const lattice::SteplikeLattice& lat,
                        const TwoBandSpectrum& sp,
                        const scattering::ScatteringData& sd) {
  PhaseInputs in;
  in.spec = &sp;
  in.q_resonant = sd.resonance.q_resonant;
  in.q1_resonant = sd.resonance.q1_resonant;
  in.ell = sd.resonance.ell;
  for (const auto& e : sd.eigenvalues)
    if (e.in_gap) in.gap_z.push_back(e.z);
  in.chi_abs = [&lat](double s) { return scattering::chi_abs(s, lat); };
  return in;
}

}  // namespace

TEST_CASE("Blaschke product: identity cases, inversion symmetry, positivity") {
  TwoBandSpectrum sp(0.5, -4.0);
  PhaseInputs in = synthetic_inputs(sp, {-0.30, -0.45, -0.62});

  // sector 1 has no factors
  CHECK(phase::blaschke(cplx(0.37, 0.11), 1, in) == cplx(1.0, 0.0));
  CHECK(phase::sector_count(in) == 4);
  CHECK(phase::sector_factors(2, in).size() == 1);
  CHECK(phase::sector_factors(4, in).size() == 3);

  for (int j = 2; j <= 4; ++j) {
    for (cplx z : {cplx(0.3, 0.4), cplx(-0.2, 0.7), cplx(1.4, -0.3)}) {
      const cplx p = phase::blaschke(z, j, in);
      const cplx pinv = phase::blaschke(1.0 / z, j, in);
      CHECK(std::abs(p * pinv - 1.0) < 1e-12 * std::abs(p));
    }
    CHECK(phase::blaschke(cplx(0.0, 0.0), j, in).real() > 0.0);
    CHECK(std::abs(phase::blaschke(cplx(0.0, 0.0), j, in).imag()) == 0.0);
  }
}

TEST_CASE("Q factor: anchor, inversion symmetry, case magnitudes") {
  TwoBandSpectrum sp(0.5, -4.0);
  for (auto [qr, q1r] : std::vector<std::pair<bool, bool>>{
           {false, false}, {true, true}, {false, true}, {true, false}}) {
    PhaseInputs in = synthetic_inputs(sp, {}, qr, q1r);
    CHECK(std::abs(phase::q_factor(cplx(1.0, 0.0), in) - 1.0) < 1e-12);
    CHECK(phase::q_factor(cplx(0.0, 0.0), in).real() > 0.0);

    for (cplx z : {cplx(0.5, 0.3), cplx(-1.7, 0.4), cplx(0.2, -0.6), cplx(2.3, 1.1)}) {
      const cplx Q = phase::q_factor(z, in);
      const cplx Qi = phase::q_factor(1.0 / z, in);
      CHECK(std::abs(Q * Qi - 1.0) < 1e-11);
    }

    // |Q|^{-2} on I agrees with the case-table magnitude along a ray
    for (double f : {0.2, 0.5, 0.8}) {
      const double s = sp.q1 + f * (sp.q - sp.q1);
      double q4;
      const double q = sp.q, q1 = sp.q1;
      if (!qr && !q1r) q4 = (s - q) * (s - q1) / ((s * q1 - 1) * (s * q - 1));
      else if (qr && q1r) q4 = (s * q1 - 1) * (s * q - 1) / ((s - q) * (s - q1));
      else if (q1r) q4 = (s * q1 - 1) * (s - q) / ((s * q - 1) * (s - q1));
      else q4 = (s * q - 1) * (s - q1) / ((s * q1 - 1) * (s - q));
      CHECK(phase::q_abs2_inv_on_I(s, in) ==
            doctest::Approx(1.0 / std::sqrt(std::abs(q4))));
      // boundary magnitude of the branch-continuous Q matches as well
      const cplx Qb = phase::q_factor(cplx(s, -1e-9), in);
      CHECK(std::abs(Qb) == doctest::Approx(std::pow(std::abs(q4), 0.25)).epsilon(1e-5));
    }
  }
}

TEST_CASE("delta is real, sector-resolved, and jumps match the closed form") {
  TwoBandSpectrum sp(0.5, -4.0);
  PhaseInputs in = synthetic_inputs(sp, {-0.30, -0.45, -0.62});

  for (int j = 1; j <= 4; ++j) {
    const double d = phase::delta_j(j, in);
    CHECK(std::isfinite(d));
    CHECK(d > -kPi);
    CHECK(d <= kPi);
  }

  // dual route: consecutive sector difference vs the closed-form jump
  for (int j = 1; j <= 3; ++j) {
    const double dj = phase::delta_j(j, in);
    const double dj1 = phase::delta_j(j + 1, in);
    const double jump = phase::delta_jump(j, in);
    CHECK(std::abs(std::remainder(dj - dj1 - jump, 2.0 * kPi)) < 1e-6);
    CHECK(jump > 0.0);  // the jump integrand has a definite sign
  }
}

TEST_CASE("jump integrand stays integrable as the eigenvalue reaches the edge") {
  TwoBandSpectrum sp(0.5, -4.0);
  PhaseInputs in = synthetic_inputs(sp, {sp.q1 - 1e-8});
  const double jump = phase::delta_jump(1, in);
  CHECK(std::isfinite(jump));
  CHECK(jump > 0.0);
}

TEST_CASE("resonant quadrature path: synthetic blow-up at q1") {
  TwoBandSpectrum sp(0.5, -4.0);
  PhaseInputs in = synthetic_inputs(sp, {-0.35}, false, true);  // ell = 0
  CHECK(in.ell == 0);
  for (int j : {1, 2}) CHECK(std::isfinite(phase::delta_j(j, in)));
  // both-resonant case table
  PhaseInputs in2 = synthetic_inputs(sp, {}, true, true);
  CHECK(in2.ell == 1);
  CHECK(std::isfinite(phase::delta_j(1, in2)));
}

TEST_CASE("removing the rightmost eigenvalue shifts delta by one Blaschke factor") {
  TwoBandSpectrum sp(0.5, -4.0);
  PhaseInputs with = synthetic_inputs(sp, {-0.30, -0.45});
  PhaseInputs without = synthetic_inputs(sp, {-0.45});
  // sector left of both eigenvalues: j = 3 (with) vs j = 2 (without) include
  // {-0.30, -0.45} and {-0.45}; the delta difference is the -0.30 jump.
  const double d_with = phase::delta_j(3, with);
  const double d_without = phase::delta_j(2, without);
  const double jump = phase::delta_jump(1, with);  // factor of z_1 = -0.30
  CHECK(std::abs(std::remainder((d_without - d_with) - jump, 2.0 * kPi)) < 1e-6);
}

TEST_CASE("Szego function solves its Riemann-Hilbert problem on fig1 data") {
  lattice::SteplikeLattice lat(-150, 150, lattice::Backgrounds{0.5, -4.0, 0.5, 0.0});
  lat.set_b(0, -1.7);
  TwoBandSpectrum sp(0.5, -4.0);
  auto sd = scattering::analyze(lat);
  PhaseInputs in = fig1_inputs(lat, sp, sd);
  const int jfull = phase::sector_count(in);

  // F(1) = 1 and F(0) > 0 through S(z) = O(z)
  CHECK(std::abs(phase::szego_F(cplx(0.999999, 0.0), in) - 1.0) < 1e-5);
  const cplx s3 = phase::szego_S(cplx(1e-3, 0.0), in);
  const cplx s4 = phase::szego_S(cplx(1e-4, 0.0), in);
  CHECK(std::abs(s3) < 1e-2);
  CHECK(std::abs(s4) < 0.2 * std::abs(s3));  // linear vanishing

  // inversion symmetry
  for (cplx z : {cplx(0.5, 0.2), cplx(-2.0, 0.8)}) {
    const cplx F = phase::szego_F(z, in);
    const cplx Fi = phase::szego_F(1.0 / z, in);
    CHECK(std::abs(F * Fi - 1.0) < 1e-7);
  }

  // multiplicative jump on I: F+ F- = Pi^{-2} |chi|
  for (double f : {0.25, 0.5, 0.75}) {
    const double s = sp.q1 + f * (sp.q - sp.q1);
    const cplx Fp = phase::szego_F(cplx(s, -1e-5), in);
    const cplx Fm = phase::szego_F(cplx(s, 1e-5), in);
    const double pij = phase::blaschke(cplx(s, 0.0), jfull, in).real();
    const double rhs = scattering::chi_abs(s, lat) / (pij * pij);
    CHECK(std::abs((Fp * Fm).imag()) < 1e-5 * rhs);
    CHECK(std::abs((Fp * Fm).real() - rhs) < 1e-4 * rhs);
  }

  // additive phase jump on J: F+ = F- e^{i delta} with + the lower side
  const double delta = phase::delta_j(jfull, in);
  for (double f : {0.3, 0.6}) {
    const double s = -1.0 + f * (sp.q1 + 1.0);
    const cplx Fp = phase::szego_F(cplx(s, -1e-5), in);
    const cplx Fm = phase::szego_F(cplx(s, 1e-5), in);
    const cplx expected = std::polar(1.0, delta);
    CHECK(std::abs(Fp / Fm - expected) < 1e-4);
  }
}

TEST_CASE("phase report carries residuals below tolerance") {
  lattice::SteplikeLattice lat(-150, 150, lattice::Backgrounds{0.5, -4.0, 0.5, 0.0});
  lat.set_b(0, -1.7);
  TwoBandSpectrum sp(0.5, -4.0);
  auto sd = scattering::analyze(lat);
  PhaseInputs in = fig1_inputs(lat, sp, sd);
  auto rep = phase::phase_report(in);
  REQUIRE(rep.sectors.size() == 2);
  CHECK(rep.sectors[0].residual < 1e-6);
  phase::save_json(rep, "phase_test.json");
}
