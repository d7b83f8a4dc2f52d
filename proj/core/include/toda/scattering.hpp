#pragma once

#include <complex>
#include <string>
#include <vector>

#include "toda/joukovski.hpp"
#include "toda/lattice.hpp"

namespace toda::scattering {

using cplx = std::complex<double>;

/// Solution of the three-term recurrence stored in scaled form: the free
/// exponent of the normalizing side is factored out so the stored values stay
/// O(1) on the background. For a right solution psi(n) = scaled(n) * z^n; for
/// a left solution psi(n) = scaled(n) * zeta^{-n}.
struct JostSolution {
  int lo = 0, hi = 0;
  std::vector<cplx> vals;  // scaled values, indexed lo..hi
  cplx base;               // z (right) or zeta (left)
  bool right = true;

  const cplx& scaled_at(int n) const { return vals[n - lo]; }
  cplx psi(int n) const;
};

/// Right Jost solution: psi z^{-n} -> 1 as n -> +infinity; backward recursion
/// seeded with the free exponent at the right window edge, computed down to
/// n_lo. Throws WindowError if the seed row is not on the background.
JostSolution jost_right(const cplx& z, const lattice::SteplikeLattice& s, int n_lo);

/// Left Jost solution: zeta^n psi -> 1 as n -> -infinity; forward recursion
/// from the left edge up to n_hi. The left band variable zeta is derived from
/// lambda(z) through the left-background map.
JostSolution jost_left(const cplx& z, const lattice::SteplikeLattice& s, int n_hi);

/// a(n-1) (psi_left(n-1) psi(n) - psi(n-1) psi_left(n)); site-independent.
cplx wronskian_at(const cplx& z, const lattice::SteplikeLattice& s, int n);
cplx wronskian(const cplx& z, const lattice::SteplikeLattice& s);

/// Wronskian as a function of real lambda in the resolvent set.
double wronskian_lambda(double lam, const lattice::SteplikeLattice& s);

struct Eigenvalue {
  double z;        // right Joukovski image
  double lambda;
  bool in_gap;     // inside (b- + 2a-, b+ - 2a+)
  double gamma;    // norming constant, filled by norming_constants
};

/// Discrete spectrum: tridiagonal eigensolve of the truncated matrix followed
/// by refinement as Wronskian zeros (bisection). Gap eigenvalues come first,
/// sorted by decreasing z (increasing lambda); flagged outside ones follow.
std::vector<Eigenvalue> eigenvalues(const lattice::SteplikeLattice& s);

/// gamma_j = (sum_n psi(z_j, n)^2)^{-1}, window sums with analytic tails.
void norming_constants(const lattice::SteplikeLattice& s, std::vector<Eigenvalue>& evs);

/// |chi(s)| = (s - 1/s) * 2 sin(theta) / |W(s)|^2 for s strictly inside I,
/// with W extrapolated to the axis from two small negative imaginary offsets.
double chi_abs(double s_on_I, const lattice::SteplikeLattice& s);

struct Resonance {
  bool q_resonant = false, q1_resonant = false;
  bool q_indeterminate = false, q1_indeterminate = false;
  int ell = -1;  // -1 both nonresonant, +1 both resonant, 0 mixed
  double abs_w_q = 0.0, abs_w_q1 = 0.0;
};

Resonance resonance_classify(const lattice::SteplikeLattice& s, double tol_res = 1e-6);

struct ReflectionSample {
  cplx z, R, T;
};

/// Right reflection and transmission on the unit circle, extracted from
/// Wronskian ratios of the three solutions psi(z), psi(1/z), psi_left(z).
std::vector<ReflectionSample> reflection_samples(const lattice::SteplikeLattice& s,
                                                 int n_grid);

struct ScatteringData {
  double q = 0.0, q1 = 0.0;
  std::vector<Eigenvalue> eigenvalues;
  Resonance resonance;
  std::vector<std::pair<double, double>> chi_samples;
  std::vector<ReflectionSample> reflection;
  std::vector<std::string> warnings;
};

struct AnalyzeOptions {
  int chi_grid = 128;
  int reflection_grid = 64;
  double tol_res = 1e-6;
};

ScatteringData analyze(const lattice::SteplikeLattice& s, const AnalyzeOptions& opt = {});

void save_json(const ScatteringData& d, const std::string& path);
ScatteringData load_json(const std::string& path);

}  // namespace toda::scattering
