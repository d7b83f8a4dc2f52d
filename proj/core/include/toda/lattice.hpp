#pragma once

#include <vector>

#include "toda/errors.hpp"

namespace toda::lattice {

struct Backgrounds {
  double a_minus = 0.5;
  double b_minus = -4.0;
  double a_plus = 0.5;
  double b_plus = 0.0;
};

/// Doubly-infinite coefficient pair (a, b) stored on a finite window
/// [n_min, n_max]; outside the window the coefficients are frozen at the
/// background constants (left background for n < n_min, right for n > n_max).
class SteplikeLattice {
 public:
  SteplikeLattice(int n_min, int n_max, const Backgrounds& bg, double rho = 1.0);

  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  int size() const { return n_max_ - n_min_ + 1; }

  double a(int n) const {
    if (n < n_min_) return bg_.a_minus;
    if (n > n_max_) return bg_.a_plus;
    return a_[n - n_min_];
  }
  double b(int n) const {
    if (n < n_min_) return bg_.b_minus;
    if (n > n_max_) return bg_.b_plus;
    return b_[n - n_min_];
  }
  void set_a(int n, double v);
  void set_b(int n, double v);

  const Backgrounds& backgrounds() const { return bg_; }
  double rho() const { return rho_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  /// Larger of the two edge deviations |a - a_bg| + |b - b_bg|.
  double edge_mismatch() const;

  const std::vector<double>& a_data() const { return a_; }
  const std::vector<double>& b_data() const { return b_; }
  std::vector<double>& a_data() { return a_; }
  std::vector<double>& b_data() { return b_; }

 private:
  int n_min_, n_max_;
  Backgrounds bg_;
  double rho_;
  double time_ = 0.0;
  std::vector<double> a_, b_;
};

struct NormalizeResult {
  SteplikeLattice lattice;
  double time_scale;   // 2 a_plus; trajectories correspond under t -> t / time_scale
  double energy_shift; // b_plus removed before rescaling
};

/// Affine change of variables taking general backgrounds to a_plus = 1/2,
/// b_plus = 0:  a -> a / (2 a_plus),  b -> (b - b_plus) / (2 a_plus), with
/// time compressed by 2 a_plus. Rejects data without a spectral gap
/// (requires b_minus + 2 a_minus < b_plus - 2 a_plus).
NormalizeResult normalize(const SteplikeLattice& l);

struct Rhs {
  std::vector<double> da, db;  // indexed n_min .. n_max
};

/// db(n) = 2 (a(n)^2 - a(n-1)^2), da(n) = a(n) (b(n+1) - b(n)); missing
/// neighbours at the window edges are the background constants.
Rhs toda_rhs(const SteplikeLattice& s);

struct EvolveOptions {
  double dt = 0.005;
  int snapshot_stride = 0;      // 0: keep only first and last state
  double clamp_tol = 1e-6;      // edge drift guard
  std::vector<double> probes;   // extra exact-time snapshots (sorted ascending)
};

struct Trajectory {
  std::vector<SteplikeLattice> snapshots;  // each carries its time()
  const SteplikeLattice& at_time(double t, double tol = 1e-9) const;
};

/// Classical fixed-step RK4. Throws InstabilityError if any a(n) <= 0 and
/// BoundaryContaminationError if the edges drift off the backgrounds.
Trajectory evolve(const SteplikeLattice& s, double t_end, const EvolveOptions& opt = {});

struct Diagnostics {
  double sum_b_deviation;  // sum of (b - b_bg), boundary-flux corrected
  double spectrum_drift;   // max drift of the gap eigenvalues vs. initial
  double extreme_drift;    // drift of the 10 extreme truncated eigenvalues
                           // (informational; these are discretized band states)
};

Diagnostics conserved_diagnostics(const SteplikeLattice& state,
                                  const SteplikeLattice& initial);

/// Eigenvalues of the symmetric tridiagonal matrix truncated to the window,
/// sorted ascending.
std::vector<double> jacobi_spectrum(const SteplikeLattice& s);

}  // namespace toda::lattice
