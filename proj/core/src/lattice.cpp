#include "toda/lattice.hpp"

#include <Eigen/Dense>
#include <limits>
#include <algorithm>
#include <cmath>

namespace toda::lattice {

SteplikeLattice::SteplikeLattice(int n_min, int n_max, const Backgrounds& bg,
                                 double rho)
    : n_min_(n_min), n_max_(n_max), bg_(bg), rho_(rho) {
  if (n_min >= n_max) throw ConfigError("lattice window is empty");
  if (bg.a_minus <= 0.0 || bg.a_plus <= 0.0)
    throw InstabilityError("background a must be positive");
  a_.assign(size(), 0.0);
  b_.assign(size(), 0.0);
  for (int n = n_min_; n <= n_max_; ++n) {
    a_[n - n_min_] = (n < 0) ? bg.a_minus : bg.a_plus;
    b_[n - n_min_] = (n < 0) ? bg.b_minus : bg.b_plus;
  }
}

void SteplikeLattice::set_a(int n, double v) {
  if (n < n_min_ || n > n_max_) throw WindowError("set_a outside window");
  if (v <= 0.0) throw InstabilityError("a(n) must be positive");
  a_[n - n_min_] = v;
}

void SteplikeLattice::set_b(int n, double v) {
  if (n < n_min_ || n > n_max_) throw WindowError("set_b outside window");
  b_[n - n_min_] = v;
}

double SteplikeLattice::edge_mismatch() const {
  double left = std::abs(a_.front() - bg_.a_minus) + std::abs(b_.front() - bg_.b_minus);
  double right = std::abs(a_.back() - bg_.a_plus) + std::abs(b_.back() - bg_.b_plus);
  return std::max(left, right);
}

NormalizeResult normalize(const SteplikeLattice& l) {
  const Backgrounds& bg = l.backgrounds();
  if (!(bg.b_minus + 2.0 * bg.a_minus < bg.b_plus - 2.0 * bg.a_plus))
    throw ConfigError("backgrounds do not satisfy b- + 2a- < b+ - 2a+");
  const double c = 1.0 / (2.0 * bg.a_plus);
  Backgrounds nbg;
  nbg.a_plus = 0.5;
  nbg.b_plus = 0.0;
  nbg.a_minus = c * bg.a_minus;
  nbg.b_minus = c * (bg.b_minus - bg.b_plus);
  SteplikeLattice out(l.n_min(), l.n_max(), nbg, l.rho());
  for (int n = l.n_min(); n <= l.n_max(); ++n) {
    out.set_a(n, c * l.a(n));
    out.set_b(n, c * (l.b(n) - bg.b_plus));
  }
  out.set_time(l.time() / c);  // t_normalized = 2 a_plus * t_original
  return NormalizeResult{std::move(out), 2.0 * bg.a_plus, bg.b_plus};
}

namespace {

// RHS on raw arrays; ghost values are the background constants.
void rhs_raw(const std::vector<double>& a, const std::vector<double>& b,
             const Backgrounds& bg, std::vector<double>& da,
             std::vector<double>& db) {
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) {
    const double am1 = (i == 0) ? bg.a_minus : a[i - 1];
    const double bp1 = (i == n - 1) ? bg.b_plus : b[i + 1];
    db[i] = 2.0 * (a[i] * a[i] - am1 * am1);
    da[i] = a[i] * (bp1 - b[i]);
  }
}

struct Rk4Work {
  std::vector<double> ka[4], kb[4], ta, tb;
  explicit Rk4Work(size_t n) {
    for (int i = 0; i < 4; ++i) {
      ka[i].assign(n, 0.0);
      kb[i].assign(n, 0.0);
    }
    ta.assign(n, 0.0);
    tb.assign(n, 0.0);
  }
};

void rk4_step(std::vector<double>& a, std::vector<double>& b,
              const Backgrounds& bg, double dt, Rk4Work& w) {
  const size_t n = a.size();
  rhs_raw(a, b, bg, w.ka[0], w.kb[0]);
  for (size_t i = 0; i < n; ++i) {
    w.ta[i] = a[i] + 0.5 * dt * w.ka[0][i];
    w.tb[i] = b[i] + 0.5 * dt * w.kb[0][i];
  }
  rhs_raw(w.ta, w.tb, bg, w.ka[1], w.kb[1]);
  for (size_t i = 0; i < n; ++i) {
    w.ta[i] = a[i] + 0.5 * dt * w.ka[1][i];
    w.tb[i] = b[i] + 0.5 * dt * w.kb[1][i];
  }
  rhs_raw(w.ta, w.tb, bg, w.ka[2], w.kb[2]);
  for (size_t i = 0; i < n; ++i) {
    w.ta[i] = a[i] + dt * w.ka[2][i];
    w.tb[i] = b[i] + dt * w.kb[2][i];
  }
  rhs_raw(w.ta, w.tb, bg, w.ka[3], w.kb[3]);
  for (size_t i = 0; i < n; ++i) {
    a[i] += dt / 6.0 * (w.ka[0][i] + 2.0 * w.ka[1][i] + 2.0 * w.ka[2][i] + w.ka[3][i]);
    b[i] += dt / 6.0 * (w.kb[0][i] + 2.0 * w.kb[1][i] + 2.0 * w.kb[2][i] + w.kb[3][i]);
  }
}

}  // namespace

Rhs toda_rhs(const SteplikeLattice& s) {
  Rhs r;
  r.da.assign(s.size(), 0.0);
  r.db.assign(s.size(), 0.0);
  rhs_raw(s.a_data(), s.b_data(), s.backgrounds(), r.da, r.db);
  return r;
}

const SteplikeLattice& Trajectory::at_time(double t, double tol) const {
  for (const auto& s : snapshots)
    if (std::abs(s.time() - t) <= tol) return s;
  throw ConfigError("no snapshot at requested time");
}

Trajectory evolve(const SteplikeLattice& s, double t_end, const EvolveOptions& opt) {
  if (t_end < 0.0 || opt.dt <= 0.0) throw ConfigError("bad evolve parameters");
  Trajectory traj;
  traj.snapshots.push_back(s);

  SteplikeLattice cur = s;
  std::vector<double>& a = cur.a_data();
  std::vector<double>& b = cur.b_data();
  Rk4Work work(a.size());

  const double t0 = s.time();
  double t = t0;
  size_t probe_idx = 0;
  auto next_probe = [&]() -> double {
    while (probe_idx < opt.probes.size() && opt.probes[probe_idx] <= t + 1e-12)
      ++probe_idx;
    return probe_idx < opt.probes.size() ? opt.probes[probe_idx] : t0 + t_end;
  };

  long step = 0;
  while (t < t0 + t_end - 1e-12) {
    double target = std::min(next_probe(), t0 + t_end);
    double dt = std::min(opt.dt, target - t);
    rk4_step(a, b, s.backgrounds(), dt, work);
    t += dt;
    ++step;
    cur.set_time(t);

    for (double v : a)
      if (!(v > 0.0)) throw InstabilityError("a(n) <= 0 during evolution");
    if (cur.edge_mismatch() > opt.clamp_tol)
      throw BoundaryContaminationError("window edges drifted off background");

    bool at_probe = std::abs(t - target) < 1e-12 && probe_idx < opt.probes.size() &&
                    std::abs(target - opt.probes[probe_idx]) < 1e-12;
    bool at_stride = opt.snapshot_stride > 0 && step % opt.snapshot_stride == 0;
    bool at_end = t >= t0 + t_end - 1e-12;
    if (at_probe || at_stride || at_end) traj.snapshots.push_back(cur);
  }
  if (traj.snapshots.size() == 1) traj.snapshots.push_back(cur);
  return traj;
}

std::vector<double> jacobi_spectrum(const SteplikeLattice& s) {
  const int n = s.size();
  Eigen::VectorXd diag(n), sub(n - 1);
  for (int i = 0; i < n; ++i) diag[i] = s.b_data()[i];
  for (int i = 0; i + 1 < n; ++i) sub[i] = s.a_data()[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

Diagnostics conserved_diagnostics(const SteplikeLattice& state,
                                  const SteplikeLattice& initial) {
  const Backgrounds& bg = state.backgrounds();
  double sum = 0.0;
  for (int n = state.n_min(); n <= state.n_max(); ++n)
    sum += state.b(n) - ((n < 0) ? bg.b_minus : bg.b_plus);
  // d/dt sum(b) telescopes to the constant edge flux 2 (a_+^2 - a_-^2).
  const double flux = 2.0 * (bg.a_plus * bg.a_plus - bg.a_minus * bg.a_minus);
  sum -= flux * (state.time() - initial.time());

  std::vector<double> ev0 = jacobi_spectrum(initial);
  std::vector<double> ev1 = jacobi_spectrum(state);
  const double gap_lo = bg.b_minus + 2.0 * bg.a_minus;
  const double gap_hi = bg.b_plus - 2.0 * bg.a_plus;
  const double margin = 1e-3 * (bg.b_plus + 2.0 * bg.a_plus - bg.b_minus + 2.0 * bg.a_minus);
  double gap_drift = 0.0;
  const int m = static_cast<int>(ev0.size());
  for (int i = 0; i < m; ++i) {
    if (!(ev0[i] > gap_lo + margin && ev0[i] < gap_hi - margin)) continue;
    // match by value: the nearest eigenvalue of the evolved matrix
    auto it = std::lower_bound(ev1.begin(), ev1.end(), ev0[i]);
    double best = std::numeric_limits<double>::infinity();
    if (it != ev1.end()) best = std::min(best, std::abs(*it - ev0[i]));
    if (it != ev1.begin()) best = std::min(best, std::abs(*(it - 1) - ev0[i]));
    gap_drift = std::max(gap_drift, best);
  }
  double extreme_drift = 0.0;
  for (int i = 0; i < m; ++i)
    if (i < 5 || i >= m - 5)
      extreme_drift = std::max(extreme_drift, std::abs(ev1[i] - ev0[i]));
  return Diagnostics{sum, gap_drift, extreme_drift};
}

}  // namespace toda::lattice
