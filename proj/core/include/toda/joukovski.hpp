#pragma once

#include <cmath>
#include <complex>

namespace toda {

/// Map lambda = b_bg + a_bg (z + 1/z) between the cut plane and the unit disk.
/// z(lambda) always selects the branch with |z| <= 1; |z| = 1 exactly on the
/// band [b_bg - 2 a_bg, b_bg + 2 a_bg].
struct JoukovskiMap {
  double a_bg = 0.5;
  double b_bg = 0.0;

  double band_lo() const { return b_bg - 2.0 * a_bg; }
  double band_hi() const { return b_bg + 2.0 * a_bg; }

  std::complex<double> lambda(const std::complex<double>& z) const {
    return b_bg + a_bg * (z + 1.0 / z);
  }

  std::complex<double> z(const std::complex<double>& lam) const {
    const std::complex<double> w = (lam - b_bg) / (2.0 * a_bg);
    // sqrt(w-1)*sqrt(w+1) with principal roots: cut on [-1,1], ~w at infinity,
    // so w - s is the |z| <= 1 branch everywhere.
    const std::complex<double> s = std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
    if (std::abs(w) > 2.0) return 1.0 / (w + s);  // avoids cancellation in w - s
    return w - s;
  }

  /// Real form for lambda strictly left of the band (the common case here).
  double z_left(double lam) const {
    const double w = (lam - b_bg) / (2.0 * a_bg);
    // w < -1; the |z| <= 1 root of z^2 - 2wz + 1 = 0 is 1 / (w - sqrt(w^2-1)).
    return 1.0 / (w - std::sqrt(w * w - 1.0));
  }
};

}  // namespace toda
