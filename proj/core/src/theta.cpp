#include "toda/theta.hpp"

#include <cmath>

#include "toda/errors.hpp"

namespace toda::finitegap {

namespace {
const double kPi = std::acos(-1.0);
}

int theta_truncation(double tau_im, double tol) {
  if (tau_im <= 0.0) throw Error("theta: Im tau must be positive");
  int m = static_cast<int>(std::ceil(std::sqrt(-std::log(tol) / (kPi * tau_im)))) + 1;
  return std::max(m, 2);
}

double theta(double v, double tau_im, int M) {
  v -= std::round(v);  // 1-periodic
  double acc = 1.0;
  for (int m = 1; m <= M; ++m)
    acc += 2.0 * std::exp(-kPi * m * m * tau_im) * std::cos(2.0 * kPi * m * v);
  return acc;
}

std::complex<double> theta(const std::complex<double>& v, double tau_im, int M) {
  const double vr = v.real() - std::round(v.real());
  const std::complex<double> w(vr, v.imag());
  // Terms gain exp(2 pi |m Im v|); widen the truncation accordingly.
  const int Meff = M + static_cast<int>(std::ceil(std::abs(v.imag()) / tau_im)) + 1;
  std::complex<double> acc = 0.0;
  const std::complex<double> i2pi(0.0, 2.0 * kPi);
  for (int m = -Meff; m <= Meff; ++m)
    acc += std::exp(-kPi * m * m * tau_im + i2pi * static_cast<double>(m) * w);
  return acc;
}

}  // namespace toda::finitegap
