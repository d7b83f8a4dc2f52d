#pragma once

#include <complex>

namespace toda::finitegap {

/// Smallest truncation order M with exp(-pi * tau_im * M^2) below tol.
int theta_truncation(double tau_im, double tol = 1e-14);

/// theta(v | i tau_im) = sum_m exp(-pi m^2 tau_im + 2 pi i m v), truncated at
/// |m| <= M. Real-argument form uses the cosine pairing.
double theta(double v, double tau_im, int M);
std::complex<double> theta(const std::complex<double>& v, double tau_im, int M);

}  // namespace toda::finitegap
