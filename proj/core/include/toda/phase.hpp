#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "toda/surface.hpp"

namespace toda::phase {

using cplx = std::complex<double>;

/// Everything the phase constants depend on: the spectrum geometry, a sampler
/// for |chi| on I, the negative-z discrete spectrum and the resonance class.
struct PhaseInputs {
  const surface::TwoBandSpectrum* spec = nullptr;
  std::function<double(double)> chi_abs;  // |chi(s)|, s strictly inside I
  std::vector<double> gap_z;              // gap images, descending: z_1 > ... > z_aleph
  std::vector<double> extra_z;            // other eigenvalue images in (q, 0)
  bool q_resonant = false;
  bool q1_resonant = false;
  int ell = -1;
  int nodes = 256;   // minimum quadrature order on I
  double eps = 0.05; // sector trim (bookkeeping only)
};

int sector_count(const PhaseInputs& in);

/// Eigenvalue images entering the Blaschke product of sector j: all z_k above
/// the sector's dividing point, i.e. gap indices k < j plus every z in (q, 0).
std::vector<double> sector_factors(int j, const PhaseInputs& in);

/// Pi_j(z) = prod |z_k| (z - 1/z_k) / (z - z_k).
cplx blaschke(const cplx& z, int j, const PhaseInputs& in);

/// Branch-continuous fourth root selected by the resonance case table,
/// anchored at Q(1) = 1.
cplx q_factor(const cplx& z, const PhaseInputs& in);

/// |Q(s)|^{-2} on the interior of I (the magnitude needs no branch tracking).
double q_abs2_inv_on_I(double s, const PhaseInputs& in);

/// Phase constant of sector j, reported in (-pi, pi].
double delta_j(int j, const PhaseInputs& in);

/// Closed-form jump Delta_j - Delta_{j+1} attached to the gap eigenvalue z_j.
double delta_jump(int j, const PhaseInputs& in);

/// Szego-type function F = exp(P(z) S(z)) Q(z); validation only.
cplx szego_F(const cplx& z, const PhaseInputs& in);

/// S(z) of the scalar additive jump problem behind F; S(z) -> 0 as z -> 0
/// exactly when the phase constant is consistent.
cplx szego_S(const cplx& z, const PhaseInputs& in);

struct SectorPhase {
  int sector = 0;
  double delta = 0.0;
  double jump_integral = 0.0;    // delta_j - delta_{j+1} from the full route
  double jump_closed_form = 0.0; // Theorem-style formula
  double residual = 0.0;
};

struct PhaseReport {
  std::vector<SectorPhase> sectors;
};

PhaseReport phase_report(const PhaseInputs& in);
void save_json(const PhaseReport& r, const std::string& path);

}  // namespace toda::phase
