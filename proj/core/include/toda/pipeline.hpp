#pragma once

#include <string>
#include <vector>

#include "toda/config.hpp"
#include "toda/finite_gap.hpp"
#include "toda/phase.hpp"
#include "toda/scattering.hpp"
#include "toda/surface.hpp"

namespace toda::harness {

struct SectorRow {
  int sector = 0;
  double t = 0.0;
  long n = 0;
  double b_direct = 0.0, b_hat = 0.0;
  double a_direct = 0.0, a_hat = 0.0;
  double err_b = 0.0, err_a = 0.0;
};

struct SectorSummary {
  int sector = 0;
  double xi_lo = 0.0, xi_hi = 0.0, xi_star = 0.0;
  double delta = 0.0;
  double slope_log_err_b = 0.0;  // least-squares slope of log err_b vs t
  bool errors_decrease = false;  // majority of consecutive steps decrease
  double final_err_b = 0.0, final_err_a = 0.0;
};

struct ComparisonReport {
  std::string preset;
  std::uint64_t config_hash = 0;
  double delta_corruption = 0.0;  // nonzero for control runs
  std::vector<double> t_list;
  std::vector<SectorRow> rows;
  std::vector<SectorSummary> sectors;
};

/// Pipeline context shared by the CLI subcommands: normalized profile,
/// trajectory snapshots at the comparison times, scattering data, surface
/// context, sector partition and per-sector phases.
struct Pipeline {
  RunConfig config;
  lattice::SteplikeLattice initial;         // normalized, t = 0
  lattice::Trajectory trajectory;           // snapshots at t_list
  scattering::ScatteringData scattering;
  surface::TwoBandSpectrum spectrum;
  surface::SurfaceContext surface_ctx;
  surface::SectorPartition partition;
  std::vector<double> deltas;               // per sector, j = 1..aleph+1

  static Pipeline prepare(const RunConfig& c, bool evolve_lattice = true);
  phase::PhaseInputs phase_inputs() const;
};

/// Runs the full pipeline and tabulates |b - b_hat|, |a - a_hat| at the
/// sector midpoints for every t in the schedule. `delta_corruption` is added
/// to every phase constant (control experiments).
ComparisonReport run_compare(const RunConfig& c, double delta_corruption = 0.0);
ComparisonReport run_compare(const Pipeline& p, double delta_corruption = 0.0);

void emit_csv(const ComparisonReport& r, const std::string& path);
void emit_json(const ComparisonReport& r, const std::string& path);
ComparisonReport load_json(const std::string& path);

/// Trajectory dump: columns t, n, a, b.
void write_trajectory_csv(const lattice::Trajectory& traj, const std::string& path);

/// Finite-gap grid aligned with the trajectory format: t, n, a_hat, b_hat.
void write_finite_gap_csv(const Pipeline& p, const std::string& path);

/// Snapshot overlay for the final time: n, b, b_hat (blank where no sector
/// covers n/t), plus a and a_hat columns.
void write_overlay_csv(const Pipeline& p, double t, const std::string& path);

/// Run manifest: tool version, preset, config hash.
void write_manifest(const RunConfig& c, const std::string& path);

std::string tool_version();

}  // namespace toda::harness
