#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "toda/lattice.hpp"

namespace toda::harness {

/// One run of the pipeline: the initial profile in original variables, the
/// integration controls and the comparison schedule.
struct RunConfig {
  std::string preset;  // set when built from a named preset

  int n_min = 0, n_max = 0;  // 0,0: sized automatically from t_end
  lattice::Backgrounds bg{0.5, -4.0, 0.5, 0.0};
  double rho = 1.0;
  std::vector<std::pair<int, double>> override_a;
  std::vector<std::pair<int, double>> override_b;

  double dt = 0.005;
  double t_end = 200.0;
  int snapshot_stride = 0;
  std::vector<double> t_list{50.0, 100.0, 150.0, 200.0};

  double eps = 0.05;
  double tol_res = 1e-6;
  int chi_nodes = 256;
  std::string out_dir = "out";
};

/// Plain-text config: one `key value...` pair per line, '#' comments.
/// Keys: window, background_left, background_right, rho, override_a,
/// override_b, dt, t_end, snapshot_stride, t_list, eps, tol_res, chi_nodes,
/// out_dir, preset.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Named experiments: "fig1" (two-sided step with a mid-gap junction site)
/// and "vdo-pure-step" (a = 1/2, b = 2 sgn n, normalized downstream).
RunConfig preset_config(const std::string& name);

/// Canonical reproducible rendering; config_hash is FNV-1a over it.
std::string canonical_text(const RunConfig& c);
std::uint64_t config_hash(const RunConfig& c);

/// Window sizing rule: half-width >= ceil(max(1, 2 a_minus_normalized) * t_end) + 250.
std::pair<int, int> auto_window(const RunConfig& c);

/// Initial profile in original (pre-normalization) variables.
lattice::SteplikeLattice build_profile(const RunConfig& c);

}  // namespace toda::harness
