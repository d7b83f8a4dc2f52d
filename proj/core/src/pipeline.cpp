#include "toda/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace toda::harness {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string tool_version() { return "0.1.0"; }

Pipeline Pipeline::prepare(const RunConfig& c, bool evolve_lattice) {
  lattice::SteplikeLattice raw = build_profile(c);
  lattice::NormalizeResult norm = lattice::normalize(raw);
  lattice::SteplikeLattice init = std::move(norm.lattice);
  init.set_time(0.0);

  lattice::EvolveOptions eopt;
  eopt.dt = c.dt;
  eopt.snapshot_stride = c.snapshot_stride;
  eopt.probes = c.t_list;
  const double t_end =
      c.t_list.empty() ? c.t_end : std::max(c.t_end, c.t_list.back());

  lattice::Trajectory traj;
  if (evolve_lattice)
    traj = lattice::evolve(init, t_end, eopt);
  else
    traj.snapshots.push_back(init);

  scattering::AnalyzeOptions sopt;
  sopt.tol_res = c.tol_res;
  scattering::ScatteringData sd = scattering::analyze(init, sopt);

  surface::TwoBandSpectrum spec(init.backgrounds().a_minus,
                                init.backgrounds().b_minus);
  surface::SurfaceContext ctx = surface::SurfaceContext::build(spec);

  std::vector<double> gap_lams;
  for (const auto& ev : sd.eigenvalues)
    if (ev.in_gap) gap_lams.push_back(ev.lambda);
  surface::SectorPartition part = surface::xi_partition(ctx, gap_lams, c.eps);

  Pipeline p{c,
             std::move(init),
             std::move(traj),
             std::move(sd),
             spec,
             std::move(ctx),
             std::move(part),
             {}};
  phase::PhaseInputs pin = p.phase_inputs();
  for (int j = 1; j <= phase::sector_count(pin); ++j)
    p.deltas.push_back(phase::delta_j(j, pin));
  return p;
}

phase::PhaseInputs Pipeline::phase_inputs() const {
  phase::PhaseInputs in;
  in.spec = &spectrum;
  in.q_resonant = scattering.resonance.q_resonant;
  in.q1_resonant = scattering.resonance.q1_resonant;
  in.ell = scattering.resonance.ell;
  in.eps = config.eps;
  in.nodes = config.chi_nodes;
  for (const auto& ev : scattering.eigenvalues) {
    if (ev.in_gap)
      in.gap_z.push_back(ev.z);
    else if (ev.z < 0.0 && ev.z > spectrum.q)
      in.extra_z.push_back(ev.z);
  }
  std::sort(in.gap_z.begin(), in.gap_z.end(), std::greater<double>());
  // |chi| sampler memoized against the initial lattice.
  const lattice::SteplikeLattice* lat = &initial;
  auto cache = std::make_shared<std::map<double, double>>();
  in.chi_abs = [lat, cache](double s) {
    auto it = cache->find(s);
    if (it != cache->end()) return it->second;
    double v = scattering::chi_abs(s, *lat);
    (*cache)[s] = v;
    return v;
  };
  return in;
}

ComparisonReport run_compare(const RunConfig& c, double delta_corruption) {
  return run_compare(Pipeline::prepare(c), delta_corruption);
}

ComparisonReport run_compare(const Pipeline& p, double delta_corruption) {
  const RunConfig& c = p.config;
  ComparisonReport rep;
  rep.preset = c.preset;
  rep.config_hash = config_hash(c);
  rep.delta_corruption = delta_corruption;
  rep.t_list = c.t_list;

  const int sectors = static_cast<int>(p.partition.intervals.size());
  for (int j = 1; j <= sectors; ++j) {
    const auto [lo, hi] = p.partition.intervals[j - 1];
    if (!(lo < hi)) continue;
    const double xi_star = 0.5 * (lo + hi);
    const double delta = p.deltas[j - 1] + delta_corruption;
    finitegap::FiniteGapParams fg = finitegap::make_params(p.surface_ctx, delta);

    SectorSummary sum;
    sum.sector = j;
    sum.xi_lo = lo;
    sum.xi_hi = hi;
    sum.xi_star = xi_star;
    sum.delta = delta;

    std::vector<double> ts, log_errs;
    double prev_err = 0.0;
    int decreases = 0, steps = 0;
    for (double t : c.t_list) {
      const lattice::SteplikeLattice& snap = p.trajectory.at_time(t);
      const long n = std::lround(xi_star * t);
      finitegap::AB hat = finitegap::finite_gap_solution(n, t, fg);
      SectorRow row;
      row.sector = j;
      row.t = t;
      row.n = n;
      row.b_direct = snap.b(static_cast<int>(n));
      row.a_direct = snap.a(static_cast<int>(n));
      row.b_hat = hat.b_hat;
      row.a_hat = hat.a_hat;
      row.err_b = std::abs(row.b_direct - row.b_hat);
      row.err_a = std::abs(row.a_direct - row.a_hat);
      rep.rows.push_back(row);

      ts.push_back(t);
      log_errs.push_back(std::log(std::max(row.err_b, 1e-300)));
      if (steps > 0 && row.err_b < prev_err) ++decreases;
      prev_err = row.err_b;
      ++steps;
      sum.final_err_b = row.err_b;
      sum.final_err_a = row.err_a;
    }
    // Least-squares slope of log err vs t.
    const size_t m = ts.size();
    if (m >= 2) {
      double st = 0, se = 0, stt = 0, ste = 0;
      for (size_t i = 0; i < m; ++i) {
        st += ts[i];
        se += log_errs[i];
        stt += ts[i] * ts[i];
        ste += ts[i] * log_errs[i];
      }
      sum.slope_log_err_b = (m * ste - st * se) / (m * stt - st * st);
    }
    sum.errors_decrease = decreases * 2 > (steps - 1);
    rep.sectors.push_back(sum);
  }
  return rep;
}

void emit_csv(const ComparisonReport& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "sector,t,n,b_direct,b_hat,err_b,a_direct,a_hat,err_a\n";
  for (const auto& row : r.rows)
    f << row.sector << "," << fmt17(row.t) << "," << row.n << ","
      << fmt17(row.b_direct) << "," << fmt17(row.b_hat) << "," << fmt17(row.err_b)
      << "," << fmt17(row.a_direct) << "," << fmt17(row.a_hat) << ","
      << fmt17(row.err_a) << "\n";
}

namespace {

nlohmann::json row_json(const SectorRow& row) {
  return {{"sector", row.sector}, {"t", row.t},         {"n", row.n},
          {"b_direct", row.b_direct}, {"b_hat", row.b_hat}, {"err_b", row.err_b},
          {"a_direct", row.a_direct}, {"a_hat", row.a_hat}, {"err_a", row.err_a}};
}

}  // namespace

void emit_json(const ComparisonReport& r, const std::string& path) {
  nlohmann::json j;
  j["preset"] = r.preset;
  j["config_hash"] = r.config_hash;
  j["delta_corruption"] = r.delta_corruption;
  j["t_list"] = r.t_list;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) j["rows"].push_back(row_json(row));
  j["sectors"] = nlohmann::json::array();
  for (const auto& s : r.sectors)
    j["sectors"].push_back({{"sector", s.sector},
                            {"xi_lo", s.xi_lo},
                            {"xi_hi", s.xi_hi},
                            {"xi_star", s.xi_star},
                            {"delta", s.delta},
                            {"slope_log_err_b", s.slope_log_err_b},
                            {"errors_decrease", s.errors_decrease},
                            {"final_err_b", s.final_err_b},
                            {"final_err_a", s.final_err_a}});
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << j.dump(2) << "\n";
}

ComparisonReport load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  nlohmann::json j;
  f >> j;
  ComparisonReport r;
  r.preset = j.at("preset").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::uint64_t>();
  r.delta_corruption = j.at("delta_corruption").get<double>();
  r.t_list = j.at("t_list").get<std::vector<double>>();
  for (const auto& row : j.at("rows")) {
    SectorRow s;
    s.sector = row.at("sector").get<int>();
    s.t = row.at("t").get<double>();
    s.n = row.at("n").get<long>();
    s.b_direct = row.at("b_direct").get<double>();
    s.b_hat = row.at("b_hat").get<double>();
    s.err_b = row.at("err_b").get<double>();
    s.a_direct = row.at("a_direct").get<double>();
    s.a_hat = row.at("a_hat").get<double>();
    s.err_a = row.at("err_a").get<double>();
    r.rows.push_back(s);
  }
  for (const auto& sj : j.at("sectors")) {
    SectorSummary s;
    s.sector = sj.at("sector").get<int>();
    s.xi_lo = sj.at("xi_lo").get<double>();
    s.xi_hi = sj.at("xi_hi").get<double>();
    s.xi_star = sj.at("xi_star").get<double>();
    s.delta = sj.at("delta").get<double>();
    s.slope_log_err_b = sj.at("slope_log_err_b").get<double>();
    s.errors_decrease = sj.at("errors_decrease").get<bool>();
    s.final_err_b = sj.at("final_err_b").get<double>();
    s.final_err_a = sj.at("final_err_a").get<double>();
    r.sectors.push_back(s);
  }
  return r;
}

void write_trajectory_csv(const lattice::Trajectory& traj, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "t,n,a,b\n";
  for (const auto& s : traj.snapshots)
    for (int n = s.n_min(); n <= s.n_max(); ++n)
      f << fmt17(s.time()) << "," << n << "," << fmt17(s.a(n)) << ","
        << fmt17(s.b(n)) << "\n";
}

void write_finite_gap_csv(const Pipeline& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "t,n,a_hat,b_hat\n";
  for (size_t j = 0; j < p.partition.intervals.size(); ++j) {
    const auto [lo, hi] = p.partition.intervals[j];
    if (!(lo < hi)) continue;
    finitegap::FiniteGapParams fg = finitegap::make_params(p.surface_ctx, p.deltas[j]);
    for (double t : p.config.t_list) {
      const long n_lo = std::lround(lo * t), n_hi = std::lround(hi * t);
      for (long n = n_lo; n <= n_hi; ++n) {
        finitegap::AB hat = finitegap::finite_gap_solution(n, t, fg);
        f << fmt17(t) << "," << n << "," << fmt17(hat.a_hat) << ","
          << fmt17(hat.b_hat) << "\n";
      }
    }
  }
}

void write_overlay_csv(const Pipeline& p, double t, const std::string& path) {
  const lattice::SteplikeLattice& snap = p.trajectory.at_time(t);
  std::vector<finitegap::FiniteGapParams> fg;
  for (size_t j = 0; j < p.partition.intervals.size(); ++j)
    fg.push_back(finitegap::make_params(p.surface_ctx, p.deltas[j]));

  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << "n,a,b,a_hat,b_hat,sector\n";
  for (int n = snap.n_min(); n <= snap.n_max(); ++n) {
    const double xi = n / t;
    int sec = 0;
    for (size_t j = 0; j < p.partition.intervals.size(); ++j) {
      const auto [lo, hi] = p.partition.intervals[j];
      if (lo < hi && xi >= lo && xi <= hi) sec = static_cast<int>(j + 1);
    }
    f << n << "," << fmt17(snap.a(n)) << "," << fmt17(snap.b(n));
    if (sec > 0) {
      finitegap::AB hat = finitegap::finite_gap_solution(n, t, fg[sec - 1]);
      f << "," << fmt17(hat.a_hat) << "," << fmt17(hat.b_hat) << "," << sec << "\n";
    } else {
      f << ",,," << 0 << "\n";
    }
  }
}

void write_manifest(const RunConfig& c, const std::string& path) {
  nlohmann::json j;
  j["tool"] = "todashock";
  j["version"] = tool_version();
  j["preset"] = c.preset;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(c)));
  j["config_hash"] = buf;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << j.dump(2) << "\n";
}

}  // namespace toda::harness
