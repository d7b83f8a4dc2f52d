#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "toda/pipeline.hpp"

using namespace toda;
using harness::RunConfig;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config text parsing and canonical hashing") {
  const std::string text =
      "# profile\n"
      "window -50 50\n"
      "background_left 0.5 -4.0\n"
      "background_right 0.5 0.0\n"
      "override_b 0 -1.7\n"
      "override_a 2 0.6\n"
      "dt 0.01\n"
      "t_end 20\n"
      "t_list 5 10 20\n"
      "eps 0.04\n";
  RunConfig c = harness::parse_config_text(text);
  CHECK(c.n_min == -50);
  CHECK(c.n_max == 50);
  CHECK(c.bg.b_minus == -4.0);
  CHECK(c.override_b.size() == 1);
  CHECK(c.t_list.size() == 3);
  CHECK(c.eps == 0.04);

  // hash is stable under reordering of overrides
  RunConfig c2 = c;
  c2.override_a.clear();
  c2.override_a.emplace_back(2, 0.6);
  CHECK(harness::config_hash(c) == harness::config_hash(c2));

  RunConfig c3 = c;
  c3.dt = 0.005;
  CHECK(harness::config_hash(c) != harness::config_hash(c3));

  CHECK_THROWS_AS(harness::parse_config_text("bogus_key 1\n"), ConfigError);
}

TEST_CASE("presets build admissible profiles") {
  for (const char* name : {"fig1", "vdo-pure-step"}) {
    RunConfig c = harness::preset_config(name);
    auto raw = harness::build_profile(c);
    auto norm = lattice::normalize(raw);
    CHECK(norm.lattice.backgrounds().a_plus == doctest::Approx(0.5));
    CHECK(norm.lattice.backgrounds().b_plus == doctest::Approx(0.0));
    const auto& bg = norm.lattice.backgrounds();
    CHECK(bg.b_minus + 2 * bg.a_minus < -1.0);
  }
  CHECK_THROWS_AS(harness::preset_config("nope"), ConfigError);

  // the window sizing rule leaves room for the fronts
  RunConfig c = harness::preset_config("fig1");
  auto [lo, hi] = harness::auto_window(c);
  CHECK(hi - lo >= 2 * static_cast<int>(std::ceil(c.t_end)) + 100);
}

TEST_CASE("emit: determinism, empty schedule, JSON round trip") {
  // tiny run to keep this fast
  RunConfig c = harness::preset_config("fig1");
  c.n_min = -80;
  c.n_max = 80;
  c.t_end = 20.0;
  c.t_list = {10.0, 20.0};

  auto rep = harness::run_compare(c);
  harness::emit_csv(rep, "r1.csv");
  harness::emit_csv(rep, "r2.csv");
  CHECK(slurp("r1.csv") == slurp("r2.csv"));
  CHECK(!rep.rows.empty());

  harness::emit_json(rep, "r1.json");
  auto rep2 = harness::load_json("r1.json");
  harness::emit_json(rep2, "r2.json");
  CHECK(slurp("r1.json") == slurp("r2.json"));
  CHECK(rep2.rows.size() == rep.rows.size());
  CHECK(rep2.sectors.size() == rep.sectors.size());

  // empty schedule: header-only CSV
  harness::ComparisonReport empty;
  harness::emit_csv(empty, "r0.csv");
  CHECK(slurp("r0.csv") == "sector,t,n,b_direct,b_hat,err_b,a_direct,a_hat,err_a\n");
}

TEST_CASE("sector rows stay inside their trimmed intervals") {
  RunConfig c = harness::preset_config("fig1");
  c.n_min = -120;
  c.n_max = 120;
  c.t_end = 40.0;
  c.t_list = {25.0, 40.0};
  auto p = harness::Pipeline::prepare(c);
  auto rep = harness::run_compare(p);
  for (const auto& row : rep.rows) {
    const auto [lo, hi] = p.partition.intervals[row.sector - 1];
    const double xi = static_cast<double>(row.n) / row.t;
    CHECK(xi >= lo - 1e-12);
    CHECK(xi <= hi + 1e-12);
  }
}

TEST_CASE("overlay and trajectory exports") {
  RunConfig c = harness::preset_config("fig1");
  c.n_min = -80;
  c.n_max = 80;
  c.t_end = 20.0;
  c.t_list = {20.0};
  auto p = harness::Pipeline::prepare(c);
  harness::write_trajectory_csv(p.trajectory, "traj.csv");
  harness::write_overlay_csv(p, 20.0, "overlay.csv");
  harness::write_manifest(c, "manifest.json");

  std::string traj = slurp("traj.csv");
  CHECK(traj.rfind("t,n,a,b\n", 0) == 0);
  std::string ov = slurp("overlay.csv");
  CHECK(ov.rfind("n,a,b,a_hat,b_hat,sector\n", 0) == 0);
  std::string man = slurp("manifest.json");
  CHECK(man.find("config_hash") != std::string::npos);
}

TEST_CASE("eigenvalues outside the gap are routed to the right phase inputs") {
  // deep left well: one gap eigenvalue plus one below the lower band, whose
  // z-image lies in (q, 0) and must always enter the Blaschke product
  RunConfig c;
  c.bg = lattice::Backgrounds{0.5, -4.0, 0.5, 0.0};
  c.override_b.emplace_back(0, -7.0);
  c.override_b.emplace_back(5, -1.7);
  c.n_min = -150;
  c.n_max = 150;
  c.t_end = 10.0;
  c.t_list = {10.0};
  auto p = harness::Pipeline::prepare(c);
  auto in = p.phase_inputs();
  REQUIRE(in.gap_z.size() == 1);
  REQUIRE(in.extra_z.size() == 1);
  CHECK(in.extra_z[0] > p.spectrum.q);
  CHECK(in.extra_z[0] < 0.0);
  // the extra factor enters every sector, so it cancels from the jump and the
  // dual-route identity still holds
  auto rep = phase::phase_report(in);
  REQUIRE(rep.sectors.size() == 2);
  CHECK(rep.sectors[0].residual < 1e-6);
}

TEST_CASE("vdo-pure-step pipeline locks onto the two-band asymptotics") {
  RunConfig c = harness::preset_config("vdo-pure-step");
  c.n_min = -200;
  c.n_max = 200;
  c.t_end = 60.0;
  c.t_list = {30.0, 45.0, 60.0};
  auto rep = harness::run_compare(c);
  REQUIRE(rep.sectors.size() == 2);  // the step keeps one mid-gap eigenvalue
  for (const auto& s : rep.sectors) {
    CHECK(s.final_err_b < 1e-2);
    CHECK(s.errors_decrease);
  }
}

TEST_CASE("overlay snapshot shows the three-region shock structure") {
  RunConfig c = harness::preset_config("fig1");
  c.n_min = -220;
  c.n_max = 220;
  c.t_end = 60.0;
  c.t_list = {60.0};
  auto p = harness::Pipeline::prepare(c);
  const auto& snap = p.trajectory.at_time(60.0);

  auto stats = [&](int lo, int hi) {
    double mean = 0.0, var = 0.0;
    int m = 0;
    for (int n = lo; n <= hi; ++n) {
      mean += snap.b(n);
      ++m;
    }
    mean /= m;
    for (int n = lo; n <= hi; ++n) var += (snap.b(n) - mean) * (snap.b(n) - mean);
    return std::pair{mean, var / m};
  };

  // the fastest fronts travel at roughly twice the unit sound speed, so the
  // flanks beyond |n| ~ 2.5 t are still on the backgrounds at t = 60
  auto [m_left, v_left] = stats(-215, -160);
  auto [m_mid, v_mid] = stats(-12, 12);
  auto [m_right, v_right] = stats(160, 215);
  CHECK(std::abs(m_left - (-4.0)) < 1e-3);
  CHECK(v_left < 1e-5);
  CHECK(std::abs(m_right) < 1e-3);
  CHECK(v_right < 1e-5);
  CHECK(v_mid > 0.1);        // order-one two-band oscillation
  CHECK(m_mid < -1.0);
  CHECK(m_mid > -3.0);
}
