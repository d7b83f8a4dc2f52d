#include "toda/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace toda::harness {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  c.t_list.clear();
  std::istringstream in(text);
  std::string line;
  bool have_tlist = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "window") {
      if (!(ls >> c.n_min >> c.n_max)) throw ConfigError("window needs two integers");
    } else if (key == "background_left") {
      if (!(ls >> c.bg.a_minus >> c.bg.b_minus)) throw ConfigError("background_left needs a b");
    } else if (key == "background_right") {
      if (!(ls >> c.bg.a_plus >> c.bg.b_plus)) throw ConfigError("background_right needs a b");
    } else if (key == "rho") {
      ls >> c.rho;
    } else if (key == "override_a") {
      int n; double v;
      if (!(ls >> n >> v)) throw ConfigError("override_a needs n value");
      c.override_a.emplace_back(n, v);
    } else if (key == "override_b") {
      int n; double v;
      if (!(ls >> n >> v)) throw ConfigError("override_b needs n value");
      c.override_b.emplace_back(n, v);
    } else if (key == "dt") {
      ls >> c.dt;
    } else if (key == "t_end") {
      ls >> c.t_end;
    } else if (key == "snapshot_stride") {
      ls >> c.snapshot_stride;
    } else if (key == "t_list") {
      have_tlist = true;
      double t;
      while (ls >> t) c.t_list.push_back(t);
    } else if (key == "eps") {
      ls >> c.eps;
    } else if (key == "tol_res") {
      ls >> c.tol_res;
    } else if (key == "chi_nodes") {
      ls >> c.chi_nodes;
    } else if (key == "out_dir") {
      ls >> c.out_dir;
    } else if (key == "preset") {
      std::string name;
      ls >> name;
      RunConfig base = preset_config(name);
      base.out_dir = c.out_dir;
      c = base;
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  if (!have_tlist && c.t_list.empty()) c.t_list = {50.0, 100.0, 150.0, 200.0};
  std::sort(c.t_list.begin(), c.t_list.end());
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "fig1") {
    // Two-sided step with one mid-gap junction site; already normalized.
    c.bg = lattice::Backgrounds{0.5, -4.0, 0.5, 0.0};
    c.override_b.emplace_back(0, -1.7);
    return c;
  }
  if (name == "vdo-pure-step") {
    // a = 1/2, b = 2 sgn n in original variables; sgn 0 = 0.
    c.bg = lattice::Backgrounds{0.5, -2.0, 0.5, 2.0};
    c.override_b.emplace_back(0, 0.0);
    return c;
  }
  throw ConfigError("unknown preset: " + name);
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream out;
  out << "window " << c.n_min << " " << c.n_max << "\n";
  out << "background_left " << fmt17(c.bg.a_minus) << " " << fmt17(c.bg.b_minus) << "\n";
  out << "background_right " << fmt17(c.bg.a_plus) << " " << fmt17(c.bg.b_plus) << "\n";
  out << "rho " << fmt17(c.rho) << "\n";
  auto oa = c.override_a;
  auto ob = c.override_b;
  std::sort(oa.begin(), oa.end());
  std::sort(ob.begin(), ob.end());
  for (auto& [n, v] : oa) out << "override_a " << n << " " << fmt17(v) << "\n";
  for (auto& [n, v] : ob) out << "override_b " << n << " " << fmt17(v) << "\n";
  out << "dt " << fmt17(c.dt) << "\n";
  out << "t_end " << fmt17(c.t_end) << "\n";
  out << "snapshot_stride " << c.snapshot_stride << "\n";
  out << "t_list";
  for (double t : c.t_list) out << " " << fmt17(t);
  out << "\n";
  out << "eps " << fmt17(c.eps) << "\n";
  out << "tol_res " << fmt17(c.tol_res) << "\n";
  out << "chi_nodes " << c.chi_nodes << "\n";
  return out.str();
}

std::uint64_t config_hash(const RunConfig& c) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::pair<int, int> auto_window(const RunConfig& c) {
  if (c.n_min != 0 || c.n_max != 0) return {c.n_min, c.n_max};
  const double a_norm = c.bg.a_minus / (2.0 * c.bg.a_plus);
  const int half =
      static_cast<int>(std::ceil(std::max(1.0, 2.0 * a_norm) * c.t_end)) + 250;
  return {-half, half};
}

lattice::SteplikeLattice build_profile(const RunConfig& c) {
  auto [lo, hi] = auto_window(c);
  lattice::SteplikeLattice s(lo, hi, c.bg, c.rho);
  for (auto& [n, v] : c.override_a) s.set_a(n, v);
  for (auto& [n, v] : c.override_b) s.set_b(n, v);
  return s;
}

}  // namespace toda::harness
