#include "toda/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace toda::quad {

namespace {

Rule compute_gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = std::acos(-1.0);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and P_n'(x).
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[k] = -x;
    r.x[n - 1 - k] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[k] = w;
    r.w[n - 1 - k] = w;
  }
  return r;
}

std::map<int, Rule>& rule_cache() {
  static std::map<int, Rule> cache;
  return cache;
}
std::mutex cache_mutex;

template <typename T, typename F>
T gl_segment(const F& f, const std::complex<double>& a,
             const std::complex<double>& b, int n);

template <typename F>
cplx gl_apply(const F& f, cplx a, cplx b, int n) {
  const Rule& r = gauss_legendre(n);
  const cplx mid = 0.5 * (a + b);
  const cplx half = 0.5 * (b - a);
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) acc += r.w[k] * f(mid + half * r.x[k]);
  return acc * half;
}

template <typename F>
double gl_apply_real(const F& f, double a, double b, int n) {
  const Rule& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += r.w[k] * f(mid + half * r.x[k]);
  return acc * half;
}

template <typename T, typename F, typename Apply>
T adaptive(const F& f, const Apply& apply, const Options& opt, const char* what) {
  int n = opt.n0;
  T prev = apply(f, n);
  for (int d = 0; d < opt.max_doublings; ++d) {
    n *= 2;
    T cur = apply(f, n);
    double err = std::abs(cur - prev);
    if (err <= opt.rel_tol * std::abs(cur) + opt.abs_floor) return cur;
    prev = cur;
  }
  throw QuadratureError(std::string("quadrature did not converge: ") + what);
}

}  // namespace

const Rule& gauss_legendre(int n) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& cache = rule_cache();
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

cplx segment(const std::function<cplx(const cplx&)>& f, cplx a, cplx b,
             const Options& opt) {
  return adaptive<cplx>(
      f, [&](const auto& g, int n) { return gl_apply(g, a, b, n); }, opt,
      "segment");
}

double segment(const std::function<double(double)>& f, double a, double b,
               const Options& opt) {
  return adaptive<double>(
      f, [&](const auto& g, int n) { return gl_apply_real(g, a, b, n); }, opt,
      "segment");
}

double chebyshev(const std::function<double(double)>& f, double a, double b,
                 const Options& opt) {
  const double pi = std::acos(-1.0);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto apply = [&](const std::function<double(double)>& g, int n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
      double x = mid + half * std::cos((2.0 * k - 1.0) * pi / (2.0 * n));
      acc += g(x);
    }
    return acc * pi / n;
  };
  return adaptive<double>(f, apply, opt, "chebyshev");
}

double sqrt_endpoint(const std::function<double(double)>& g, double a, double b,
                     double e, const Options& opt) {
  // x = e + s*u^2 with s spanning the interval from the singular end.
  double far = (e == a) ? b : a;
  double span = far - e;
  auto h = [&](double u) { return g(e + span * u * u) * 2.0 * span * u; };
  double val = adaptive<double>(
      h, [&](const auto& f, int n) { return gl_apply_real(f, 0.0, 1.0, n); },
      opt, "sqrt_endpoint");
  return (e == a) ? val : -val;
}

double sqrt_endpoint_regular(const std::function<double(double)>& f, double a,
                             double b, double e, const Options& opt) {
  // 1/sqrt(|x-e|) dx = 2 sqrt(|span|) du under x = e + span u^2; valid for
  // a < b with the singular end e at either side.
  const double far = (e == a) ? b : a;
  const double span = far - e;
  const double root = std::sqrt(std::abs(span));
  auto h = [&](double u) { return f(e + span * u * u); };
  double val = adaptive<double>(
      h, [&](const auto& g, int n) { return gl_apply_real(g, 0.0, 1.0, n); },
      opt, "sqrt_endpoint_regular");
  return 2.0 * root * val;
}

cplx segment_inv_sqrt(const std::function<cplx(const cplx&)>& f, cplx a, cplx b,
                      const Options& opt) {
  const cplx span = b - a;
  auto h = [&](const cplx& u) { return f(a + span * u * u); };
  cplx val = adaptive<cplx>(
      h,
      [&](const auto& g, int n) { return gl_apply(g, cplx(0.0), cplx(1.0), n); },
      opt, "segment_inv_sqrt");
  return 2.0 * std::sqrt(span) * val;
}

cplx segment_sqrt_endpoint(const std::function<cplx(const cplx&)>& g, cplx a,
                           cplx b, const Options& opt) {
  const cplx span = b - a;
  auto h = [&](const cplx& u) { return g(a + span * u * u) * 2.0 * span * u; };
  return adaptive<cplx>(
      h,
      [&](const auto& f, int n) { return gl_apply(f, cplx(0.0), cplx(1.0), n); },
      opt, "segment_sqrt_endpoint");
}

double tail_to_minus_inf(const std::function<double(double)>& g, double a,
                         const Options& opt) {
  auto h = [&](double u) {
    double x = a + 1.0 - 1.0 / u;
    return g(x) / (u * u);
  };
  return adaptive<double>(
      h, [&](const auto& f, int n) { return gl_apply_real(f, 0.0, 1.0, n); },
      opt, "tail_to_minus_inf");
}

}  // namespace toda::quad
