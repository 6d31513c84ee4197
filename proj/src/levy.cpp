#include "nlreg/levy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlreg/quadrature.hpp"

namespace nlreg {

double psi_from_bernstein(const BernsteinSpec& b, double t) {
  if (t < 0.0) throw std::invalid_argument("psi: negative argument");
  return b.phi(t * t);
}

namespace {

// Golden-section maximum refinement on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

double psi_star(const BernsteinSpec& b, double t) {
  if (t < 0.0) throw std::invalid_argument("psi_star: negative argument");
  if (t == 0.0) return psi_from_bernstein(b, 0.0);
  const auto psi = [&](double s) { return psi_from_bernstein(b, s); };

  const int n = 256;
  double best = psi(t);
  double prev_s = 0.0, prev_v = psi(0.0);
  bool monotone = true;
  for (int i = 1; i <= n; ++i) {
    const double s = t * i / n;
    const double v = psi(s);
    if (v < prev_v * (1.0 - 1e-14)) {
      monotone = false;
      // refine the descending bracket for an interior maximum
      const double lo = std::max(0.0, prev_s - t / n);
      best = std::max(best, golden_max(psi, lo, s));
    }
    best = std::max(best, v);
    prev_s = s;
    prev_v = v;
  }
  return monotone ? psi(t) : best;
}

ConditionHReport check_H(const BernsteinSpec& b, std::span<const double> t_grid,
                         std::span<const double> s_grid) {
  if (s_grid.empty() || t_grid.empty())
    throw std::invalid_argument("check_H: empty grid");
  ConditionHReport rep;
  rep.r0 = b.default_r0();
  rep.fit = fit_scaling_certificate([&](double t) { return psi_from_bernstein(b, t); },
                                    s_grid, t_grid);
  rep.pass = rep.fit.ok && rep.fit.a1 > 0.0;
  return rep;
}

ConditionHReport check_H(const BernsteinSpec& b) {
  const auto s = default_s_grid();
  const auto t = default_t_grid(b.default_r0());
  return check_H(b, t, s);
}

namespace {

struct Window {
  double t_min, t_max;
};

// Truncation window such that the omitted integrand tails are each below
// `tail_tol` times a crude scale of the integral, using the explicit
// exponential / power envelopes of the subordination integrand.
Window subordination_window(const BernsteinSpec& b, int dim, double xnorm, double tail_tol) {
  const double x2 = xnorm * xnorm;
  // singular-end exponent of (4 pi t)^{-d/2} mu(t): most singular branch
  const double q_left = dim / 2.0 + 1.0 + b.alpha / 2.0;
  // decay exponent at large t: slowest branch (beta for the mixed family)
  const double q_right =
      dim / 2.0 + 1.0 + (b.family == BernsteinFamily::mixed ? b.beta : b.alpha) / 2.0;
  const double t_peak = std::max(x2 / (4.0 * q_left), 1e-300);

  double t_min = t_peak;
  for (int i = 0; i < 600; ++i) {
    // relative left tail: power growth against exponential cutoff
    const double bound =
        std::pow(t_peak / t_min, q_left) * std::exp(-x2 / (4.0 * t_min) + x2 / (4.0 * t_peak));
    if (bound < tail_tol) break;
    t_min *= 0.7;
  }
  double t_max = std::max(t_peak, x2 / 4.0);
  const double decay_rate =
      b.family == BernsteinFamily::relativistic ? std::pow(b.m, 2.0 / b.alpha) : 0.0;
  for (int i = 0; i < 4000; ++i) {
    // right tail: power envelope plus exponential damping when present
    double bound = std::pow(t_max / t_peak, 1.0 - q_right);
    if (decay_rate > 0.0) bound *= std::exp(-decay_rate * (t_max - t_peak));
    if (bound < tail_tol) break;
    t_max *= 1.5;
  }
  return {t_min, t_max};
}

}  // namespace

double levy_density_sbm(const BernsteinSpec& b, int dim, double xnorm, double rel_tol) {
  if (!(xnorm > 0.0)) throw std::invalid_argument("levy_density_sbm: need |x| > 0");
  if (!b.has_levy_measure_density())
    throw std::runtime_error("levy_density_sbm: family without explicit mu density: " +
                             b.family_name());
  const double x2 = xnorm * xnorm;
  const Window win = subordination_window(b, dim, xnorm, 0.1 * rel_tol);

  // integrate in w = log t; the integrand becomes a smooth bump
  const auto f = [&](double w) {
    const double t = std::exp(w);
    return std::pow(4.0 * M_PI * t, -dim / 2.0) * std::exp(-x2 / (4.0 * t)) *
           b.levy_measure_density(t) * t;
  };
  QuadratureConfig cfg;
  cfg.rel_tol = rel_tol * 0.1;
  cfg.abs_tol = 0.0;
  cfg.max_panels = 8000;
  const QuadResult q = integrate_adaptive(f, std::log(win.t_min), std::log(win.t_max), cfg);
  if (!q.converged)
    throw std::runtime_error("levy_density_sbm: subordination quadrature did not converge");
  return q.value;
}

double stable_levy_density(int dim, double alpha, double xnorm) {
  const double c = alpha * std::pow(2.0, alpha - 1.0) * std::tgamma((dim + alpha) / 2.0) /
                   (std::pow(M_PI, dim / 2.0) * std::tgamma(1.0 - alpha / 2.0));
  return c * std::pow(xnorm, -dim - alpha);
}

NuBoundsReport verify_nu_bounds(const BernsteinSpec& b, int dim,
                                std::span<const double> xnorms) {
  NuBoundsReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  const double r0 = b.default_r0();
  for (double x : xnorms) {
    if (!(x > 0.0 && x < r0))
      throw std::invalid_argument("verify_nu_bounds: samples must lie in (0, r0)");
    const double nu = levy_density_sbm(b, dim, x);
    const double ps = psi_star(b, 1.0 / x);
    const double ratio = nu * std::pow(x, dim) / ps;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);

    CheckRecord rec;
    rec.check = "sec4.nu_ratio";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "family=%s x=%.6g", b.family_name().c_str(), x);
    rec.inputs = buf;
    rec.lhs = ratio;
    rec.rhs = ratio;
    rec.margin = ratio;
    rec.pass = std::isfinite(ratio) && ratio > 0.0;
    rep.checks.add(rec);
  }
  rep.spread = rep.min_ratio > 0.0 ? rep.max_ratio / rep.min_ratio
                                   : std::numeric_limits<double>::infinity();
  rep.pass = rep.checks.pass && std::isfinite(rep.spread);
  return rep;
}

}  // namespace nlreg
