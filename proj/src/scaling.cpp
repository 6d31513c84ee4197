#include "nlreg/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlreg {

double ScalingFunction::operator()(double t) const {
  if (t < 0.0) throw std::invalid_argument("scaling function: negative argument");
  if (t == 0.0) return family == ScalingFamily::bernstein_induced ? phi.phi(0.0) : 0.0;
  switch (family) {
    case ScalingFamily::power:
      return std::pow(t, alpha);
    case ScalingFamily::log_perturbed:
      return std::pow(t, alpha) * std::pow(std::log1p(t), p);
    case ScalingFamily::mixed:
      return std::pow(t, alpha) + std::pow(t, beta);
    case ScalingFamily::bernstein_induced:
      return phi.phi(t * t);
  }
  throw std::logic_error("unreachable");
}

std::string ScalingFunction::family_name() const {
  switch (family) {
    case ScalingFamily::power: return "power";
    case ScalingFamily::log_perturbed: return "log_perturbed";
    case ScalingFamily::mixed: return "mixed";
    case ScalingFamily::bernstein_induced: return "bernstein_induced";
  }
  return "?";
}

void ScalingFunction::validate() const {
  if (!(a1 > 0.0 && a2 > 0.0)) throw std::invalid_argument("scaling: a1, a2 must be positive");
  if (!(delta1 > 0.0 && delta1 < 2.0 && delta2 > 0.0 && delta2 < 2.0))
    throw std::invalid_argument("scaling: delta1, delta2 must lie in (0,2)");
  if (delta1 > delta2) throw std::invalid_argument("scaling: delta1 <= delta2 required");
  if (!(r0 > 0.0)) throw std::invalid_argument("scaling: r0 must be positive");
}

ScalingFunction make_power_scaling(double alpha, double r0) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("power scaling: alpha must lie in (0,2)");
  ScalingFunction f;
  f.family = ScalingFamily::power;
  f.alpha = alpha;
  f.a1 = f.a2 = 1.0;
  f.delta1 = f.delta2 = alpha;
  f.r0 = r0;
  f.validate();
  return f;
}

ScalingFunction make_log_perturbed_scaling(double alpha, double p, double r0) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("log scaling: alpha must lie in (0,2)");
  ScalingFunction f;
  f.family = ScalingFamily::log_perturbed;
  f.alpha = alpha;
  f.p = p;
  f.r0 = r0;
  // The log factor is sub-polynomial: for r0 <= 1 the ratio of logs obeys
  // 1 <= log1p(st)/log1p(t) <= 3.2 * s^{0.2} over s >= 1, t >= 1/r0, so a
  // 0.2|p| exponent widening with constant 3.5^|p| certifies each side.
  const double widen = 0.2 * std::abs(p);
  const double c = std::pow(3.5, std::abs(p));
  if (p >= 0.0) {
    f.delta1 = alpha;
    f.a1 = 1.0;
    f.delta2 = alpha + widen;
    f.a2 = c;
  } else {
    f.delta1 = alpha - widen;
    f.a1 = 1.0 / c;
    f.delta2 = alpha;
    f.a2 = 1.0;
  }
  if (r0 > 1.0)
    throw std::invalid_argument("log scaling: certificate shipped for r0 <= 1 only");
  f.validate();
  return f;
}

ScalingFunction make_mixed_scaling(double alpha, double beta, double r0) {
  if (!(beta > 0.0 && beta < alpha && alpha < 2.0))
    throw std::invalid_argument("mixed scaling: need 0 < beta < alpha < 2");
  ScalingFunction f;
  f.family = ScalingFamily::mixed;
  f.alpha = alpha;
  f.beta = beta;
  f.a1 = f.a2 = 1.0;
  f.delta1 = beta;
  f.delta2 = alpha;
  f.r0 = r0;
  f.validate();
  return f;
}

ScalingFunction make_bernstein_scaling(const BernsteinSpec& phi, double r0) {
  ScalingFunction f;
  f.family = ScalingFamily::bernstein_induced;
  f.phi = phi;
  f.r0 = r0 > 0.0 ? r0 : phi.default_r0();

  const auto s_grid = default_s_grid();
  const auto t_grid = default_t_grid(f.r0);
  const auto fit = fit_scaling_certificate([&](double t) { return f(t); }, s_grid, t_grid);
  if (!fit.ok)
    throw std::invalid_argument("bernstein scaling: no valid exponent sandwich on the grid");
  f.delta1 = fit.delta1 * (1.0 - 1e-9);
  f.delta2 = fit.delta2 * (1.0 + 1e-9);
  f.a1 = fit.a1 * (1.0 - 1e-9);
  f.a2 = fit.a2 * (1.0 + 1e-9);
  f.validate();
  return f;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo * std::exp(step * i);
  v.back() = hi;
  return v;
}

std::vector<double> default_s_grid() { return log_spaced(1.0, 1e3, 32); }
std::vector<double> default_t_grid(double r0) { return log_spaced(1.0 / r0, 1e3 / r0, 32); }

ScalingCheckReport check_weak_scaling(const ScalingFunction& f,
                                      std::span<const double> s_grid,
                                      std::span<const double> t_grid, double tol) {
  if (s_grid.empty() || t_grid.empty())
    throw std::invalid_argument("check_weak_scaling: empty grid");
  ScalingCheckReport rep;
  rep.worst_lower_margin = std::numeric_limits<double>::infinity();
  rep.worst_upper_margin = std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  for (double s : s_grid) {
    if (s < 1.0) throw std::invalid_argument("check_weak_scaling: s grid must be >= 1");
    for (double t : t_grid) {
      if (t < 1.0 / f.r0 - 1e-12)
        throw std::invalid_argument("check_weak_scaling: t grid must be >= 1/r0");
      const double ratio = f(s * t) / f(t);
      const double lower = ratio / (f.a1 * std::pow(s, f.delta1)) - 1.0;
      const double upper = f.a2 * std::pow(s, f.delta2) / ratio - 1.0;
      rep.worst_lower_margin = std::min(rep.worst_lower_margin, lower);
      rep.worst_upper_margin = std::min(rep.worst_upper_margin, upper);
      const double m = std::min(lower, upper);
      if (m < worst) {
        worst = m;
        rep.worst_s = s;
        rep.worst_t = t;
      }
    }
  }
  rep.pass = rep.worst_lower_margin >= -tol && rep.worst_upper_margin >= -tol;
  return rep;
}

ScalingCheckReport check_weak_scaling(const ScalingFunction& f, double tol) {
  const auto s = default_s_grid();
  const auto t = default_t_grid(f.r0);
  return check_weak_scaling(f, s, t, tol);
}

bool is_nondecreasing_on_samples(const ScalingFunction& f, double t_max, int n) {
  const auto grid = log_spaced(1e-8, t_max, n);
  double prev = f(0.0);
  for (double t : grid) {
    const double v = f(t);
    if (v < prev * (1.0 - 1e-12) - 1e-300) return false;
    prev = v;
  }
  return true;
}

FittedCertificate fit_scaling_certificate(const std::function<double(double)>& f,
                                          std::span<const double> s_grid,
                                          std::span<const double> t_grid) {
  FittedCertificate fit;
  double emin = std::numeric_limits<double>::infinity();
  double emax = -std::numeric_limits<double>::infinity();
  for (double s : s_grid) {
    if (s <= 1.0 + 1e-9) continue;
    const double ls = std::log(s);
    for (double t : t_grid) {
      const double ft = f(t);
      const double fst = f(s * t);
      if (!(ft > 0.0) || !(fst > 0.0) || !std::isfinite(fst)) return fit;
      emin = std::min(emin, std::log(fst / ft) / ls);
      emax = std::max(emax, std::log(fst / ft) / ls);
    }
  }
  if (!std::isfinite(emin) || !std::isfinite(emax)) return fit;
  fit.delta1 = emin;
  fit.delta2 = emax;
  // Envelope exponents leave residual constants at 1 up to rounding.
  double a1 = 1.0, a2 = 1.0;
  for (double s : s_grid) {
    if (s <= 1.0 + 1e-9) continue;
    for (double t : t_grid) {
      const double ratio = f(s * t) / f(t);
      a1 = std::min(a1, ratio / std::pow(s, fit.delta1));
      a2 = std::max(a2, ratio / std::pow(s, fit.delta2));
    }
  }
  fit.a1 = a1;
  fit.a2 = a2;
  fit.ok = fit.delta1 > 0.0 && fit.delta2 < 2.0;
  return fit;
}

}  // namespace nlreg
