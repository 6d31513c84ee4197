#include "nlreg/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "nlreg/quadrature.hpp"

namespace nlreg {

std::string TailModel::name() const {
  switch (kind) {
    case TailKind::truncate: return "truncate";
    case TailKind::power_continuation: return "power_continuation";
    case TailKind::exponential_damping: return "exponential_damping";
  }
  return "?";
}

double KernelSpec::radial(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("kernel: radius must be positive");
  const double r0v = scaling.r0;
  const auto near = [&](double t) { return scaling(1.0 / t) / std::pow(t, dim); };
  if (s < r0v) return near(s);
  switch (tail.kind) {
    case TailKind::truncate:
      return s < tail.r_inf ? near(s) : 0.0;
    case TailKind::power_continuation:
      if (tail.decay_override) {
        const double p = *tail.decay_override;
        return near(r0v) * std::pow(r0v / s, dim + p);
      }
      return near(s);
    case TailKind::exponential_damping:
      return near(s) * std::exp(-tail.rate * (s - r0v));
  }
  throw std::logic_error("unreachable");
}

double KernelSpec::eval(const Point& x, const Point& y) const {
  const double s = dist(x, y, dim);
  if (s == 0.0) throw std::invalid_argument("kernel: singular point x = y");
  if (s >= support_radius()) return 0.0;
  const double j = radial(s);
  return multiplier ? multiplier(x, y) * j : j;
}

double KernelSpec::support_radius() const {
  if (tail.kind == TailKind::truncate) return tail.r_inf;
  return std::numeric_limits<double>::infinity();
}

double KernelSpec::jump_at_r0() const {
  const double r0v = scaling.r0;
  const double inner = scaling(1.0 / r0v) / std::pow(r0v, dim);
  double outer;
  if (tail.kind == TailKind::truncate && tail.r_inf <= r0v)
    outer = 0.0;
  else
    outer = radial(r0v);
  return std::abs(inner - outer);
}

KernelSpec make_kernel(int dim, const ScalingFunction& f, const TailModel& tail,
                       Multiplier multiplier) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("kernel: only d = 1, 2 supported");
  f.validate();
  if (tail.kind == TailKind::truncate) {
    if (!(tail.r_inf >= f.r0))
      throw std::invalid_argument("kernel: truncation radius below r0");
  }
  if (tail.kind == TailKind::power_continuation && tail.decay_override &&
      *tail.decay_override <= 0.0)
    throw std::invalid_argument(
        "kernel: divergent tail (power continuation with exponent <= d)");
  if (tail.kind == TailKind::exponential_damping && !(tail.rate > 0.0))
    throw std::invalid_argument("kernel: damping rate must be positive");

  KernelSpec k;
  k.dim = dim;
  k.scaling = f;
  k.tail = tail;
  k.multiplier = std::move(multiplier);
  k.m0 = tail_mass(k, Point{0.0, 0.0});
  return k;
}

double tail_mass(const KernelSpec& k, const Point& x) {
  (void)x;  // radial tails: independent of the base point
  const double r0v = k.r0();
  const double od = surface_measure(k.dim);
  const auto integrand = [&](double s) {
    return od * std::pow(s, k.dim - 1) * k.radial(s);
  };
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-10;
  QuadResult q;
  const double sup = k.support_radius();
  if (std::isfinite(sup)) {
    if (sup <= r0v) return 0.0;
    q = integrate_adaptive(integrand, r0v, sup, cfg);
  } else {
    q = integrate_to_infinity(integrand, r0v, cfg);
  }
  if (!q.converged)
    throw std::runtime_error("tail_mass: divergent or non-convergent tail model");
  return q.value;
}

KernelValidationReport validate_kernel(const KernelSpec& k) {
  KernelValidationReport rep;
  rep.jump_at_r0 = k.jump_at_r0();
  try {
    rep.m0 = tail_mass(k, Point{0.0, 0.0});
    rep.tail_finite = true;
  } catch (const std::runtime_error&) {
    rep.tail_finite = false;
  }
  rep.scaling = check_weak_scaling(k.scaling);
  return rep;
}

ExtremalClass make_class(double lambda, double Lambda, bool symmetric, KernelSpec base) {
  if (!(lambda > 0.0) || !(Lambda > 0.0) || lambda > Lambda)
    throw std::invalid_argument("class: need 0 < lambda <= Lambda");
  ExtremalClass cls;
  cls.lambda = lambda;
  cls.Lambda = Lambda;
  cls.symmetric = symmetric;
  cls.base = std::move(base);
  return cls;
}

Multiplier sine_multiplier(double lambda, double Lambda) {
  return [lambda, Lambda](const Point& x, const Point& y) {
    return lambda + (Lambda - lambda) * (1.0 + std::sin(x[0] + y[0])) / 2.0;
  };
}

KernelSpec scale_kernel(const KernelSpec& base, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("scale_kernel: factor must be positive");
  KernelSpec k = base;
  k.multiplier = [c](const Point&, const Point&) { return c; };
  return k;
}

}  // namespace nlreg
