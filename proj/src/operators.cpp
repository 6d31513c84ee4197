#include "nlreg/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace nlreg {

namespace {

std::vector<double> operator_splits(const KernelSpec& k, const SmoothFunction& u,
                                    const Point& x) {
  std::vector<double> splits = {k.r0()};
  if (k.tail.kind == TailKind::truncate) splits.push_back(k.tail.r_inf);
  if (u.feature_radii) {
    for (double s : u.feature_radii(x))
      if (s > 0.0) splits.push_back(s);
  }
  return splits;
}

Point require_gradient(const SmoothFunction& u, const Point& x) {
  if (!u.gradient)
    throw std::invalid_argument("operator: compensated kernel needs a gradient for u");
  return u.gradient(x);
}

}  // namespace

QuadResult apply_linear(const KernelSpec& k, const SmoothFunction& u, const Point& x,
                        const QuadratureConfig& cfg) {
  const AngularRule rule(k.dim);
  const double ux = u.value(x);
  const bool comp = k.compensated();
  const Point grad = comp ? require_gradient(u, x) : Point{0.0, 0.0};
  const double r0v = k.r0();

  const auto F = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
      const Point y = add(x, scale(rule.dirs[i], s));
      double g = u.value(y) - ux;
      if (comp && s < r0v) g -= s * dot(grad, rule.dirs[i], k.dim);
      if (k.multiplier) g *= k.multiplier(x, y);
      acc += rule.weights[i] * g;
    }
    return std::pow(s, k.dim - 1) * k.radial(s) * acc;
  };
  return radial_integral(F, operator_splits(k, u, x), k.support_radius(), cfg);
}

QuadResult apply_linear(const KernelSpec& k, const GridFunction& u, int ix, int iy,
                        const QuadratureConfig& cfg) {
  const SmoothFunction view = grid_smooth_view(u, ix, iy);
  return apply_linear(k, view, u.node(ix, iy), cfg);
}

namespace {

QuadResult extremal_impl(const ExtremalClass& cls, const SmoothFunction& u, const Point& x,
                         int sign, const QuadratureConfig& cfg) {
  const KernelSpec& k = cls.base;
  if (cls.symmetric) return second_difference_form(cls, u, x, sign, cfg);

  const AngularRule rule(k.dim);
  const double ux = u.value(x);
  const bool comp = k.compensated();
  const Point grad = comp ? require_gradient(u, x) : Point{0.0, 0.0};
  const double r0v = k.r0();
  const double up_coeff = sign > 0 ? cls.Lambda : cls.lambda;
  const double dn_coeff = sign > 0 ? cls.lambda : cls.Lambda;

  const auto F = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
      const Point y = add(x, scale(rule.dirs[i], s));
      double g = u.value(y) - ux;
      if (comp && s < r0v) g -= s * dot(grad, rule.dirs[i], k.dim);
      acc += rule.weights[i] * (g > 0.0 ? up_coeff * g : dn_coeff * g);
    }
    return std::pow(s, k.dim - 1) * k.radial(s) * acc;
  };
  return radial_integral(F, operator_splits(k, u, x), k.support_radius(), cfg);
}

}  // namespace

QuadResult extremal_plus(const ExtremalClass& cls, const SmoothFunction& u, const Point& x,
                         const QuadratureConfig& cfg) {
  return extremal_impl(cls, u, x, +1, cfg);
}

QuadResult extremal_minus(const ExtremalClass& cls, const SmoothFunction& u, const Point& x,
                          const QuadratureConfig& cfg) {
  return extremal_impl(cls, u, x, -1, cfg);
}

QuadResult extremal_plus(const ExtremalClass& cls, const GridFunction& u, int ix, int iy,
                         const QuadratureConfig& cfg) {
  const SmoothFunction view = grid_smooth_view(u, ix, iy);
  return extremal_impl(cls, view, u.node(ix, iy), +1, cfg);
}

QuadResult extremal_minus(const ExtremalClass& cls, const GridFunction& u, int ix, int iy,
                          const QuadratureConfig& cfg) {
  const SmoothFunction view = grid_smooth_view(u, ix, iy);
  return extremal_impl(cls, view, u.node(ix, iy), -1, cfg);
}

QuadResult second_difference_form(const ExtremalClass& cls, const SmoothFunction& u,
                                  const Point& x, int sign, const QuadratureConfig& cfg) {
  const KernelSpec& k = cls.base;
  if (k.multiplier)
    throw std::invalid_argument("second_difference_form: class envelope uses the bare J");
  const AngularRule rule(k.dim);
  const double ux = u.value(x);
  const double up_coeff = sign > 0 ? cls.Lambda : cls.lambda;
  const double dn_coeff = sign > 0 ? cls.lambda : cls.Lambda;

  const auto F = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
      const Point z = scale(rule.dirs[i], s);
      const double d2 = u.value(add(x, z)) + u.value(sub(x, z)) - 2.0 * ux;
      acc += rule.weights[i] * (d2 > 0.0 ? up_coeff * d2 : dn_coeff * d2);
    }
    return 0.5 * std::pow(s, k.dim - 1) * k.radial(s) * acc;
  };
  return radial_integral(F, operator_splits(k, u, x), k.support_radius(), cfg);
}

}  // namespace nlreg
