#include "nlreg/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlreg {

double lemma_c1(const KernelSpec& k) {
  const ScalingFunction& f = k.scaling;
  return surface_measure(k.dim) * (f.a2 / (2.0 - f.delta2) + 1.0 / (f.a1 * f.delta1)) +
         k.m0 / f(1.0 / f.r0);
}

BumpBoundConstants lemma_c2(const ExtremalClass& cls) {
  const KernelSpec& k = cls.base;
  const ScalingFunction& f = k.scaling;
  const int d = k.dim;
  const double od = surface_measure(d);
  const bool grad_inner = f.delta2 < 1.0;  // I2 active
  const bool grad_outer = f.delta1 > 1.0;  // I3 active
  const double c1 = lemma_c1(k);
  const double base = 12.0 * d * cls.Lambda;

  BumpBoundConstants c;
  if (cls.symmetric) {
    c.c2 = base * c1;
    c.c2_active = base * c1;
    return c;
  }
  if (!grad_inner && !grad_outer)
    throw std::invalid_argument(
        "lemma_c2: delta1 <= 1 <= delta2 requires the symmetric class");
  // The displayed constant carries both gradient terms; only the case-active
  // one is meaningful (delta1 <= delta2 rules out both at once), so the
  // inactive term is dropped rather than evaluated.
  const double i2_term = grad_inner ? od * f.a2 / (1.0 - f.delta2) : 0.0;
  const double i3_term = grad_outer ? od / (f.a1 * (f.delta1 - 1.0)) : 0.0;
  c.c2 = base * (c1 + i2_term + i3_term);
  c.c2_active = base * c1 + 4.0 * od * cls.Lambda *
                                (grad_inner ? f.a2 / (1.0 - f.delta2)
                                            : 1.0 / (f.a1 * (f.delta1 - 1.0)));
  return c;
}

double lemma_c3(const ExtremalClass& cls) {
  const KernelSpec& k = cls.base;
  const int d = k.dim;
  return surface_measure(d) * cls.lambda /
         (std::pow(2.0, d + 3.0 + k.delta2()) * k.scaling.a2 * d);
}

LemmaConstants compute_constants(const ExtremalClass& cls, double eta1, double r1) {
  const KernelSpec& k = cls.base;
  if (!(eta1 > 0.0)) throw std::invalid_argument("compute_constants: eta1 must be positive");
  if (!(r1 > 0.0 && r1 < k.r0()))
    throw std::invalid_argument("compute_constants: r1 must lie in (0, r0)");

  LemmaConstants c;
  c.omega_d = surface_measure(k.dim);
  c.eta1 = eta1;
  c.r1 = r1;
  c.c1 = lemma_c1(k);
  const BumpBoundConstants bb = lemma_c2(cls);
  c.c2 = bb.c2;
  c.c2_active = bb.c2_active;
  c.c3 = lemma_c3(cls);

  const double gap = bump_gap();  // beta(1/2) - beta(3/4) = 95/256
  const double theta_formula =
      std::min(c.c3 / (8.0 * c.c2), (1.0 - std::pow(2.0, -eta1)) / (2.0 * gap));
  const double cap = 0.25 * (1.0 - 1e-9);  // the proof additionally needs theta < 1/4
  c.theta = std::min(theta_formula, cap);
  c.theta_capped = theta_formula > cap;
  c.gamma = c.theta * gap;
  c.alpha = -std::log2(1.0 - c.gamma);

  if (!(c.gamma > 0.0 && c.gamma < 1.0 - std::pow(2.0, -eta1)))
    throw std::runtime_error("compute_constants: gamma left (0, 1 - 2^{-eta1})");
  if (!(c.alpha < eta1))
    throw std::runtime_error("compute_constants: alpha >= eta1");
  return c;
}

double theorem_epsilon(const ExtremalClass& cls) {
  const KernelSpec& k = cls.base;
  const int d = k.dim;
  return surface_measure(d) * cls.lambda /
         (cls.Lambda * std::pow(2.0, d + 5.0 + k.delta2()) * k.scaling.a2 * d);
}

}  // namespace nlreg
