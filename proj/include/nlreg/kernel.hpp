#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "nlreg/geometry.hpp"
#include "nlreg/scaling.hpp"

namespace nlreg {

enum class TailKind { truncate, power_continuation, exponential_damping };

// Radial tail model for |x-y| >= r0. The near-diagonal law only pins the
// profile below r0; these are the concrete continuations the certificates are
// stated for.
//  - truncate:            J continues by the near formula up to r_inf, 0 beyond
//  - power_continuation:  J = f(1/s)/s^d everywhere (or, with decay_override p,
//                         a matched pure power s^{-d-p} beyond r0)
//  - exponential_damping: near formula times exp(-rate (s - r0)) beyond r0
struct TailModel {
  TailKind kind = TailKind::power_continuation;
  double r_inf = std::numeric_limits<double>::infinity();
  double rate = 1.0;
  std::optional<double> decay_override;

  std::string name() const;
};

using Multiplier = std::function<double(const Point&, const Point&)>;

// Spatial kernel J(x,y) = f(|x-y|^{-1}) / |x-y|^d for |x-y| < r0, with a
// radial tail model beyond r0 and finite tail mass
// M0 = sup_x int_{|y-x| >= r0} J(x,y) dy. An optional bounded multiplier
// m(x,y) in [lambda, Lambda] builds a concrete inhomogeneous K = m * J.
struct KernelSpec {
  int dim = 1;
  ScalingFunction scaling;
  TailModel tail;
  double m0 = 0.0;  // computed at construction
  Multiplier multiplier;

  double r0() const { return scaling.r0; }
  double delta1() const { return scaling.delta1; }
  double delta2() const { return scaling.delta2; }
  bool compensated() const { return scaling.delta2 >= 1.0; }

  // Radial profile J(s), s = |x-y| > 0 (multiplier not applied).
  double radial(double s) const;

  // K(x,y); throws std::invalid_argument at x = y.
  double eval(const Point& x, const Point& y) const;

  // Radius beyond which the kernel vanishes (r_inf for truncated tails,
  // +inf otherwise).
  double support_radius() const;

  // |J(r0-) - J(r0+)|; the formula does not require continuity across r0,
  // the validation report records the jump.
  double jump_at_r0() const;
};

// Builds the kernel and computes M0 by radial quadrature. Throws on divergent
// tails (e.g. power continuation with overridden decay <= 0).
KernelSpec make_kernel(int dim, const ScalingFunction& f, const TailModel& tail = {},
                       Multiplier multiplier = {});

// Tail mass at a base point x. Radial tails make this independent of x; it is
// recomputed (not read from m0) so the invariant is testable.
double tail_mass(const KernelSpec& k, const Point& x);

struct KernelValidationReport {
  double m0 = 0.0;
  double jump_at_r0 = 0.0;
  bool tail_finite = false;
  ScalingCheckReport scaling;
};

KernelValidationReport validate_kernel(const KernelSpec& k);

// Kernel class envelope lambda*J <= K <= Lambda*J defining the extremal
// operators; `symmetric` restricts to K(x,x+z) = K(x,x-z).
struct ExtremalClass {
  double lambda = 1.0;
  double Lambda = 1.0;
  bool symmetric = false;
  KernelSpec base;
};

ExtremalClass make_class(double lambda, double Lambda, bool symmetric, KernelSpec base);

// The spec'd example multiplier: lambda + (Lambda-lambda)(1+sin(x1+y1))/2.
Multiplier sine_multiplier(double lambda, double Lambda);

// c * J realized through a constant multiplier (an admissible kernel of any
// class with lambda <= c <= Lambda).
KernelSpec scale_kernel(const KernelSpec& base, double c);

}  // namespace nlreg
