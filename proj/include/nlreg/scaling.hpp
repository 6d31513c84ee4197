#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nlreg/bernstein.hpp"

namespace nlreg {

enum class ScalingFamily { power, log_perturbed, mixed, bernstein_induced };

// Non-decreasing profile f : [0,inf) -> [0,inf) with a two-sided growth
// certificate at infinity:
//
//   a1 * s^delta1 <= f(s t) / f(t) <= a2 * s^delta2   for s >= 1, t >= 1/r0.
//
// The certificate constants are part of the object; check_weak_scaling
// validates them on sample grids.
struct ScalingFunction {
  ScalingFamily family = ScalingFamily::power;
  double alpha = 0.5;  // power / log_perturbed / mixed (larger exponent)
  double beta = 0.5;   // mixed: smaller exponent
  double p = 1.0;      // log_perturbed: log power
  BernsteinSpec phi;   // bernstein_induced: f(t) = phi(t^2)

  double a1 = 1.0;
  double a2 = 1.0;
  double delta1 = 0.5;
  double delta2 = 0.5;
  double r0 = 1.0;

  double operator()(double t) const;

  std::string family_name() const;

  // Throws std::invalid_argument on structurally impossible certificates
  // (delta out of (0,2), delta1 > delta2, nonpositive a or r0).
  void validate() const;
};

// Library constructors; each ships a certificate that passes
// check_weak_scaling on the default grids.
ScalingFunction make_power_scaling(double alpha, double r0 = 1.0);
ScalingFunction make_log_perturbed_scaling(double alpha, double p, double r0 = 1.0);
ScalingFunction make_mixed_scaling(double alpha, double beta, double r0 = 1.0);
// Certificate exponents are fitted numerically on the default grids.
ScalingFunction make_bernstein_scaling(const BernsteinSpec& phi, double r0 = 0.0);

struct ScalingCheckReport {
  // Relative slack: ratio/(a1 s^d1) - 1 and a2 s^d2/ratio - 1; both must be
  // >= -tol at every grid pair.
  double worst_lower_margin = 0.0;
  double worst_upper_margin = 0.0;
  bool pass = false;
  double worst_s = 0.0;  // pair attaining the most negative margin
  double worst_t = 0.0;
};

ScalingCheckReport check_weak_scaling(const ScalingFunction& f,
                                      std::span<const double> s_grid,
                                      std::span<const double> t_grid,
                                      double tol = 1e-12);

// Default certificate grids: 32 log-spaced s in [1, 1e3] and
// 32 log-spaced t in [1/r0, 1e3/r0].
std::vector<double> default_s_grid();
std::vector<double> default_t_grid(double r0);

ScalingCheckReport check_weak_scaling(const ScalingFunction& f, double tol = 1e-12);

// Monotonicity spot check of f on a log grid spanning [0, t_max].
bool is_nondecreasing_on_samples(const ScalingFunction& f, double t_max = 1e6, int n = 512);

struct FittedCertificate {
  double a1 = 1.0, a2 = 1.0, delta1 = 0.0, delta2 = 0.0;
  bool ok = false;  // false when no finite exponent sandwich exists on the grid
};

// Tightest exponent sandwich for ratio(s,t) = f(st)/f(t) on the given grids:
// delta1/delta2 are the min/max pairwise log-slopes, a1/a2 the residual
// envelope constants. Shared by the bernstein-induced certificate fit and the
// condition (H) check.
FittedCertificate fit_scaling_certificate(const std::function<double(double)>& f,
                                          std::span<const double> s_grid,
                                          std::span<const double> t_grid);

std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace nlreg
