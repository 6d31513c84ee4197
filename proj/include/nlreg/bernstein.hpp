#pragma once

#include <string>

namespace nlreg {

enum class BernsteinFamily { stable, relativistic, mixed, log_perturbed };

// A Bernstein function phi(lam) = b*lam + int_0^infty (1 - e^{-lam t}) mu(dt),
// restricted to four closed-form families. The characteristic exponent of the
// subordinate Brownian motion is psi(t) = phi(t^2).
struct BernsteinSpec {
  BernsteinFamily family = BernsteinFamily::stable;
  double alpha = 1.0;  // all families, in (0,2)
  double m = 1.0;      // relativistic mass parameter, > 0
  double beta = 0.5;   // mixed: second exponent, 0 < beta < alpha
  double p = 0.0;      // log_perturbed: log power, in [-alpha/2, (2-alpha)/2]
  double drift = 0.0;  // b >= 0

  double phi(double lam) const;

  // t |-> phi(t^2)
  double psi(double t) const { return phi(t * t); }

  // Density mu(t) of the Levy measure of the subordinator, where available
  // (stable, relativistic, mixed). log_perturbed has no closed-form density.
  bool has_levy_measure_density() const;
  double levy_measure_density(double t) const;

  // Scale below which condition (H) is certified: 1 for stable, mixed and
  // log-perturbed; the transition scale m^{-1/alpha} for relativistic.
  double default_r0() const;

  std::string family_name() const;
};

BernsteinSpec make_stable(double alpha);
BernsteinSpec make_relativistic(double alpha, double m);
BernsteinSpec make_mixed_bernstein(double alpha, double beta);
BernsteinSpec make_log_perturbed_bernstein(double alpha, double p);

}  // namespace nlreg
