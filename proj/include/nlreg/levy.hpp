#pragma once

#include <span>

#include "nlreg/bernstein.hpp"
#include "nlreg/check.hpp"
#include "nlreg/scaling.hpp"

namespace nlreg {

// psi(t) = phi(t^2), the characteristic exponent of the subordinate Brownian
// motion built from the Bernstein function.
double psi_from_bernstein(const BernsteinSpec& b, double t);

// psi*(t) = sup_{s <= t} psi(s), by monotonicity detection with golden-section
// refinement on non-monotone segments.
double psi_star(const BernsteinSpec& b, double t);

struct ConditionHReport {
  FittedCertificate fit;
  double r0 = 0.0;
  bool pass = false;  // finite fit with exponents in (0,2) and sandwich valid on the grid
};

// Condition (H): fits the tightest exponent sandwich for psi(st)/psi(t) on
// the grids (t >= 1/r0) and reports whether it certifies.
ConditionHReport check_H(const BernsteinSpec& b, std::span<const double> t_grid,
                         std::span<const double> s_grid);
ConditionHReport check_H(const BernsteinSpec& b);

// Levy density of the subordinate Brownian motion,
//   nu(x) = int_0^inf (4 pi t)^{-d/2} e^{-|x|^2/(4t)} mu(t) dt,
// by adaptive quadrature with envelope-certified truncation (relative error
// ~1e-8). Throws for families without an explicit mu density.
double levy_density_sbm(const BernsteinSpec& b, int dim, double xnorm,
                        double rel_tol = 1e-8);

// Closed-form stable Levy density c(d,alpha) |x|^{-d-alpha} with
// c(d,alpha) = alpha 2^{alpha-1} Gamma((d+alpha)/2) / (pi^{d/2} Gamma(1-alpha/2));
// the independent reference the subordination quadrature is checked against.
double stable_levy_density(int dim, double alpha, double xnorm);

struct NuBoundsReport {
  double min_ratio = 0.0;  // of nu(x) |x|^d / psi*(1/|x|)
  double max_ratio = 0.0;
  double spread = 0.0;     // max_ratio / min_ratio
  bool pass = false;       // ratios bounded in (0, inf) across the sample
  CheckReport checks;
};

// Two-sided comparability nu(x) ~ psi*(1/|x|)/|x|^d witnessed over samples
// in (0, r0).
NuBoundsReport verify_nu_bounds(const BernsteinSpec& b, int dim,
                                std::span<const double> xnorms);

}  // namespace nlreg
