#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nlreg/geometry.hpp"
#include "nlreg/kernel.hpp"

namespace nlreg {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::vector<double> split_radii;  // extra breakpoints, merged with the structural ones
  int max_panels = 4000;

  QuadratureConfig scaled(double factor) const {
    QuadratureConfig c = *this;
    c.abs_tol *= factor;
    c.rel_tol *= factor;
    return c;
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimate; <= max(abs_tol, rel_tol*|value|) on success
  int panels = 0;
  bool converged = false;
};

using Integrand1D = std::function<double(double)>;

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
QuadResult integrate_adaptive(const Integrand1D& f, double a, double b,
                              const QuadratureConfig& cfg);

// int_0^b f, where f may have an integrable power singularity at 0. Dyadic
// panels toward the origin with geometric extrapolation of the remainder.
QuadResult integrate_to_zero(const Integrand1D& f, double b, const QuadratureConfig& cfg);

// int_a^inf f for f with eventual geometric decay under octave doubling
// (power decay faster than 1/s, or exponential). Non-decaying integrands are
// reported as not converged.
QuadResult integrate_to_infinity(const Integrand1D& f, double a, const QuadratureConfig& cfg);

// Radial quadrature of F over (0, outer), outer possibly infinite. F is the
// full radial integrand (angular sum, kernel and s^{d-1} factor included);
// the panel structure splits at the given radii and treats the origin panel
// as singular. Used by every operator and lemma integral.
QuadResult radial_integral(const Integrand1D& F, std::span<const double> splits,
                           double outer, const QuadratureConfig& cfg);

// Angular sum over the unit sphere: two directions in d = 1, a 64-node
// trapezoid on the circle in d = 2 (weights sum to omega_d).
struct AngularRule {
  explicit AngularRule(int dim, int nodes_2d = 64);
  int dim;
  std::vector<Point> dirs;
  std::vector<double> weights;

  double sum(const std::function<double(const Point&)>& g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i) s += weights[i] * g(dirs[i]);
    return s;
  }
};

enum class RadialMomentKind { f0, fr0, gradf0, gradfr0 };

struct BoundedValue {
  double value = 0.0;
  double bound = 0.0;  // the certified right-hand side, a multiple of f(1/r)
  double error = 0.0;
};

// The four radial profile integrals with their certified bounds:
//   f0:       r^{-2} int_0^r s f(1/s) ds      <= a2/(2-delta2) f(1/r)
//   fr0:      int_r^{r0} s^{-1} f(1/s) ds     <= 1/(a1 delta1) f(1/r)
//   gradf0:   r^{-1} int_0^r f(1/s) ds        <= a2/(1-delta2) f(1/r)   [delta2 < 1]
//   gradfr0:  r^{-1} int_r^{r0} f(1/s) ds     <= 1/(a1(delta1-1)) f(1/r) [delta1 > 1]
// Case preconditions are enforced.
BoundedValue radial_moment(const ScalingFunction& f, double r, RadialMomentKind kind,
                           const QuadratureConfig& cfg = {});

bool radial_moment_applicable(const ScalingFunction& f, RadialMomentKind kind);
const char* radial_moment_name(RadialMomentKind kind);

// int (1 ^ (|y-x|/r)^2) K(x,y) dy, 0 < r <= r0 (multiplier applied if set).
QuadResult wedge_integral(const KernelSpec& k, const Point& x, double r,
                          const QuadratureConfig& cfg = {});

// int_{|y-x| > s/4} ((2 (4|y-x| ^ r0) / s)^eta - 1) J(x,y) dy, 0 < eta < delta1.
QuadResult growth_integral(const KernelSpec& k, const Point& x, double s, double eta,
                           const QuadratureConfig& cfg = {});

// Generic engine: int g(y) K(x,y) dy with radial substitution about x. The
// caller asserts integrability of g * J near x (order |y-x|^2, compensated,
// or vanishing); non-convergence is reported in the result.
QuadResult singular_integral(const KernelSpec& k,
                             const std::function<double(const Point&)>& g, const Point& x,
                             const QuadratureConfig& cfg = {});

// Closed form of int_1^inf ((2t)^eta - 1) t^{-delta1-1} dt = 2^eta/(delta1-eta) - 1/delta1
// for 0 <= eta < delta1 (the comparison integral of the growth lemma).
double growth_comparison_integral(double eta, double delta1);

}  // namespace nlreg
