#pragma once

// Independent quadrature oracle for the tests, built on boost.math. None of
// the library quadrature code is reused here: values produced by these
// routines cross-check the nlreg engine through a different algorithm
// (tanh-sinh / exp-sinh instead of adaptive Gauss-Kronrod panels).

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <functional>
#include <vector>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, tol);
}

inline double integrate_to_inf(const std::function<double(double)>& f, double a,
                               double tol = 1e-12) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return f(a + t); }, tol);
}

// Piecewise oracle with interior breakpoints (kinks land on panel edges).
inline double integrate_pieces(const std::function<double(double)>& f,
                               std::vector<double> cuts, double tail_to_inf = -1.0,
                               double tol = 1e-12) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) total += integrate(f, cuts[i], cuts[i + 1], tol);
  if (tail_to_inf > 0.0) total += integrate_to_inf(f, tail_to_inf, tol);
  return total;
}

}  // namespace oracle
