#pragma once

#include "nlreg/grid_function.hpp"
#include "nlreg/kernel.hpp"
#include "nlreg/quadrature.hpp"

namespace nlreg {

// L_K u(x) = int (u(y) - u(x) - grad u(x).(y-x) 1_{|y-x|<r0} 1_{delta2>=1}) K(x,y) dy.
QuadResult apply_linear(const KernelSpec& k, const SmoothFunction& u, const Point& x,
                        const QuadratureConfig& cfg = {});

// Grid pathway: x must be an interior node of u's grid.
QuadResult apply_linear(const KernelSpec& k, const GridFunction& u, int ix, int iy = 0,
                        const QuadratureConfig& cfg = {});

// M^+ u(x) = sup_{L in class} L u(x) and M^- u(x) = inf. For the
// non-symmetric class the extremum is attained pointwise in y by switching
// between Lambda*J and lambda*J on the sign of the compensated difference;
// the symmetric class routes through the second-difference form.
QuadResult extremal_plus(const ExtremalClass& cls, const SmoothFunction& u, const Point& x,
                         const QuadratureConfig& cfg = {});
QuadResult extremal_minus(const ExtremalClass& cls, const SmoothFunction& u, const Point& x,
                          const QuadratureConfig& cfg = {});

QuadResult extremal_plus(const ExtremalClass& cls, const GridFunction& u, int ix, int iy = 0,
                         const QuadratureConfig& cfg = {});
QuadResult extremal_minus(const ExtremalClass& cls, const GridFunction& u, int ix, int iy = 0,
                          const QuadratureConfig& cfg = {});

// Symmetric-class extremal value via second differences:
//   1/2 int [Lambda (d2u)_+ - lambda (d2u)_-] J(x,x+z) dz        (sign = +1)
// with d2u(x;z) = u(x+z) + u(x-z) - 2u(x); no gradient term enters.
QuadResult second_difference_form(const ExtremalClass& cls, const SmoothFunction& u,
                                  const Point& x, int sign, const QuadratureConfig& cfg = {});

}  // namespace nlreg
