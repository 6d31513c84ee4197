#pragma once

#include <functional>
#include <vector>

#include "nlreg/geometry.hpp"

namespace nlreg {

// Smooth test function handed to the operators: value, gradient and an
// optional list of radii (about a given center) where the radial profile of
// the integrand has kinks, used as quadrature breakpoints.
struct SmoothFunction {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<std::vector<double>(const Point&)> feature_radii;

  double operator()(const Point& p) const { return value(p); }
};

SmoothFunction constant_function(double c);
// Gaussian a * exp(-|x-c|^2 / (2 w^2)) with analytic gradient.
SmoothFunction gaussian_function(int dim, const Point& center, double width, double amp = 1.0);
SmoothFunction sum_of(const SmoothFunction& u, const SmoothFunction& v);
SmoothFunction scale_of(const SmoothFunction& u, double c);
SmoothFunction shift_of(const SmoothFunction& u, const Point& h, int dim);

inline double bump_profile(double t) {
  const double q = 1.0 - t * t;
  return q > 0.0 ? q * q : 0.0;
}

// b_{z,r}(x) = beta(|x-z|/r) with beta(t) = (1-t^2)_+^2: supported in the
// closed ball B(z,r), range [0,1], maximum 1 at z.
struct BumpFunction {
  Point center{0.0, 0.0};
  double radius = 1.0;

  double operator()(const Point& p, int dim) const {
    return bump_profile(dist(p, center, dim) / radius);
  }

  SmoothFunction as_smooth(int dim) const;
};

// Grid sample of u over an axis-aligned box plus an analytic extension on the
// exterior; together they represent a bounded function on all of R^d.
struct GridFunction {
  Box box;
  double h = 0.0;
  std::array<int, 2> n{0, 1};  // nodes per axis (n[1] = 1 in d = 1)
  std::vector<double> values;  // row-major: ix + n[0]*iy
  std::function<double(const Point&)> exterior;
  double bound = 0.0;  // sup-norm estimate over R^d
  int dim = 1;

  int node_count() const { return n[0] * n[1]; }
  int index(int ix, int iy = 0) const { return ix + n[0] * iy; }
  Point node(int ix, int iy = 0) const {
    return {box.lo[0] + ix * h, dim > 1 ? box.lo[1] + iy * h : 0.0};
  }
  Point node_flat(int idx) const { return node(idx % n[0], idx / n[0]); }

  // Multilinear interpolation inside the box, exterior closure outside.
  double value_at(const Point& p) const;

  // Nearest node index to an in-box point.
  std::array<int, 2> nearest_node(const Point& p) const;

  bool boundary_node(int ix, int iy = 0) const;

  // Centered differences at an interior node; throws on boundary nodes.
  Point gradient_at_node(int ix, int iy = 0) const;
  // Hessian by second differences (diagonal + cross terms).
  std::array<double, 3> hessian_at_node(int ix, int iy = 0) const;  // {xx, yy, xy}

  double max_abs_values() const;
};

// Samples an analytic function over the box, keeping it as the exterior.
GridFunction sample_to_grid(const SmoothFunction& u, const Box& box, double h);

// Recomputes and installs the sup-norm estimate (max over node values and a
// dense exterior sample up to the given radius).
void refresh_bound(GridFunction& u, double sample_radius = 0.0);

// Smooth view of a grid function for operator evaluation centered at node
// (ix, iy): a local quadratic model within |y-x| < h, interpolation elsewhere
// in the box, exterior closure outside. Throws on boundary nodes.
SmoothFunction grid_smooth_view(const GridFunction& u, int ix, int iy = 0);

}  // namespace nlreg
