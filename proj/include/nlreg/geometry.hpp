#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace nlreg {

// Points live in d = 1 or 2 dimensions; unused components stay zero.
using Point = std::array<double, 2>;

inline Point make_point(double x0, double x1 = 0.0) { return {x0, x1}; }

inline Point add(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point scale(const Point& a, double c) { return {a[0] * c, a[1] * c}; }

inline double dot(const Point& a, const Point& b, int dim) {
  double s = a[0] * b[0];
  if (dim > 1) s += a[1] * b[1];
  return s;
}

inline double norm(const Point& a, int dim) {
  return dim == 1 ? std::abs(a[0]) : std::hypot(a[0], a[1]);
}

inline double dist(const Point& a, const Point& b, int dim) {
  return norm(sub(a, b), dim);
}

struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
  int dim = 1;

  bool contains(const Point& p) const {
    for (int a = 0; a < dim; ++a) {
      if (p[a] < lo[a] || p[a] > hi[a]) return false;
    }
    return true;
  }

  double width(int axis) const { return hi[axis] - lo[axis]; }

  // Distance from an interior point to the boundary of the box.
  double boundary_distance(const Point& p) const {
    double d = std::min(p[0] - lo[0], hi[0] - p[0]);
    if (dim > 1) d = std::min({d, p[1] - lo[1], hi[1] - p[1]});
    return d;
  }

  double circumradius(const Point& p) const {
    double m = std::max(std::abs(p[0] - lo[0]), std::abs(hi[0] - p[0]));
    if (dim > 1) {
      const double m1 = std::max(std::abs(p[1] - lo[1]), std::abs(hi[1] - p[1]));
      return std::hypot(m, m1);
    }
    return m;
  }
};

// Volume of the d-dimensional ball of radius r, d = 1, 2.
inline double ball_volume(int dim, double r) {
  switch (dim) {
    case 1: return 2.0 * r;
    case 2: return M_PI * r * r;
    default: throw std::invalid_argument("ball_volume: only d = 1, 2 supported");
  }
}

// Surface measure of the unit sphere, omega_d = 2 pi^{d/2} / Gamma(d/2).
inline double surface_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    default: throw std::invalid_argument("surface_measure: only d = 1, 2 supported");
  }
}

}  // namespace nlreg
