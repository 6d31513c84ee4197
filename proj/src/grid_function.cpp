#include "nlreg/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlreg {

SmoothFunction constant_function(double c) {
  SmoothFunction f;
  f.value = [c](const Point&) { return c; };
  f.gradient = [](const Point&) { return Point{0.0, 0.0}; };
  return f;
}

SmoothFunction gaussian_function(int dim, const Point& center, double width, double amp) {
  SmoothFunction f;
  const double w2 = width * width;
  f.value = [=](const Point& p) {
    const double d2 = dist(p, center, dim) * dist(p, center, dim);
    return amp * std::exp(-0.5 * d2 / w2);
  };
  f.gradient = [=](const Point& p) {
    const double d2 = dist(p, center, dim) * dist(p, center, dim);
    const double v = amp * std::exp(-0.5 * d2 / w2);
    Point g = scale(sub(p, center), -v / w2);
    if (dim == 1) g[1] = 0.0;
    return g;
  };
  return f;
}

SmoothFunction sum_of(const SmoothFunction& u, const SmoothFunction& v) {
  SmoothFunction f;
  f.value = [u, v](const Point& p) { return u.value(p) + v.value(p); };
  if (u.gradient && v.gradient)
    f.gradient = [u, v](const Point& p) { return add(u.gradient(p), v.gradient(p)); };
  auto ufr = u.feature_radii, vfr = v.feature_radii;
  if (ufr || vfr) {
    f.feature_radii = [ufr, vfr](const Point& x) {
      std::vector<double> r;
      if (ufr) r = ufr(x);
      if (vfr) {
        auto r2 = vfr(x);
        r.insert(r.end(), r2.begin(), r2.end());
      }
      return r;
    };
  }
  return f;
}

SmoothFunction scale_of(const SmoothFunction& u, double c) {
  SmoothFunction f;
  f.value = [u, c](const Point& p) { return c * u.value(p); };
  if (u.gradient) f.gradient = [u, c](const Point& p) { return scale(u.gradient(p), c); };
  f.feature_radii = u.feature_radii;
  return f;
}

SmoothFunction shift_of(const SmoothFunction& u, const Point& h, int dim) {
  (void)dim;
  SmoothFunction f;
  f.value = [u, h](const Point& p) { return u.value(sub(p, h)); };
  if (u.gradient) f.gradient = [u, h](const Point& p) { return u.gradient(sub(p, h)); };
  if (u.feature_radii)
    f.feature_radii = [u, h](const Point& x) { return u.feature_radii(sub(x, h)); };
  return f;
}

SmoothFunction BumpFunction::as_smooth(int dim) const {
  SmoothFunction f;
  const Point z = center;
  const double r = radius;
  f.value = [z, r, dim](const Point& p) { return bump_profile(dist(p, z, dim) / r); };
  f.gradient = [z, r, dim](const Point& p) {
    const double t = dist(p, z, dim) / r;
    if (t >= 1.0 || t == 0.0) return Point{0.0, 0.0};
    // beta'(t)/t = -4(1-t^2), smooth through the origin
    const double coeff = -4.0 * (1.0 - t * t) / (r * r);
    Point g = scale(sub(p, z), coeff);
    if (dim == 1) g[1] = 0.0;
    return g;
  };
  f.feature_radii = [z, r, dim](const Point& x) {
    // The support sphere |y-z| = r meets rings about x at these radii.
    const double dzx = dist(x, z, dim);
    return std::vector<double>{std::abs(dzx - r), dzx + r};
  };
  return f;
}

double GridFunction::value_at(const Point& p) const {
  if (!box.contains(p)) return exterior(p);
  const double fx = (p[0] - box.lo[0]) / h;
  int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, n[0] - 2);
  double tx = fx - ix;
  if (n[0] == 1) { ix = 0; tx = 0.0; }
  if (dim == 1) {
    if (n[0] == 1) return values[0];
    return (1.0 - tx) * values[index(ix)] + tx * values[index(ix + 1)];
  }
  const double fy = (p[1] - box.lo[1]) / h;
  int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, n[1] - 2);
  double ty = fy - iy;
  if (n[1] == 1) { iy = 0; ty = 0.0; }
  const double v00 = values[index(ix, iy)];
  const double v10 = values[index(ix + 1, iy)];
  const double v01 = values[index(ix, iy + 1)];
  const double v11 = values[index(ix + 1, iy + 1)];
  return (1.0 - tx) * (1.0 - ty) * v00 + tx * (1.0 - ty) * v10 +
         (1.0 - tx) * ty * v01 + tx * ty * v11;
}

std::array<int, 2> GridFunction::nearest_node(const Point& p) const {
  const int ix = std::clamp(static_cast<int>(std::lround((p[0] - box.lo[0]) / h)), 0, n[0] - 1);
  const int iy = dim > 1
      ? std::clamp(static_cast<int>(std::lround((p[1] - box.lo[1]) / h)), 0, n[1] - 1)
      : 0;
  return {ix, iy};
}

bool GridFunction::boundary_node(int ix, int iy) const {
  if (ix == 0 || ix == n[0] - 1) return true;
  if (dim > 1 && (iy == 0 || iy == n[1] - 1)) return true;
  return false;
}

Point GridFunction::gradient_at_node(int ix, int iy) const {
  if (boundary_node(ix, iy))
    throw std::invalid_argument("gradient_at_node: no local model on the box boundary");
  Point g{0.0, 0.0};
  g[0] = (values[index(ix + 1, iy)] - values[index(ix - 1, iy)]) / (2.0 * h);
  if (dim > 1) g[1] = (values[index(ix, iy + 1)] - values[index(ix, iy - 1)]) / (2.0 * h);
  return g;
}

std::array<double, 3> GridFunction::hessian_at_node(int ix, int iy) const {
  if (boundary_node(ix, iy))
    throw std::invalid_argument("hessian_at_node: no local model on the box boundary");
  const double c = values[index(ix, iy)];
  std::array<double, 3> hss{0.0, 0.0, 0.0};
  hss[0] = (values[index(ix + 1, iy)] - 2.0 * c + values[index(ix - 1, iy)]) / (h * h);
  if (dim > 1) {
    hss[1] = (values[index(ix, iy + 1)] - 2.0 * c + values[index(ix, iy - 1)]) / (h * h);
    hss[2] = (values[index(ix + 1, iy + 1)] - values[index(ix + 1, iy - 1)] -
              values[index(ix - 1, iy + 1)] + values[index(ix - 1, iy - 1)]) /
             (4.0 * h * h);
  }
  return hss;
}

double GridFunction::max_abs_values() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

GridFunction sample_to_grid(const SmoothFunction& u, const Box& box, double h) {
  GridFunction g;
  g.box = box;
  g.dim = box.dim;
  g.h = h;
  g.n[0] = static_cast<int>(std::lround(box.width(0) / h)) + 1;
  g.n[1] = box.dim > 1 ? static_cast<int>(std::lround(box.width(1) / h)) + 1 : 1;
  if (std::abs(box.lo[0] + (g.n[0] - 1) * h - box.hi[0]) > 1e-9 * std::max(1.0, box.width(0)))
    throw std::invalid_argument("sample_to_grid: box width must be a multiple of h");
  g.values.resize(g.node_count());
  for (int iy = 0; iy < g.n[1]; ++iy)
    for (int ix = 0; ix < g.n[0]; ++ix) g.values[g.index(ix, iy)] = u.value(g.node(ix, iy));
  g.exterior = u.value;
  refresh_bound(g);
  return g;
}

void refresh_bound(GridFunction& u, double sample_radius) {
  double b = u.max_abs_values();
  if (sample_radius <= 0.0) sample_radius = 4.0 * u.box.circumradius(u.box.lo) + 4.0;
  // Dense ring sample of the exterior closure.
  const Point c{0.5 * (u.box.lo[0] + u.box.hi[0]),
                u.dim > 1 ? 0.5 * (u.box.lo[1] + u.box.hi[1]) : 0.0};
  const int nr = 64, na = u.dim > 1 ? 32 : 2;
  for (int i = 1; i <= nr; ++i) {
    const double r = sample_radius * i / nr;
    for (int j = 0; j < na; ++j) {
      const double th = u.dim > 1 ? 2.0 * M_PI * j / na : (j == 0 ? 0.0 : M_PI);
      const Point p = add(c, Point{r * std::cos(th), u.dim > 1 ? r * std::sin(th) : 0.0});
      if (!u.box.contains(p)) b = std::max(b, std::abs(u.exterior(p)));
    }
  }
  u.bound = b;
}

SmoothFunction grid_smooth_view(const GridFunction& u, int ix, int iy) {
  if (u.boundary_node(ix, iy))
    throw std::invalid_argument("grid_smooth_view: x on box boundary (no local model)");
  const Point x = u.node(ix, iy);
  const double ux = u.values[u.index(ix, iy)];
  const Point grad = u.gradient_at_node(ix, iy);
  const auto hess = u.hessian_at_node(ix, iy);
  const double h = u.h;
  const int dim = u.dim;
  const GridFunction* up = &u;

  SmoothFunction f;
  f.value = [=](const Point& p) {
    const Point d = sub(p, x);
    const double s = norm(d, dim);
    if (s < h) {
      double quad = hess[0] * d[0] * d[0];
      if (dim > 1) quad += hess[1] * d[1] * d[1] + 2.0 * hess[2] * d[0] * d[1];
      return ux + dot(grad, d, dim) + 0.5 * quad;
    }
    return up->value_at(p);
  };
  f.gradient = [grad](const Point&) { return grad; };
  f.feature_radii = [h](const Point&) { return std::vector<double>{h}; };
  return f;
}

}  // namespace nlreg
