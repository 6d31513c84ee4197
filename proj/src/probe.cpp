#include "nlreg/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlreg {

OscillationProfile oscillation_profile(const GridFunction& u, const Point& x0, double s,
                                       int levels, double noise_floor) {
  if (levels < 0) throw std::invalid_argument("oscillation_profile: negative level count");
  for (int a = 0; a < u.dim; ++a)
    if (x0[a] - s < u.box.lo[a] - 1e-12 || x0[a] + s > u.box.hi[a] + 1e-12)
      throw std::invalid_argument("oscillation_profile: B(x0, s) leaves the solved box");

  OscillationProfile prof;
  prof.center = x0;
  prof.base_scale = s;
  prof.noise_floor = noise_floor;
  prof.requested_levels = levels;

  for (int k = 0; k <= levels; ++k) {
    const double rad = s * std::pow(0.5, k);
    if (2.0 * rad / u.h < 5.0) {  // under-resolved ball: stop here
      prof.truncated = true;
      break;
    }
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < u.n[1]; ++iy)
      for (int ix = 0; ix < u.n[0]; ++ix) {
        const Point p = u.node(ix, iy);
        if (dist(p, x0, u.dim) >= rad) continue;
        const double v = u.values[u.index(ix, iy)];
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
    const double osc = mx >= mn ? mx - mn : 0.0;
    prof.radii.push_back(rad);
    prof.osc.push_back(osc);
    prof.usable.push_back(osc > noise_floor ? 1 : 0);
  }
  // nested balls force a non-increasing sequence; quadrature plays no part here
  for (std::size_t k = 1; k < prof.osc.size(); ++k)
    if (prof.osc[k] > prof.osc[k - 1] + 1e-15)
      throw std::logic_error("oscillation_profile: oscillation increased on nested balls");
  return prof;
}

HolderFit fit_holder(const OscillationProfile& profile) {
  HolderFit fit;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < profile.osc.size(); ++k) {
    if (!profile.usable[k] || !(profile.osc[k] > 0.0)) continue;
    xs.push_back(static_cast<double>(k));
    ys.push_back(std::log2(profile.osc[k]));
  }
  fit.points_used = static_cast<int>(xs.size());
  if (xs.empty()) {
    fit.flat = true;  // degenerate: all zeros or all below the noise floor
    return fit;
  }
  if (xs.size() < 3)
    throw std::invalid_argument("fit_holder: needs at least 3 usable profile entries");

  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;

  fit.alpha = -slope;
  fit.c = std::pow(2.0, intercept);
  fit.gamma = 1.0 - std::pow(2.0, -fit.alpha);

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = intercept + slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

SeminormReport holder_seminorm_report(const GridFunction& u, const Point& z0, double r,
                                      double alpha, double r0_kernel, std::size_t max_pairs,
                                      Exec mode) {
  if (!(alpha > 0.0)) throw std::invalid_argument("holder_seminorm: alpha must be positive");

  std::vector<int> nodes;
  for (int iy = 0; iy < u.n[1]; ++iy)
    for (int ix = 0; ix < u.n[0]; ++ix)
      if (dist(u.node(ix, iy), z0, u.dim) <= 0.5 * r) nodes.push_back(u.index(ix, iy));

  SeminormReport rep;
  const std::size_t m = nodes.size();
  if (m < 2) return rep;
  const std::size_t total = m * (m - 1) / 2;
  rep.pairs_total = total;
  rep.stride = std::max<std::size_t>(1, total / max_pairs);

  const std::size_t count = (total + rep.stride - 1) / rep.stride;
  rep.pairs_used = count;

  // triangular decode: pair p -> (i, j), i < j
  const auto decode = [m](std::size_t p, std::size_t& i, std::size_t& j) {
    // row i satisfies i*m - i(i+1)/2 <= p
    std::size_t lo = 0, hi = m - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      const std::size_t before = mid * m - mid * (mid + 1) / 2;
      if (before <= p) lo = mid; else hi = mid - 1;
    }
    i = lo;
    j = p - (lo * m - lo * (lo + 1) / 2) + lo + 1;
  };

  const int chunks = 64;
  std::vector<double> best(chunks, 0.0);
  for_each_index(chunks, [&](std::size_t c) {
    double local = 0.0;
    for (std::size_t q = c; q < count; q += chunks) {
      const std::size_t p = q * rep.stride;
      std::size_t i, j;
      decode(p, i, j);
      if (j >= m) continue;
      const Point a = u.node_flat(nodes[i]);
      const Point b = u.node_flat(nodes[j]);
      const double d = dist(a, b, u.dim);
      if (d <= 0.0) continue;
      const double ratio = std::abs(u.values[nodes[i]] - u.values[nodes[j]]) / std::pow(d, alpha);
      local = std::max(local, ratio);
    }
    best[c] = local;
  }, mode);

  rep.seminorm = *std::max_element(best.begin(), best.end());
  const double scale = std::min(r, r0_kernel);
  rep.c_impl = u.bound > 0.0 ? rep.seminorm * std::pow(scale, alpha) / u.bound : 0.0;
  return rep;
}

}  // namespace nlreg
