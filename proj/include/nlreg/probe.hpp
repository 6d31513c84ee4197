#pragma once

#include <cstddef>

#include "nlreg/grid_function.hpp"
#include "nlreg/parallel.hpp"

namespace nlreg {

// Oscillation of u over the dyadic balls B(x0, 2^{-k} s), k = 0..K, as exact
// max - min over grid nodes. Entries whose ball is under-resolved truncate
// the profile; entries at or below the noise floor are flagged unusable.
struct OscillationProfile {
  Point center{0.0, 0.0};
  double base_scale = 0.0;
  std::vector<double> radii;
  std::vector<double> osc;
  std::vector<std::uint8_t> usable;
  double noise_floor = 0.0;
  bool truncated = false;
  int requested_levels = 0;
};

OscillationProfile oscillation_profile(const GridFunction& u, const Point& x0, double s,
                                       int levels, double noise_floor = 0.0);

struct HolderFit {
  double alpha = 0.0;  // least-squares slope of log2 osc_k against -k
  double c = 0.0;      // 2^intercept
  double gamma = 0.0;  // 1 - 2^{-alpha}
  double r2 = 0.0;
  bool flat = false;   // degenerate (all-zero / all-noise) profile
  int points_used = 0;
};

// Requires >= 3 usable entries unless the profile is degenerate (flat).
HolderFit fit_holder(const OscillationProfile& profile);

struct SeminormReport {
  double seminorm = 0.0;    // sup |u(x)-u(y)| / |x-y|^alpha over sampled node pairs
  double c_impl = 0.0;      // seminorm * (r ^ r0)^alpha / ||u||_inf
  std::size_t pairs_total = 0;
  std::size_t pairs_used = 0;
  std::size_t stride = 1;
};

// Discrete Holder seminorm over node pairs in B(z0, r/2), deterministically
// stride-subsampled to at most max_pairs pairs.
SeminormReport holder_seminorm_report(const GridFunction& u, const Point& z0, double r,
                                      double alpha, double r0_kernel,
                                      std::size_t max_pairs = 1000000,
                                      Exec mode = Exec::parallel);

}  // namespace nlreg
