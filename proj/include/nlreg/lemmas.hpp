#pragma once

#include <cstdint>
#include <span>

#include "nlreg/check.hpp"
#include "nlreg/constants.hpp"
#include "nlreg/grid_function.hpp"
#include "nlreg/kernel.hpp"
#include "nlreg/parallel.hpp"
#include "nlreg/quadrature.hpp"

namespace nlreg {

// Certifies the four radial moment bounds at each sampled r in (0, r0)
// (applicable kinds only) and the wedge bound
// wedge_integral <= multiplier_sup * C1 f(1/r) at the given base points
// (multiplier_sup = 1 for bare J and for multipliers bounded by 1).
// Margins are relative to the right-hand side.
CheckReport verify_lemma_integrals(const ScalingFunction& f, const KernelSpec& k,
                                   std::span<const double> r_samples,
                                   std::span<const Point> base_points,
                                   const QuadratureConfig& cfg = {},
                                   Exec mode = Exec::parallel,
                                   double multiplier_sup = 1.0);

struct GrowthLemmaResult {
  double epsilon = 0.0;
  double r_eps = 0.0;    // in (0, r0)
  double eta_eps = 0.0;  // in (0, delta1)
  double worst_margin = 0.0;  // min over validation samples of 1 - I(s)/(eps f(1/s))
  bool trivial = false;  // epsilon so large that eta ~ delta1 suffices
};

// Constructive growth lemma: picks eta < delta1 making the comparison
// integral term < eps/2 (bisection), then r from the closed-form scale bound,
// and validates int_{|y-x|>s/4} ((2(4|y-x| ^ r0)/s)^eta - 1) J dy < eps f(1/s)
// at 20 sampled s < r.
GrowthLemmaResult find_eta_r(const KernelSpec& k, double epsilon,
                             const QuadratureConfig& cfg = {});

// Re-validates a growth-lemma certificate on a fresh log-spaced s-sample.
CheckReport validate_growth_result(const KernelSpec& k, const GrowthLemmaResult& res,
                                   int n_samples, const QuadratureConfig& cfg = {},
                                   Exec mode = Exec::parallel);

struct BumpSample {
  Point z{0.0, 0.0};
  double r = 1.0;
  Point x{0.0, 0.0};
};

std::vector<BumpSample> random_bump_samples(int dim, double r0, int count, std::uint64_t seed);

// |M^- b_{z,r}(x)| <= C2 f(1/r) over the samples; margins relative to f(1/r).
CheckReport verify_bump_bound(const ExtremalClass& cls, std::span<const BumpSample> samples,
                              const QuadratureConfig& cfg = {}, Exec mode = Exec::parallel);

struct OscillationLemmaOptions {
  double ball_fraction = 0.5;        // measure threshold as a fraction of |B(z,r)|
  double rd_delta = -1.0;            // if > 0, threshold = rd_delta * r^d instead
  double residual_tol = 1e-6;        // slack for the subsolution hypothesis
  double value_tol = 1e-12;          // slack for the pointwise comparisons
  int exterior_samples = 256;
};

struct OscillationLemmaReport {
  bool hyp_subsolution = false;      // M^+_h u >= 0 on B(z,r)
  bool hyp_upper_half = false;       // u <= 1/2 on B(z,r)
  bool hyp_growth_envelope = false;  // u <= (2(|x-z| ^ r0)/r)^{eta1} - 1/2 outside
  bool hyp_measure = false;          // |{u <= 0} cap B(z,r)| above threshold
  bool hypotheses_pass = false;
  bool conclusion = false;           // sup_{B(z,r/2)} u <= 1/2 - gamma
  double min_mplus = 0.0;
  double max_in_ball = 0.0;
  double measure_found = 0.0;
  double measure_threshold = 0.0;
  double sup_half_ball = 0.0;
  double conclusion_bound = 0.0;     // 1/2 - gamma
};

// Numerical certificate for the oscillation theorem on a grid function.
// Requires r < consts.r1 and B(z,r) inside the grid box.
OscillationLemmaReport verify_oscillation_lemma(const GridFunction& u, const ExtremalClass& cls,
                                                const Point& z, double r,
                                                const LemmaConstants& consts,
                                                const OscillationLemmaOptions& opts = {},
                                                const QuadratureConfig& cfg = {});

CheckReport oscillation_report_records(const OscillationLemmaReport& rep);

}  // namespace nlreg
