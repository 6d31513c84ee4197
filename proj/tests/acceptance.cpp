// Acceptance suite: runs every criterion at its stated tolerance and prints
// one line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nlreg/constants.hpp"
#include "nlreg/lemmas.hpp"
#include "nlreg/levy.hpp"
#include "nlreg/operators.hpp"
#include "nlreg/probe.hpp"
#include "nlreg/solver.hpp"
#include "oracle_quadrature.hpp"

using namespace nlreg;

namespace {

const QuadratureConfig kQuad{1e-12, 1e-10, {}, 6000};
const QuadratureConfig kSolveQuad{1e-11, 1e-9, {}, 4000};

struct Library {
  std::vector<ScalingFunction> scalings;
  std::vector<KernelSpec> kernels;
  std::vector<std::string> names;
};

Library library_kernels() {
  Library lib;
  lib.scalings = {make_power_scaling(0.5), make_power_scaling(1.5),
                  make_log_perturbed_scaling(1.0, 1.0), make_mixed_scaling(1.5, 0.5)};
  lib.names = {"power05", "power15", "logp", "mixed"};
  for (const auto& f : lib.scalings) lib.kernels.push_back(make_kernel(1, f));
  return lib;
}

struct Harness {
  int failures = 0;

  template <class F>
  void criterion(int id, const std::string& name, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d %-22s %s(%.1fs)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.empty() ? "" : (detail + " ").c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

char buf_detail[256];

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  std::snprintf(buf_detail, sizeof(buf_detail), f, a, b, c);
  return buf_detail;
}

// ---------------------------------------------------------------- criterion 1
bool lemma31_certificate(std::string& detail) {
  const Library lib = library_kernels();
  double worst = 1.0;
  double worst_f0_power_eq = 0.0;
  for (std::size_t i = 0; i < lib.scalings.size(); ++i) {
    const auto& f = lib.scalings[i];
    const auto radii = log_spaced(1e-3 * f.r0, f.r0 * (1.0 - 1e-12), 100);
    for (double r : radii) {
      for (auto kind : {RadialMomentKind::f0, RadialMomentKind::fr0, RadialMomentKind::gradf0,
                        RadialMomentKind::gradfr0}) {
        if (!radial_moment_applicable(f, kind)) continue;
        const auto bv = radial_moment(f, r, kind, kQuad);
        const double margin = (bv.bound - bv.value) / bv.bound;
        worst = std::min(worst, margin);
        if (f.family == ScalingFamily::power && kind == RadialMomentKind::f0)
          worst_f0_power_eq = std::max(worst_f0_power_eq, std::abs(margin));
      }
    }
  }
  detail = fmt("worst_margin=%.2e f0_eq_dev=%.2e", worst, worst_f0_power_eq);
  return worst >= -1e-8 && worst_f0_power_eq <= 1e-6;
}

// ---------------------------------------------------------------- criterion 2
bool lemma32_certificate(std::string& detail) {
  Library lib = library_kernels();
  // inhomogeneous variant: multiplier in [0.6, 1] keeps the bare-J bound valid
  auto inhom = make_kernel(1, make_power_scaling(0.5), {}, sine_multiplier(0.6, 1.0));
  lib.kernels.push_back(std::move(inhom));
  lib.scalings.push_back(lib.scalings[0]);

  const Point bases[5] = {{0.0, 0.0}, {0.7, 0.0}, {-1.3, 0.0}, {2.9, 0.0}, {-0.4, 0.0}};
  double worst = 1.0;
  for (std::size_t i = 0; i < lib.kernels.size(); ++i) {
    const auto& k = lib.kernels[i];
    const double c1 = lemma_c1(k);
    const auto radii = log_spaced(2e-2 * k.r0(), k.r0(), 50);
    for (double r : radii)
      for (const auto& x : bases) {
        const auto q = wedge_integral(k, x, r, kQuad);
        const double rhs = c1 * k.scaling(1.0 / r);
        if (!q.converged) return false;
        worst = std::min(worst, (rhs - q.value) / rhs);
      }
  }
  detail = fmt("worst_margin=%.2e", worst);
  return worst >= -1e-8;
}

// ---------------------------------------------------------------- criterion 3
bool lemma33_constructive(std::string& detail) {
  const Library lib = library_kernels();
  const std::size_t picks[3] = {0, 1, 3};  // power05, power15, mixed
  double worst = 1.0;
  for (std::size_t i : picks) {
    const auto& k = lib.kernels[i];
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const auto res = find_eta_r(k, eps, kQuad);
      if (!(res.eta_eps > 0.0 && res.eta_eps < k.delta1())) return false;
      if (!(res.r_eps > 0.0 && res.r_eps < k.r0())) return false;
      const auto rep = validate_growth_result(k, res, 40, kQuad);
      if (!rep.pass) return false;
      worst = std::min(worst, rep.worst_margin);
    }
  }
  detail = fmt("worst_revalidation_margin=%.3f", worst);
  return true;
}

// ---------------------------------------------------------------- criterion 4
bool lemma34_certificate(std::string& detail) {
  const Library lib = library_kernels();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lib.kernels.size(); ++i) {
    const auto& k = lib.kernels[i];
    const auto samples = random_bump_samples(1, k.r0(), 50, 1234 + i);
    const auto sym = make_class(1.0, 2.0, true, k);
    const auto rep = verify_bump_bound(sym, samples, kQuad);
    if (!rep.pass) return false;
    worst = std::min(worst, rep.worst_margin);
    if (k.delta1() > 1.0 || k.delta2() < 1.0) {
      const auto gen = make_class(1.0, 2.0, false, k);
      const auto rep2 = verify_bump_bound(gen, samples, kQuad);
      if (!rep2.pass) return false;
      worst = std::min(worst, rep2.worst_margin);
    }
  }
  detail = fmt("worst_margin_units_f=%.3g", worst);
  return worst >= -1e-6;
}

// ---------------------------------------------------------------- criterion 5
bool operator_constancy(std::string& detail) {
  double worst_dev = 0.0, worst_oracle = 0.0;
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto k = make_kernel(1, make_power_scaling(alpha));
    SmoothFunction u;
    u.value = [alpha](const Point& p) {
      const double q = 1.0 - p[0] * p[0];
      return q > 0.0 ? std::pow(q, alpha / 2.0) : 0.0;
    };
    u.gradient = [alpha](const Point& p) {
      const double q = 1.0 - p[0] * p[0];
      if (q <= 0.0) return Point{0.0, 0.0};
      return Point{-alpha * p[0] * std::pow(q, alpha / 2.0 - 1.0), 0.0};
    };
    u.feature_radii = [](const Point& x) {
      return std::vector<double>{std::abs(1.0 - x[0]), std::abs(-1.0 - x[0])};
    };

    std::vector<double> xs, vals;
    for (int i = -9; i <= 9; ++i) xs.push_back(0.1 * i);
    double mean = 0.0;
    for (double x : xs) {
      const auto q = apply_linear(k, u, {x, 0.0}, kQuad);
      if (!q.converged) return false;
      vals.push_back(q.value);
      mean += q.value;
    }
    mean /= vals.size();
    for (double v : vals) worst_dev = std::max(worst_dev, std::abs(v - mean) / std::abs(mean));

    // independent oracle: pair-compensated tanh-sinh/exp-sinh on the raw
    // kernel, with the Taylor model of the pair difference below s0 (direct
    // differences drown in rounding against the singular weight there)
    for (double x : {-0.8, -0.3, 0.0, 0.45, 0.9}) {
      const double q = 1.0 - x * x;
      const double upp = -alpha * std::pow(q, alpha / 2.0 - 2.0) * (1.0 - x * x * (alpha - 1.0));
      const double s0 = 1e-5;
      const auto integrand = [&](double s) {
        if (s < s0)
          return upp * std::pow(s, 1.0 - alpha);
        return (u.value({x + s, 0.0}) + u.value({x - s, 0.0}) - 2.0 * u.value({x, 0.0})) *
               std::pow(s, -1.0 - alpha);
      };
      std::vector<double> cuts = {0.0, s0, std::abs(1.0 - x), std::abs(-1.0 - x), 5.0};
      std::sort(cuts.begin(), cuts.end());
      const double by_oracle = oracle::integrate_pieces(integrand, cuts, 5.0, 1e-10);
      const double by_impl = apply_linear(k, u, {x, 0.0}, kQuad).value;
      worst_oracle = std::max(worst_oracle, std::abs(by_impl - by_oracle) / std::abs(mean));
    }
  }
  detail = fmt("max_rel_dev=%.2e oracle_dev=%.2e", worst_dev, worst_oracle);
  return worst_dev <= 1e-3 && worst_oracle <= 1e-4;
}

// ---------------------------------------------------------------- criterion 6
bool extremal_envelope(std::string& detail) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto base = make_kernel(1, make_power_scaling(0.5));
  const auto cls = make_class(1.0, 2.0, false, base);

  double worst_env = std::numeric_limits<double>::infinity();
  double worst_sign = 0.0;
  for (int kv = 0; kv < 5; ++kv) {
    auto k = base;
    const double a = 0.5 + 3.0 * unif(rng);
    const double b = 3.0 * unif(rng);
    const double c = 2.0 * M_PI * unif(rng);
    k.multiplier = [a, b, c](const Point& x, const Point& y) {
      return 1.0 + 0.5 * (1.0 + std::sin(a * x[0] + b * y[0] + c));
    };
    for (int t = 0; t < 4; ++t) {
      const auto u = sum_of(
          gaussian_function(1, {2.0 * unif(rng) - 1.0, 0.0}, 0.3 + unif(rng), 2.0 * unif(rng) - 1.0),
          gaussian_function(1, {2.0 * unif(rng) - 1.0, 0.0}, 0.3 + unif(rng), 2.0 * unif(rng) - 1.0));
      const Point x{1.6 * unif(rng) - 0.8, 0.0};
      const double lk = apply_linear(k, u, x, kQuad).value;
      const double lo = extremal_minus(cls, u, x, kQuad).value;
      const double hi = extremal_plus(cls, u, x, kQuad).value;
      worst_env = std::min({worst_env, lk - (lo - 1e-8), (hi + 1e-8) - lk});

      const double mp_neg = extremal_plus(cls, scale_of(u, -1.0), x, kQuad).value;
      worst_sign = std::max(worst_sign, std::abs(mp_neg + lo));
    }
  }
  detail = fmt("worst_envelope_slack=%.2e sign_dev=%.2e", worst_env, worst_sign);
  return worst_env >= 0.0 && worst_sign <= 1e-10;
}

// ---------------------------------------------------------------- criterion 7
bool solver_properties(std::string& detail) {
  // constant data -> constant solution
  {
    ProblemSpec p;
    p.box = {{-1.0, 0.0}, {1.0, 0.0}, 1};
    p.h = 0.0125;
    p.exterior_data = [](const Point&) { return 0.3; };
    p.equation.kernels = {make_kernel(1, make_power_scaling(1.0))};
    const auto res = solve_dirichlet(p, kSolveQuad);
    if (!res.converged) return false;
    for (double v : res.u.values)
      if (std::abs(v - 0.3) > 1e-8) return false;
  }

  // discrete comparison principle on 20 random ordered pairs
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double a = unif(rng), w = unif(rng), b = unif(rng), c = unif(rng);
    ProblemSpec p1;
    p1.box = {{-1.0, 0.0}, {1.0, 0.0}, 1};
    p1.h = 0.05;
    p1.exterior_data = [a, w](const Point& q) { return a * std::exp(-q[0] * q[0] / w); };
    p1.equation.kernels = {make_kernel(1, make_power_scaling(0.6))};
    ProblemSpec p2 = p1;
    p2.exterior_data = [a, w, b, c](const Point& q) {
      return a * std::exp(-q[0] * q[0] / w) + b / (1.0 + c * q[0] * q[0]);
    };
    const auto u1 = solve_dirichlet(p1, kSolveQuad).u;
    const auto u2 = solve_dirichlet(p2, kSolveQuad).u;
    for (int i = 0; i < u1.node_count(); ++i)
      if (u1.values[i] > u2.values[i] + 1e-10) return false;
  }

  // self-refinement on the fractional benchmark: interior sup error drops by
  // >= 1.5 (the solution carries a dist^{alpha/2} cusp at the domain edge, so
  // the boundary layer converges at a slower half-order rate; the regularity
  // under study is interior)
  double e_coarse, e_fine;
  {
    const auto kern = make_kernel(1, make_power_scaling(1.0));
    const auto data = [](const Point& q) { return (q[0] >= 1.0 && q[0] <= 2.0) ? 1.0 : 0.0; };
    GridFunction sol[3];
    const double hs[3] = {0.02, 0.01, 0.005};
    for (int j = 0; j < 3; ++j) {
      ProblemSpec p;
      p.box = {{-1.0, 0.0}, {1.0, 0.0}, 1};
      p.h = hs[j];
      p.exterior_data = data;
      p.equation.kernels = {kern};
      const auto res = solve_dirichlet(p, kSolveQuad);
      if (!res.converged) return false;
      sol[j] = res.u;
    }
    const auto diff_on_coarse = [](const GridFunction& coarse, const GridFunction& fine) {
      double e = 0.0;
      for (int i = 0; i < coarse.node_count(); ++i) {
        const Point x = coarse.node_flat(i);
        if (std::abs(x[0]) > 0.9) continue;  // interior sup norm
        const auto nf = fine.nearest_node(x);
        e = std::max(e, std::abs(coarse.values[i] - fine.values[fine.index(nf[0], nf[1])]));
      }
      return e;
    };
    e_coarse = diff_on_coarse(sol[0], sol[1]);
    e_fine = diff_on_coarse(sol[1], sol[2]);
    if (!(e_coarse / e_fine >= 1.5)) return false;
  }

  // 2d small grid: constant exactness and one ordered pair
  {
    ProblemSpec p;
    p.box = {{-0.5, -0.5}, {0.5, 0.5}, 2};
    p.box.dim = 2;
    p.h = 1.0 / 16.0;
    p.exterior_data = [](const Point&) { return -0.7; };
    p.equation.kernels = {make_kernel(2, make_power_scaling(0.8))};
    const auto res = solve_dirichlet(p, kSolveQuad);
    if (!res.converged) return false;
    for (double v : res.u.values)
      if (std::abs(v + 0.7) > 1e-8) return false;

    ProblemSpec q1 = p;
    q1.exterior_data = [](const Point& z) { return std::exp(-z[0] * z[0] - z[1] * z[1]); };
    ProblemSpec q2 = p;
    q2.exterior_data = [](const Point& z) {
      return std::exp(-z[0] * z[0] - z[1] * z[1]) + 0.4 / (1.0 + z[0] * z[0] + z[1] * z[1]);
    };
    const auto v1 = solve_dirichlet(q1, kSolveQuad).u;
    const auto v2 = solve_dirichlet(q2, kSolveQuad).u;
    for (int i = 0; i < v1.node_count(); ++i)
      if (v1.values[i] > v2.values[i] + 1e-10) return false;
  }

  detail = fmt("refinement_factor=%.2f", e_coarse / e_fine);
  return true;
}

// ---------------------------------------------------------------- criterion 8
bool regularity_probe(std::string& detail) {
  const std::vector<ScalingFunction> profiles = {
      make_power_scaling(0.5), make_power_scaling(1.5), make_log_perturbed_scaling(1.0, 1.0)};
  double min_alpha = std::numeric_limits<double>::infinity();
  double min_r2 = 1.0;
  double worst_cimpl_shift = 0.0;

  for (const auto& f : profiles) {
    const auto kern = make_kernel(1, f);
    GridFunction sols[2];
    for (int j = 0; j < 2; ++j) {
      ProblemSpec p;
      p.box = {{-1.0, 0.0}, {1.0, 0.0}, 1};
      p.h = j == 0 ? 1.0 / 160.0 : 1.0 / 320.0;
      p.exterior_data = [](const Point& q) { return 0.5 * std::tanh(2.0 * q[0]); };
      p.equation.kernels = {kern};
      const auto res = solve_dirichlet(p, kSolveQuad);
      if (!res.converged) return false;
      sols[j] = res.u;
    }
    const double noise_floor = 10.0 * 1e-8 * (1.0 + sols[0].bound);
    for (double c : {-0.3, 0.0, 0.25}) {
      const auto prof = oscillation_profile(sols[0], {c, 0.0}, 0.25, 4, noise_floor);
      for (std::size_t k = 1; k < prof.osc.size(); ++k)
        if (prof.osc[k] > prof.osc[k - 1] + 1e-14) return false;
      const auto fit = fit_holder(prof);
      if (fit.flat) return false;
      min_alpha = std::min(min_alpha, fit.alpha);
      min_r2 = std::min(min_r2, fit.r2);
      if (!(fit.gamma >= 0.0)) return false;

      const auto sem_h = holder_seminorm_report(sols[0], {c, 0.0}, 0.25, fit.alpha, kern.r0());
      const auto sem_h2 = holder_seminorm_report(sols[1], {c, 0.0}, 0.25, fit.alpha, kern.r0());
      if (sem_h.c_impl <= 0.0 || !std::isfinite(sem_h.c_impl)) return false;
      const double shift = std::abs(sem_h2.c_impl - sem_h.c_impl) / sem_h.c_impl;
      worst_cimpl_shift = std::max(worst_cimpl_shift, shift);
    }
  }

  // analytic fixtures recover their exponents to 0.01
  for (double beta : {0.3, 0.6}) {
    SmoothFunction f;
    f.value = [beta](const Point& p) { return std::pow(std::abs(p[0]), beta); };
    Box box{{-1.0, 0.0}, {1.0, 0.0}, 1};
    const auto u = sample_to_grid(f, box, 1.0 / 4096.0);
    const auto fit = fit_holder(oscillation_profile(u, {0.0, 0.0}, 0.5, 6));
    if (std::abs(fit.alpha - beta) > 0.01) return false;
  }

  detail = fmt("min_alpha=%.3f min_r2=%.4f cimpl_shift=%.2f%%", min_alpha, min_r2,
               100.0 * worst_cimpl_shift);
  return min_alpha > 0.05 && min_r2 >= 0.9 && worst_cimpl_shift <= 0.2;
}

// ---------------------------------------------------------------- criterion 9
bool levy_certificates(std::string& detail) {
  const std::vector<BernsteinSpec> families = {
      make_stable(1.0), make_relativistic(1.0, 1.0), make_mixed_bernstein(1.5, 0.5),
      make_log_perturbed_bernstein(1.0, 0.5)};
  for (const auto& b : families) {
    for (double t : log_spaced(1e-3, 1e3, 1000))
      if (psi_star(b, t) > M_PI * M_PI * psi_from_bernstein(b, t) * (1.0 + 1e-12)) return false;
  }

  double worst_stable = 0.0;
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto b = make_stable(alpha);
    for (double x : {0.05, 0.4, 2.0}) {
      const double ratio = levy_density_sbm(b, 1, x) / stable_levy_density(1, alpha, x);
      worst_stable = std::max(worst_stable, std::abs(ratio - 1.0));
    }
  }
  if (worst_stable > 1e-6) return false;

  const auto rel = make_relativistic(1.0, 1.0);
  const auto xs = log_spaced(1e-3 * rel.default_r0(), rel.default_r0() * (1.0 - 1e-9), 25);
  const auto nb = verify_nu_bounds(rel, 1, xs);
  detail = fmt("stable_dev=%.1e rel_spread=%.2f", worst_stable, nb.spread);
  return nb.pass && nb.spread < 10.0;
}

// --------------------------------------------------------------- criterion 10
bool oscillation_end_to_end(std::string& detail) {
  const auto kern = make_kernel(1, make_power_scaling(0.5));
  const auto cls = make_class(1.0, 2.0, true, kern);

  // solver-produced function: midpoint equation with nonpositive data
  ProblemSpec p;
  p.box = {{-1.0, 0.0}, {1.0, 0.0}, 1};
  p.h = 1.0 / 160.0;
  p.exterior_data = [](const Point& q) { return -0.3 - 0.1 * std::cos(3.0 * q[0]); };
  p.equation.kind = EquationKind::isaacs;
  p.equation.kernels = {scale_kernel(kern, cls.lambda), scale_kernel(kern, cls.Lambda)};
  p.equation.kernels_b = p.equation.kernels;
  const auto res = solve_bellman(p, kSolveQuad);
  if (!res.converged) return false;

  // rescale to sup-norm 1/2
  GridFunction v = res.u;
  const double scale = 2.0 * v.bound;
  for (auto& x : v.values) x /= scale;
  const auto ext = res.u.exterior;
  v.exterior = [ext, scale](const Point& q) { return ext(q) / scale; };
  refresh_bound(v);

  // eta1 from the growth lemma at the theorem's epsilon; r1 chosen at a
  // grid-resolvable scale (the checker verifies the hypotheses directly)
  const auto gr = find_eta_r(kern, theorem_epsilon(cls), kQuad);
  const LemmaConstants consts = compute_constants(cls, gr.eta_eps, 0.3);

  OscillationLemmaOptions opts;
  opts.residual_tol = 1e-6;
  const auto rep = verify_oscillation_lemma(v, cls, {0.0, 0.0}, 0.2, consts, opts, kSolveQuad);

  detail = fmt("min_Mplus=%.1e sup_half=%.3f gamma=%.2e", rep.min_mplus, rep.sup_half_ball,
               consts.gamma);
  return rep.hypotheses_pass && rep.conclusion;
}

}  // namespace

int main() {
  Harness h;
  h.criterion(1, "lemma31-bounds", lemma31_certificate);
  h.criterion(2, "lemma32-wedge", lemma32_certificate);
  h.criterion(3, "lemma33-growth", lemma33_constructive);
  h.criterion(4, "lemma34-bump", lemma34_certificate);
  h.criterion(5, "operator-constancy", operator_constancy);
  h.criterion(6, "extremal-envelope", extremal_envelope);
  h.criterion(7, "solver-properties", solver_properties);
  h.criterion(8, "regularity-probe", regularity_probe);
  h.criterion(9, "levy-certificates", levy_certificates);
  h.criterion(10, "oscillation-theorem", oscillation_end_to_end);

  if (h.failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", h.failures);
  return 1;
}
