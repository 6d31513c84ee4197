#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "nlreg/config.hpp"
#include "nlreg/constants.hpp"
#include "nlreg/lemmas.hpp"
#include "nlreg/levy.hpp"
#include "nlreg/operators.hpp"
#include "nlreg/probe.hpp"
#include "nlreg/report.hpp"
#include "nlreg/solver.hpp"

namespace fs = std::filesystem;
using namespace nlreg;

namespace {

struct CliContext {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "json";
  std::uint64_t seed = 0;
  double tolerance_scale = 1.0;

  ConfigFile cfg;
  std::string config_text;
  QuadratureConfig quad;

  void load() {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    config_text = ss.str();
    cfg = ConfigFile::parse(config_text);
    quad = quadrature_from_config(cfg, tolerance_scale);
    fs::create_directories(out_dir);
  }

  std::string out_path(const std::string& name) const {
    return (fs::path(out_dir) / name).string();
  }
};

void finish(CliContext& ctx, const std::string& command, const CheckReport& rep,
            RunManifest manifest, double t0_seconds) {
  manifest.command = command;
  manifest.config_hash = fnv1a_hash(ctx.config_text);
  manifest.wall_seconds = t0_seconds;
  manifest.checks_total = static_cast<int>(rep.records.size());
  manifest.checks_passed = 0;
  for (const auto& r : rep.records)
    if (r.pass) ++manifest.checks_passed;
  const std::string rec_path = ctx.out_path("records.jsonl");
  write_json_records(rec_path, rep.records);
  manifest.outputs.push_back(rec_path);
  write_manifest(ctx.out_path("manifest.json"), manifest);
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CheckRecord value_record(const std::string& name, double value, bool pass = true) {
  CheckRecord rec;
  rec.check = name;
  rec.lhs = value;
  rec.rhs = value;
  rec.margin = 0.0;
  rec.pass = pass;
  return rec;
}

int run_constants(CliContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  ctx.load();
  const ExtremalClass cls = class_from_config(ctx.cfg);
  const double eps = theorem_epsilon(cls);
  const GrowthLemmaResult gr = find_eta_r(cls.base, eps, ctx.quad);
  const LemmaConstants c = compute_constants(cls, gr.eta_eps, gr.r_eps);

  CheckReport rep;
  rep.add(value_record("constants.C1", c.c1));
  rep.add(value_record("constants.C2", c.c2));
  rep.add(value_record("constants.C2_active", c.c2_active));
  rep.add(value_record("constants.C3", c.c3));
  rep.add(value_record("constants.omega_d", c.omega_d));
  rep.add(value_record("constants.theta", c.theta, c.theta > 0.0 && c.theta < 0.25));
  rep.add(value_record("constants.gamma", c.gamma,
                       c.gamma > 0.0 && c.gamma < 1.0 - std::pow(2.0, -c.eta1)));
  rep.add(value_record("constants.eta1", c.eta1));
  rep.add(value_record("constants.r1", c.r1));
  rep.add(value_record("constants.alpha", c.alpha, c.alpha < c.eta1));
  rep.add(value_record("constants.epsilon_thm", eps));

  std::printf("C1 = %.17g\n", c.c1);
  std::printf("C2 = %.17g (case-active %.17g)\n", c.c2, c.c2_active);
  std::printf("C3 = %.17g\n", c.c3);
  std::printf("theta = %.17g%s\n", c.theta, c.theta_capped ? " (1/4 cap bound)" : "");
  std::printf("gamma = %.17g\n", c.gamma);
  std::printf("alpha = %.17g\n", c.alpha);
  std::printf("eta1 = %.17g, r1 = %.17g\n", c.eta1, c.r1);

  finish(ctx, "constants", rep, {}, elapsed_since(t0));
  return rep.pass ? 0 : 1;
}

int run_verify_lemmas(CliContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  ctx.load();
  const KernelSpec kernel = kernel_from_config(ctx.cfg);
  const ExtremalClass cls = class_from_config(ctx.cfg);

  CheckReport rep;

  // scaling certificate first: a bad declared (a, delta) fails here
  const ScalingCheckReport sc = check_weak_scaling(kernel.scaling);
  {
    CheckRecord rec;
    rec.check = "scaling.certificate";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst_s=%.6g worst_t=%.6g", sc.worst_s, sc.worst_t);
    rec.inputs = buf;
    rec.lhs = -std::min(sc.worst_lower_margin, sc.worst_upper_margin);
    rec.rhs = 0.0;
    rec.margin = std::min(sc.worst_lower_margin, sc.worst_upper_margin);
    rec.pass = sc.pass;
    rep.add(rec);
  }

  const int n_r = ctx.cfg.get_int("verify", "n_r", 100);
  const auto radii = log_spaced(1e-3 * kernel.r0(), kernel.r0() * (1.0 - 1e-9), n_r);
  std::vector<Point> bases;
  const int n_base = ctx.cfg.get_int("verify", "base_points", 5);
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> sym(-2.0, 2.0);
  for (int i = 0; i < n_base; ++i)
    bases.push_back({sym(rng), kernel.dim > 1 ? sym(rng) : 0.0});
  rep.merge(verify_lemma_integrals(kernel.scaling, kernel, radii, bases, ctx.quad));

  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const GrowthLemmaResult gr = find_eta_r(kernel, eps, ctx.quad);
    rep.merge(validate_growth_result(kernel, gr, 40, ctx.quad));
  }

  const int n_bump = ctx.cfg.get_int("verify", "bump_samples", 50);
  const auto samples = random_bump_samples(kernel.dim, kernel.r0(), n_bump, ctx.seed);
  ExtremalClass sym_cls = cls;
  sym_cls.symmetric = true;
  rep.merge(verify_bump_bound(sym_cls, samples, ctx.quad));
  if (kernel.delta1() > 1.0 || kernel.delta2() < 1.0) {
    ExtremalClass gen_cls = cls;
    gen_cls.symmetric = false;
    rep.merge(verify_bump_bound(gen_cls, samples, ctx.quad));
  }

  std::printf("verify-lemmas: %zu checks, worst margin %.3g, %s\n", rep.records.size(),
              rep.worst_margin, rep.pass ? "PASS" : "FAIL");
  if (!rep.pass) {
    for (const auto& r : rep.records)
      if (!r.pass) {
        std::printf("  FAIL %s [%s] lhs=%.17g rhs=%.17g\n", r.check.c_str(), r.inputs.c_str(),
                    r.lhs, r.rhs);
        break;
      }
  }
  finish(ctx, "verify-lemmas", rep, {}, elapsed_since(t0));
  return rep.pass ? 0 : 1;
}

int run_solve(CliContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  ctx.load();
  const ProblemSpec p = problem_from_config(ctx.cfg);
  const SolveResult res = solve_bellman(p, ctx.quad);

  CheckReport rep;
  CheckRecord rec;
  rec.check = "solve.residual";
  rec.lhs = res.residual_inf;
  rec.rhs = p.tolerance;
  rec.margin = p.tolerance - res.residual_inf;
  rec.pass = res.converged;
  rep.add(rec);

  RunManifest manifest;
  manifest.extra.emplace_back("iterations", std::to_string(res.iterations));
  manifest.extra.emplace_back("residual_inf", format_g17(res.residual_inf));
  manifest.extra.emplace_back("solve_seconds", format_g17(res.wall_seconds));

  const std::string sol_path = ctx.out_path("solution.csv");
  write_solution_csv(sol_path, res.u);
  manifest.outputs.push_back(sol_path);

  std::printf("solve: %d iterations, residual %.3g, %s\n", res.iterations, res.residual_inf,
              res.converged ? "PASS" : "FAIL");
  finish(ctx, "solve", rep, std::move(manifest), elapsed_since(t0));
  return rep.pass ? 0 : 1;
}

int run_probe(CliContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  ctx.load();

  GridFunction u;
  const std::string fixture = ctx.cfg.get_string("probe", "fixture", "");
  double noise_floor = 0.0;
  if (!fixture.empty()) {
    // analytic fixture |x - x0|^beta on a box grid
    std::istringstream ss(fixture);
    std::string kind;
    std::getline(ss, kind, ':');
    if (kind != "power") throw std::runtime_error("probe: unknown fixture " + fixture);
    std::string bstr;
    std::getline(ss, bstr, ':');
    const double beta = std::stod(bstr);
    const double half = ctx.cfg.get_double("probe", "fixture_halfwidth", 1.0);
    const double h = ctx.cfg.get_double("probe", "fixture_h", 1.0 / 4096.0);
    SmoothFunction f;
    const int d = ctx.cfg.get_int("kernel", "d", 1);
    f.value = [beta, d](const Point& p) { return std::pow(norm(p, d), beta); };
    Box box;
    box.dim = d;
    box.lo = {-half, d > 1 ? -half : 0.0};
    box.hi = {half, d > 1 ? half : 0.0};
    u = sample_to_grid(f, box, h);
  } else {
    const ProblemSpec p = problem_from_config(ctx.cfg);
    const SolveResult res = solve_bellman(p, ctx.quad);
    if (!res.converged) {
      std::fprintf(stderr, "probe: solver did not converge\n");
      return 1;
    }
    u = res.u;
    noise_floor = 10.0 * p.tolerance * (1.0 + u.bound);
  }

  std::vector<double> centers;
  {
    std::istringstream ss(ctx.cfg.get_string("probe", "centers", "0"));
    double c;
    while (ss >> c) centers.push_back(c);
  }
  const double s = ctx.cfg.get_double("probe", "base_scale", 0.25);
  const int levels = ctx.cfg.get_int("probe", "levels", 5);

  CheckReport rep;
  RunManifest manifest;
  int ci = 0;
  for (double c : centers) {
    const Point x0{c, 0.0};
    const OscillationProfile prof = oscillation_profile(u, x0, s, levels, noise_floor);
    const HolderFit fit = fit_holder(prof);

    const std::string csv = ctx.out_path("profile_" + std::to_string(ci) + ".csv");
    write_profile_csv(csv, prof);
    manifest.outputs.push_back(csv);

    CheckRecord rec;
    rec.check = "probe.fit";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "center=%.6g alpha=%.6g r2=%.6g", c, fit.alpha, fit.r2);
    rec.inputs = buf;
    rec.lhs = fit.alpha;
    rec.rhs = fit.r2;
    if (!fixture.empty()) {
      const double beta = std::stod(fixture.substr(fixture.find(':') + 1));
      rec.margin = 0.01 - std::abs(fit.alpha - beta);
      rec.pass = !fit.flat && rec.margin >= 0.0;
    } else {
      rec.margin = fit.r2 - 0.9;
      rec.pass = !fit.flat && fit.r2 >= 0.9 && fit.alpha > 0.05 && fit.gamma >= 0.0;
    }
    rep.add(rec);

    // seminorm at the fitted exponent over the inner half-ball
    if (!fit.flat && fit.alpha > 0.0) {
      const double r0k = ctx.cfg.get_double("kernel", "r0", 1.0);
      const SeminormReport sem = holder_seminorm_report(u, x0, s, fit.alpha, r0k);
      rep.add(value_record("probe.seminorm", sem.seminorm));
      rep.add(value_record("probe.c_impl", sem.c_impl));
      manifest.extra.emplace_back("stride_center_" + std::to_string(ci),
                                  std::to_string(sem.stride));
    }
    ++ci;
  }

  std::printf("probe: %zu checks, %s\n", rep.records.size(), rep.pass ? "PASS" : "FAIL");
  finish(ctx, "probe", rep, std::move(manifest), elapsed_since(t0));
  return rep.pass ? 0 : 1;
}

int run_levy(CliContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  ctx.load();
  const std::string fam = ctx.cfg.get_string("levy", "family", "stable");
  BernsteinSpec b;
  const double alpha = ctx.cfg.get_double("levy", "alpha", 1.0);
  if (fam == "stable")
    b = make_stable(alpha);
  else if (fam == "relativistic")
    b = make_relativistic(alpha, ctx.cfg.get_double("levy", "m", 1.0));
  else if (fam == "mixed")
    b = make_mixed_bernstein(alpha, ctx.cfg.get_double("levy", "beta", 0.5));
  else if (fam == "log_perturbed")
    b = make_log_perturbed_bernstein(alpha, ctx.cfg.get_double("levy", "p", 0.0));
  else
    throw std::runtime_error("levy: unknown family " + fam);
  const int d = ctx.cfg.get_int("levy", "d", 1);

  CheckReport rep;

  // almost-increase: psi* <= pi^2 psi on sampled t
  {
    const auto ts = log_spaced(1e-3, 1e3, ctx.cfg.get_int("levy", "t_samples", 1000));
    double worst = std::numeric_limits<double>::infinity();
    for (double t : ts) {
      const double ps = psi_star(b, t);
      const double bound = M_PI * M_PI * psi_from_bernstein(b, t);
      worst = std::min(worst, (bound - ps) / bound);
    }
    CheckRecord rec;
    rec.check = "sec4.almost_increase";
    rec.inputs = "family=" + b.family_name();
    rec.lhs = 1.0 - worst;
    rec.rhs = 1.0;
    rec.margin = worst;
    rec.pass = worst >= 0.0;
    rep.add(rec);
  }

  // condition (H) fit
  {
    const ConditionHReport hr = check_H(b);
    CheckRecord rec;
    rec.check = "sec4.condition_H";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "family=%s delta1=%.6g delta2=%.6g a1=%.6g a2=%.6g",
                  b.family_name().c_str(), hr.fit.delta1, hr.fit.delta2, hr.fit.a1, hr.fit.a2);
    rec.inputs = buf;
    rec.lhs = hr.fit.delta1;
    rec.rhs = hr.fit.delta2;
    rec.margin = hr.pass ? 1.0 : -1.0;
    rec.pass = hr.pass;
    rep.add(rec);
  }

  if (b.family == BernsteinFamily::stable) {
    // subordination quadrature against the closed-form stable density
    double worst = std::numeric_limits<double>::infinity();
    for (double x : log_spaced(1e-2, 1e1, 7)) {
      const double ratio = levy_density_sbm(b, d, x) / stable_levy_density(d, b.alpha, x);
      worst = std::min(worst, 1e-6 - std::abs(ratio - 1.0));
    }
    CheckRecord rec;
    rec.check = "sec4.stable_density_oracle";
    rec.inputs = "family=stable";
    rec.lhs = 1e-6 - worst;
    rec.rhs = 1e-6;
    rec.margin = worst;
    rec.pass = worst >= 0.0;
    rep.add(rec);
  }

  if (b.has_levy_measure_density()) {
    const int n = ctx.cfg.get_int("levy", "x_samples", 25);
    const double r0 = b.default_r0();
    const auto xs = log_spaced(1e-3 * r0, r0 * (1.0 - 1e-9), n);
    const NuBoundsReport nb = verify_nu_bounds(b, d, xs);
    rep.merge(nb.checks);
    CheckRecord rec;
    rec.check = "sec4.nu_two_sided";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "family=%s spread=%.6g", b.family_name().c_str(), nb.spread);
    rec.inputs = buf;
    rec.lhs = nb.min_ratio;
    rec.rhs = nb.max_ratio;
    rec.margin = 10.0 - nb.spread;
    rec.pass = nb.pass;
    rep.add(rec);
  }

  std::printf("levy[%s]: %zu checks, %s\n", b.family_name().c_str(), rep.records.size(),
              rep.pass ? "PASS" : "FAIL");
  finish(ctx, "levy", rep, {}, elapsed_since(t0));
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for inhomogeneous nonlocal operators"};
  app.require_subcommand(1);

  CliContext ctx;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", ctx.config_path, "config file")->required();
    cmd->add_option("--out-dir", ctx.out_dir, "output directory");
    cmd->add_option("--format", ctx.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", ctx.seed, "seed for randomized sweeps");
    cmd->add_option("--tolerance-scale", ctx.tolerance_scale, "scale quadrature tolerances");
  };

  auto* c_constants = app.add_subcommand("constants", "closed-form lemma constants");
  auto* c_verify = app.add_subcommand("verify-lemmas", "quantitative lemma certificates");
  auto* c_solve = app.add_subcommand("solve", "Dirichlet / Bellman / Isaacs solve");
  auto* c_probe = app.add_subcommand("probe", "oscillation profiles and Holder fits");
  auto* c_levy = app.add_subcommand("levy", "Bernstein/subordination certificates");
  for (auto* cmd : {c_constants, c_verify, c_solve, c_probe, c_levy}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_constants->parsed()) return run_constants(ctx);
    if (c_verify->parsed()) return run_verify_lemmas(ctx);
    if (c_solve->parsed()) return run_solve(ctx);
    if (c_probe->parsed()) return run_probe(ctx);
    if (c_levy->parsed()) return run_levy(ctx);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
