#include "nlreg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace nlreg {

namespace {

// (G7, K15) Gauss-Kronrod pair, QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
};

PanelResult gk15(const Integrand1D& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);

  const double fc = f(centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double absc = hlgth * kXgk[j];
    fv1[j] = f(centr - absc);
    fv2[j] = f(centr + absc);
    const double fsum = fv1[j] + fv2[j];
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  PanelResult r;
  r.value = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0)
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  const double uflow = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  if (resabs > uflow)
    abserr = std::max(abserr, std::numeric_limits<double>::epsilon() * 50.0 * resabs);
  r.error = abserr;
  return r;
}

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace

QuadResult integrate_adaptive(const Integrand1D& f, double a, double b,
                              const QuadratureConfig& cfg) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  if (!(b > a)) throw std::invalid_argument("integrate_adaptive: reversed interval");

  std::priority_queue<Segment> heap;
  const PanelResult first = gk15(f, a, b);
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double err = first.error;
  int panels = 1;

  while (panels < cfg.max_panels) {
    if (err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) break;
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at machine precision
      err -= worst.error;
      continue;
    }
    const PanelResult left = gk15(f, worst.a, mid);
    const PanelResult right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    ++panels;
  }

  out.value = total;
  out.error = err;
  out.panels = panels;
  out.converged = err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  return out;
}

namespace {

// Shared driver for the dyadic panel sums toward 0 and toward infinity:
// accumulates octave panels, watching for a stable geometric contribution
// ratio, then extrapolates the remainder. Compensated integrands eventually
// drown in rounding noise near 0 (differences of order machine epsilon get
// multiplied by the singular kernel); a turn-around of the contribution ratio
// marks that floor, where the last trustworthy geometry is extrapolated.
QuadResult dyadic_panels(const Integrand1D& f, double start,
                         bool toward_zero, const QuadratureConfig& cfg) {
  QuadResult out;
  QuadratureConfig panel_cfg = cfg;
  panel_cfg.max_panels = std::max(64, cfg.max_panels / 16);

  double total = 0.0, err = 0.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double prev_ratio = std::numeric_limits<double>::quiet_NaN();
  double last_decay_ratio = std::numeric_limits<double>::quiet_NaN();
  double last_ratio = std::numeric_limits<double>::quiet_NaN();
  // best geometric-extrapolation candidate seen so far
  double cand_value = std::numeric_limits<double>::quiet_NaN();
  double cand_err = std::numeric_limits<double>::infinity();
  bool done = false;
  const int max_octaves = toward_zero ? 80 : 240;
  int used = 0;

  for (int j = 0; j < max_octaves && !done; ++j) {
    double a, b;
    if (toward_zero) {
      b = start * std::pow(0.5, j);
      a = 0.5 * b;
    } else {
      a = start * std::pow(2.0, j);
      b = 2.0 * a;
    }
    panel_cfg.abs_tol = std::max(cfg.abs_tol * 0.125,
                                 cfg.rel_tol * 0.125 * std::abs(total));
    panel_cfg.rel_tol = cfg.rel_tol * 0.5;
    const QuadResult panel = integrate_adaptive(f, a, b, panel_cfg);
    total += panel.value;
    err += panel.error;
    used += panel.panels;

    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    const double mag = std::abs(panel.value);
    if (j >= 2 && std::isfinite(prev) && prev != 0.0) {
      const double ratio = mag / std::abs(prev);
      last_ratio = ratio;
      if (toward_zero && ratio > 1.02 && std::isfinite(last_decay_ratio)) {
        // rounding-noise floor: contributions stopped decaying. Fall back to
        // the best extrapolation candidate (set below), else an honest bar.
        if (!std::isfinite(cand_value)) {
          const double rho = std::min(last_decay_ratio, 0.9);
          cand_value = total - panel.value + prev * rho / (1.0 - rho);
          cand_err = err + mag + std::abs(prev) * (1.0 + rho / (1.0 - rho));
        }
        done = true;
        out.converged = true;
        break;
      }
      if (std::isfinite(prev_ratio) && ratio < 0.97) {
        const double spread = std::abs(ratio - prev_ratio);
        if (spread < 0.3 * ratio) {
          // geometric regime: candidate value with its model error
          const double rem = panel.value * ratio / (1.0 - ratio);
          const double model_err =
              std::abs(rem) * std::min(1.0, 4.0 * spread / (1.0 - ratio)) + err;
          if (model_err < cand_err) {
            cand_value = total + rem;
            cand_err = model_err;
          }
          if (std::abs(rem) <= 0.25 * tol || model_err <= 0.5 * tol) {
            done = true;
            out.converged = true;
            break;
          }
        }
      }
      if (mag <= 0.125 * tol && ratio < 1.0) {
        out.converged = true;
        done = true;
        if (!std::isfinite(cand_value) || err < cand_err) {
          cand_value = total;
          cand_err = err;
        }
        break;
      }
      if (ratio < 0.95) last_decay_ratio = ratio;
      prev_ratio = ratio;
    }
    if (mag == 0.0 && j >= 2) {  // compactly supported integrand
      out.converged = true;
      done = true;
      if (!std::isfinite(cand_value) || err < cand_err) {
        cand_value = total;
        cand_err = err;
      }
      break;
    }
    prev = panel.value;
  }

  if (std::isfinite(cand_value)) {
    out.value = cand_value;
    out.error = cand_err;
  } else {
    out.value = total;
    out.error = err;
  }
  out.panels = used;
  if (!out.converged) {
    // exhausted the octave budget: non-decaying contributions mean a
    // non-integrable singularity / divergent tail
    if (std::isfinite(last_ratio) && last_ratio >= 0.98)
      out.converged = false;
    else
      out.converged = out.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  }
  return out;
}

}  // namespace

QuadResult integrate_to_zero(const Integrand1D& f, double b, const QuadratureConfig& cfg) {
  if (!(b > 0.0)) throw std::invalid_argument("integrate_to_zero: bad endpoint");
  return dyadic_panels(f, b, /*toward_zero=*/true, cfg);
}

QuadResult integrate_to_infinity(const Integrand1D& f, double a, const QuadratureConfig& cfg) {
  if (!(a > 0.0)) throw std::invalid_argument("integrate_to_infinity: bad endpoint");
  return dyadic_panels(f, a, /*toward_zero=*/false, cfg);
}

QuadResult radial_integral(const Integrand1D& F, std::span<const double> splits,
                           double outer, const QuadratureConfig& cfg) {
  std::vector<double> cuts(splits.begin(), splits.end());
  for (double s : cfg.split_radii) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(a, b); }),
             cuts.end());
  std::erase_if(cuts, [&](double s) { return !(s > 0.0) || s >= outer; });

  QuadResult out;
  QuadratureConfig seg_cfg = cfg;
  const int nseg = static_cast<int>(cuts.size()) + 1;
  seg_cfg.abs_tol = cfg.abs_tol / nseg;

  const double first = cuts.empty() ? outer : cuts.front();
  if (!std::isfinite(first))
    throw std::invalid_argument("radial_integral: unbounded singular panel");

  QuadResult q = integrate_to_zero(F, first, seg_cfg);
  out.value = q.value;
  out.error = q.error;
  out.panels = q.panels;
  out.converged = q.converged;

  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = i + 1 < cuts.size() ? cuts[i + 1] : outer;
    if (std::isfinite(b))
      q = integrate_adaptive(F, a, b, seg_cfg);
    else
      q = integrate_to_infinity(F, a, seg_cfg);
    out.value += q.value;
    out.error += q.error;
    out.panels += q.panels;
    out.converged = out.converged && q.converged;
  }
  return out;
}

AngularRule::AngularRule(int d, int nodes_2d) : dim(d) {
  if (dim == 1) {
    dirs = {Point{1.0, 0.0}, Point{-1.0, 0.0}};
    weights = {1.0, 1.0};
  } else if (dim == 2) {
    dirs.resize(nodes_2d);
    weights.assign(nodes_2d, 2.0 * M_PI / nodes_2d);
    for (int i = 0; i < nodes_2d; ++i) {
      const double th = 2.0 * M_PI * i / nodes_2d;
      dirs[i] = Point{std::cos(th), std::sin(th)};
    }
  } else {
    throw std::invalid_argument("AngularRule: only d = 1, 2 supported");
  }
}

bool radial_moment_applicable(const ScalingFunction& f, RadialMomentKind kind) {
  switch (kind) {
    case RadialMomentKind::f0:
    case RadialMomentKind::fr0: return true;
    case RadialMomentKind::gradf0: return f.delta2 < 1.0;
    case RadialMomentKind::gradfr0: return f.delta1 > 1.0;
  }
  return false;
}

const char* radial_moment_name(RadialMomentKind kind) {
  switch (kind) {
    case RadialMomentKind::f0: return "f0";
    case RadialMomentKind::fr0: return "fr0";
    case RadialMomentKind::gradf0: return "gradf0";
    case RadialMomentKind::gradfr0: return "gradfr0";
  }
  return "?";
}

BoundedValue radial_moment(const ScalingFunction& f, double r, RadialMomentKind kind,
                           const QuadratureConfig& cfg) {
  if (!(r > 0.0 && r < f.r0))
    throw std::invalid_argument("radial_moment: r must lie in (0, r0)");
  if (!radial_moment_applicable(f, kind))
    throw std::invalid_argument("radial_moment: case condition on delta violated");

  const double fr = f(1.0 / r);
  BoundedValue bv;
  QuadResult q;
  switch (kind) {
    case RadialMomentKind::f0:
      q = integrate_to_zero([&](double s) { return s * f(1.0 / s); }, r, cfg);
      bv.value = q.value / (r * r);
      bv.error = q.error / (r * r);
      bv.bound = f.a2 / (2.0 - f.delta2) * fr;
      break;
    case RadialMomentKind::fr0:
      q = integrate_adaptive([&](double s) { return f(1.0 / s) / s; }, r, f.r0, cfg);
      bv.value = q.value;
      bv.error = q.error;
      bv.bound = 1.0 / (f.a1 * f.delta1) * fr;
      break;
    case RadialMomentKind::gradf0:
      q = integrate_to_zero([&](double s) { return f(1.0 / s); }, r, cfg);
      bv.value = q.value / r;
      bv.error = q.error / r;
      bv.bound = f.a2 / (1.0 - f.delta2) * fr;
      break;
    case RadialMomentKind::gradfr0:
      q = integrate_adaptive([&](double s) { return f(1.0 / s); }, r, f.r0, cfg);
      bv.value = q.value / r;
      bv.error = q.error / r;
      bv.bound = 1.0 / (f.a1 * (f.delta1 - 1.0)) * fr;
      break;
  }
  if (!q.converged) throw std::runtime_error("radial_moment: quadrature did not converge");
  return bv;
}

namespace {

// Angular average of the multiplier at radius s about x (1 when none is set).
double multiplier_ring(const KernelSpec& k, const AngularRule& rule, const Point& x,
                       double s, const std::function<double(const Point&)>& weight_fn) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
    const Point y = add(x, scale(rule.dirs[i], s));
    double w = rule.weights[i] * (weight_fn ? weight_fn(y) : 1.0);
    if (k.multiplier) w *= k.multiplier(x, y);
    acc += w;
  }
  return acc;
}

}  // namespace

QuadResult wedge_integral(const KernelSpec& k, const Point& x, double r,
                          const QuadratureConfig& cfg) {
  if (!(r > 0.0 && r <= k.r0()))
    throw std::invalid_argument("wedge_integral: r must lie in (0, r0]");
  const AngularRule rule(k.dim);
  const auto F = [&](double s) {
    const double wedge = std::min(1.0, (s / r) * (s / r));
    return std::pow(s, k.dim - 1) * k.radial(s) * wedge *
           multiplier_ring(k, rule, x, s, nullptr);
  };
  const double splits[] = {r, k.r0(), k.tail.kind == TailKind::truncate ? k.tail.r_inf : 0.0};
  return radial_integral(F, std::span<const double>(splits, 3), k.support_radius(), cfg);
}

QuadResult growth_integral(const KernelSpec& k, const Point& x, double s, double eta,
                           const QuadratureConfig& cfg) {
  const double r0v = k.r0();
  if (!(s > 0.0 && s < r0v))
    throw std::invalid_argument("growth_integral: s must lie in (0, r0)");
  if (eta == 0.0) {
    QuadResult out;
    out.converged = true;
    return out;  // integrand vanishes identically
  }
  if (!(eta > 0.0 && eta < k.delta1()))
    throw std::invalid_argument(
        "growth_integral: eta outside (0, delta1); comparison integral diverges");

  const AngularRule rule(k.dim);
  const auto F = [&](double t) {
    // ((2 (4t ^ r0) / s)^eta - 1), evaluated stably for tiny eta.
    const double arg = 2.0 * std::min(4.0 * t, r0v) / s;
    const double factor = std::expm1(eta * std::log(arg));
    return std::pow(t, k.dim - 1) * k.radial(t) * factor *
           multiplier_ring(k, rule, x, t, nullptr);
  };

  // Domain is (s/4, inf); shift panels so the lower limit is exact.
  std::vector<double> cuts = {s, r0v / 4.0, r0v};
  if (k.tail.kind == TailKind::truncate) cuts.push_back(k.tail.r_inf);
  std::sort(cuts.begin(), cuts.end());
  std::erase_if(cuts, [&](double c) { return c <= s / 4.0 || c >= k.support_radius(); });

  QuadResult out;
  QuadratureConfig seg_cfg = cfg;
  seg_cfg.abs_tol = cfg.abs_tol / (cuts.size() + 1);
  double a = s / 4.0;
  for (double b : cuts) {
    const QuadResult q = integrate_adaptive(F, a, b, seg_cfg);
    out.value += q.value;
    out.error += q.error;
    out.panels += q.panels;
    out.converged = (a == s / 4.0) ? q.converged : (out.converged && q.converged);
    a = b;
  }
  QuadResult q;
  if (std::isfinite(k.support_radius()))
    q = a < k.support_radius() ? integrate_adaptive(F, a, k.support_radius(), seg_cfg)
                               : QuadResult{0.0, 0.0, 0, true};
  else
    q = integrate_to_infinity(F, a, seg_cfg);
  out.value += q.value;
  out.error += q.error;
  out.panels += q.panels;
  out.converged = cuts.empty() ? q.converged : (out.converged && q.converged);
  return out;
}

QuadResult singular_integral(const KernelSpec& k,
                             const std::function<double(const Point&)>& g, const Point& x,
                             const QuadratureConfig& cfg) {
  const AngularRule rule(k.dim);
  const auto F = [&](double s) {
    return std::pow(s, k.dim - 1) * k.radial(s) * multiplier_ring(k, rule, x, s, g);
  };
  std::vector<double> splits = {k.r0()};
  if (k.tail.kind == TailKind::truncate) splits.push_back(k.tail.r_inf);
  return radial_integral(F, splits, k.support_radius(), cfg);
}

double growth_comparison_integral(double eta, double delta1) {
  if (!(eta >= 0.0 && eta < delta1))
    throw std::invalid_argument("growth_comparison_integral: need 0 <= eta < delta1");
  return std::pow(2.0, eta) / (delta1 - eta) - 1.0 / delta1;
}

}  // namespace nlreg
