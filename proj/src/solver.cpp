#include "nlreg/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace nlreg {

SolverGrid make_grid(const Box& box, double h) {
  SolverGrid g;
  g.box = box;
  g.dim = box.dim;
  g.h = h;
  for (int a = 0; a < box.dim; ++a) {
    const double w = box.width(a);
    const int n = static_cast<int>(std::lround(w / h)) + 1;
    if (std::abs(box.lo[a] + (n - 1) * h - box.hi[a]) > 1e-9 * std::max(1.0, w))
      throw std::invalid_argument("make_grid: box width must be a multiple of h");
    g.n[a] = n;
  }
  if (box.dim == 1) g.n[1] = 1;
  return g;
}

namespace {

// Offset-cell integral of the radial kernel over the cell centered at
// (dx*h, dy*h), by adaptive quadrature in d=1 and tensor Gauss in d=2.
double cell_weight_1d(const KernelSpec& k, int dx, double h, const QuadratureConfig& cfg) {
  const double a = (dx - 0.5) * h;
  const double b = (dx + 0.5) * h;
  QuadratureConfig c = cfg;
  c.abs_tol = 1e-14;
  c.rel_tol = 1e-10;
  const double sup = k.support_radius();
  double lo = a, hi = std::min(b, sup);
  if (hi <= lo) return 0.0;
  // keep the r0 crossing on a panel edge
  const double r0v = k.r0();
  if (lo < r0v && r0v < hi) {
    return integrate_adaptive([&](double s) { return k.radial(s); }, lo, r0v, c).value +
           integrate_adaptive([&](double s) { return k.radial(s); }, r0v, hi, c).value;
  }
  return integrate_adaptive([&](double s) { return k.radial(s); }, lo, hi, c).value;
}

const double kGauss4X[4] = {-0.861136311594052575, -0.339981043584856265,
                            0.339981043584856265, 0.861136311594052575};
const double kGauss4W[4] = {0.347854845137453857, 0.652145154862546143,
                            0.652145154862546143, 0.347854845137453857};

double cell_weight_2d_rec(const KernelSpec& k, double cx, double cy, double half, int depth) {
  const double rad = std::hypot(cx, cy);
  const double sup = k.support_radius();
  const double reach = half * std::sqrt(2.0);
  if (rad - reach >= sup) return 0.0;
  const bool crosses_support = std::isfinite(sup) && rad + reach > sup && rad - reach < sup;
  if ((crosses_support || rad < 4.0 * half) && depth < 4) {
    const double q = 0.5 * half;
    return cell_weight_2d_rec(k, cx - q, cy - q, q, depth + 1) +
           cell_weight_2d_rec(k, cx + q, cy - q, q, depth + 1) +
           cell_weight_2d_rec(k, cx - q, cy + q, q, depth + 1) +
           cell_weight_2d_rec(k, cx + q, cy + q, q, depth + 1);
  }
  double acc = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double x = cx + half * kGauss4X[i];
      const double y = cy + half * kGauss4X[j];
      const double s = std::hypot(x, y);
      if (s >= sup) continue;
      acc += kGauss4W[i] * kGauss4W[j] * k.radial(s);
    }
  return acc * half * half;
}

double cell_weight(const KernelSpec& k, int dx, int dy, double h, const QuadratureConfig& cfg) {
  if (k.dim == 1) return cell_weight_1d(k, dx, h, cfg);
  return cell_weight_2d_rec(k, dx * h, dy * h, 0.5 * h, 0);
}

// Second moment of the kernel over the own cell, int_{cell} |z|^2 J(|z|) dz.
double own_cell_second_moment(const KernelSpec& k, double h, const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.abs_tol = 1e-14;
  c.rel_tol = 1e-10;
  const double a = 0.5 * h;
  if (k.dim == 1) {
    const auto f = [&](double s) { return 2.0 * s * s * k.radial(s); };
    return integrate_to_zero(f, a, c).value;
  }
  // Polar split: full rings to the inradius, clipped rings to the corner.
  const auto inner = [&](double s) { return 2.0 * M_PI * s * s * s * k.radial(s); };
  const auto corner = [&](double s) {
    const double angle = 2.0 * M_PI - 8.0 * std::acos(a / s);
    return angle * s * s * s * k.radial(s);
  };
  double v = integrate_to_zero(inner, a, c).value;
  v += integrate_adaptive(corner, a * (1.0 + 1e-14), a * std::sqrt(2.0), c).value;
  return v;
}

}  // namespace

namespace {

struct StencilPlan {
  int lwin = 0;        // window half-extent in offsets
  double far_start = 0.0;
};

StencilPlan plan_window(const SolverGrid& grid, double r0) {
  StencilPlan p;
  const int span = std::max(grid.n[0], grid.n[1]);
  p.lwin = span + static_cast<int>(std::ceil(r0 / grid.h)) + 2;
  p.far_start = (p.lwin + 0.5) * grid.h;
  return p;
}

bool outside_window(const Point& z, double a) {
  return std::abs(z[0]) > a || std::abs(z[1]) > a;
}

}  // namespace

double Stencil::apply_row(int node_idx, const std::vector<double>& values) const {
  const int ix = node_idx % grid.n[0];
  const int iy = node_idx / grid.n[0];
  const Point x = grid.node(ix, iy);
  const double ui = values[node_idx];
  const double h = grid.h;
  const int lwin = wbar_extent[0] - 1;
  const bool comp = compensated;

  Point grad{0.0, 0.0};
  if (comp && has_multiplier) {
    grad[0] = (values[node_idx + 1] - values[node_idx - 1]) / (2.0 * h);
    if (grid.dim > 1)
      grad[1] = (values[node_idx + grid.n[0]] - values[node_idx - grid.n[0]]) / (2.0 * h);
  }

  double acc = 0.0;
  const int ly = grid.dim > 1 ? lwin : 0;
  for (int dy = -ly; dy <= ly; ++dy) {
    for (int dx = -lwin; dx <= lwin; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const double w = wbar[std::abs(dx) + wbar_extent[0] * std::abs(dy)];
      if (w == 0.0) continue;
      const int jx = ix + dx, jy = iy + dy;
      const bool inside = jx >= 0 && jx < grid.n[0] && jy >= 0 && jy < grid.n[1];
      // lattice coordinates, bit-identical with the assembled system (data
      // may jump exactly at a lattice point)
      const Point y{grid.box.lo[0] + jx * h, grid.dim > 1 ? grid.box.lo[1] + jy * h : 0.0};
      const double vj = inside ? values[jx + grid.n[0] * jy] : exterior_data(y);
      double diff = vj - ui;
      if (comp && has_multiplier) {
        const double s = norm(Point{dx * h, dy * h}, grid.dim);
        if (s < r0) diff -= grad[0] * dx * h + grad[1] * dy * h;
      }
      const double m = has_multiplier ? kernel.multiplier(x, y) : 1.0;
      acc += w * m * diff;
    }
  }
  // own-cell shell via the axis second differences
  double shell = values[node_idx + 1] + values[node_idx - 1] - 2.0 * ui;
  if (grid.dim > 1)
    shell += values[node_idx + grid.n[0]] + values[node_idx - grid.n[0]] - 2.0 * ui;
  const double mii = has_multiplier ? kernel.multiplier(x, x) : 1.0;
  acc += shell_coeff * mii * shell;
  acc += far_load[node_idx] - ui * far_mass[node_idx];
  return acc;
}

namespace {

// Weight tables only (no exterior integrals); shared by build_stencil and
// the residual field.
Stencil build_tables(const KernelSpec& k, const SolverGrid& grid,
                     const QuadratureConfig& cfg, Exec mode) {
  if (!(grid.h < k.r0() / 4.0))
    throw std::invalid_argument("build_stencil: need h < r0/4");
  Stencil st;
  st.grid = grid;
  st.r0 = k.r0();
  st.kernel = k;
  st.compensated = k.compensated();
  st.has_multiplier = static_cast<bool>(k.multiplier);

  const StencilPlan plan = plan_window(grid, k.r0());
  const int lwin = plan.lwin;
  st.wbar_extent = {lwin + 1, grid.dim > 1 ? lwin + 1 : 1};
  st.wbar.assign(st.wbar_extent[0] * st.wbar_extent[1], 0.0);

  // Offset weight table (radial kernel: depends on |dx|, |dy| only).
  const int ny = grid.dim > 1 ? lwin + 1 : 1;
  for_each_index(static_cast<std::size_t>(ny), [&](std::size_t dyi) {
    for (int dx = 0; dx <= lwin; ++dx) {
      if (dx == 0 && dyi == 0) continue;
      st.wbar[dx + st.wbar_extent[0] * dyi] =
          cell_weight(k, dx, static_cast<int>(dyi), grid.h, cfg);
    }
  }, mode);

  const double second_moment = own_cell_second_moment(k, grid.h, cfg);
  st.shell_coeff = second_moment / (2.0 * grid.dim * grid.h * grid.h);
  if (st.shell_coeff < 0.0)
    throw std::runtime_error("build_stencil: monotonicity lost in the shell term");
  return st;
}

}  // namespace

Stencil build_stencil(const KernelSpec& k, const SolverGrid& grid,
                      const std::function<double(const Point&)>& exterior_data,
                      const QuadratureConfig& cfg, Exec mode) {
  Stencil st = build_tables(k, grid, cfg, mode);
  st.exterior_data = exterior_data;
  const int lwin = st.wbar_extent[0] - 1;
  const StencilPlan plan{lwin, (lwin + 0.5) * grid.h};

  // Far field beyond the offset window: load and mass per node.
  const double a = plan.far_start;
  const AngularRule rule(grid.dim);
  const int nn = grid.node_count();
  st.far_mass.assign(nn, 0.0);
  st.far_load.assign(nn, 0.0);

  QuadratureConfig far_cfg = cfg;
  far_cfg.abs_tol = std::max(cfg.abs_tol, 1e-12);

  double shared_mass = -1.0;
  if (!st.has_multiplier) {
    // Radial kernel: the window is node-independent, one mass quadrature serves all.
    const auto fm = [&](double s) {
      double ang = 0.0;
      for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
        const Point z = scale(rule.dirs[i], s);
        if (outside_window(z, a)) ang += rule.weights[i];
      }
      return std::pow(s, grid.dim - 1) * k.radial(s) * ang;
    };
    const double sup = k.support_radius();
    QuadResult q;
    if (std::isfinite(sup))
      q = a < sup ? integrate_adaptive(fm, a, sup, far_cfg) : QuadResult{0, 0, 0, true};
    else
      q = integrate_to_infinity(fm, a, far_cfg);
    if (!q.converged) throw std::runtime_error("build_stencil: far-field mass did not converge");
    shared_mass = q.value;
  }

  for_each_index(static_cast<std::size_t>(nn), [&](std::size_t idx) {
    const Point x = grid.node_flat(static_cast<int>(idx));
    const auto far = [&](double s, bool with_g) {
      double ang = 0.0;
      for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
        const Point z = scale(rule.dirs[i], s);
        if (!outside_window(z, a)) continue;
        const Point y = add(x, z);
        double term = with_g ? exterior_data(y) : 1.0;
        if (st.has_multiplier) term *= k.multiplier(x, y);
        ang += rule.weights[i] * term;
      }
      return std::pow(s, grid.dim - 1) * k.radial(s) * ang;
    };
    const double sup = k.support_radius();
    const auto run = [&](bool with_g) {
      const auto f = [&](double s) { return far(s, with_g); };
      if (std::isfinite(sup))
        return a < sup ? integrate_adaptive(f, a, sup, far_cfg) : QuadResult{0, 0, 0, true};
      return integrate_to_infinity(f, a, far_cfg);
    };
    st.far_load[idx] = run(true).value;
    st.far_mass[idx] = st.has_multiplier ? run(false).value : shared_mass;
  }, mode);

  // Compensator coefficients; they cancel exactly for radial kernels, so only
  // multiplier kernels carry them.
  if (st.compensated && st.has_multiplier) {
    st.comp_vec.assign(nn, Point{0.0, 0.0});
    const int ly = grid.dim > 1 ? lwin : 0;
    for_each_index(static_cast<std::size_t>(nn), [&](std::size_t idx) {
      const Point x = grid.node_flat(static_cast<int>(idx));
      Point c{0.0, 0.0};
      for (int dy = -ly; dy <= ly; ++dy)
        for (int dx = -lwin; dx <= lwin; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const Point z{dx * grid.h, grid.dim > 1 ? dy * grid.h : 0.0};
          if (norm(z, grid.dim) >= st.r0) continue;
          const double w = st.wbar[std::abs(dx) + st.wbar_extent[0] * std::abs(dy)];
          const double m = k.multiplier(x, add(x, z));
          c[0] += w * m * z[0];
          c[1] += w * m * z[1];
        }
      st.comp_vec[idx] = c;
    }, mode);
  }
  return st;
}

namespace {

struct UnknownMap {
  std::vector<int> of_node;   // -1 when Dirichlet
  std::vector<int> to_node;
};

UnknownMap unknown_map(const ProblemSpec& p, const SolverGrid& grid) {
  UnknownMap m;
  m.of_node.assign(grid.node_count(), -1);
  for (int iy = 0; iy < grid.n[1]; ++iy)
    for (int ix = 0; ix < grid.n[0]; ++ix) {
      if (ix == 0 || ix == grid.n[0] - 1) continue;
      if (grid.dim > 1 && (iy == 0 || iy == grid.n[1] - 1)) continue;
      const Point x = grid.node(ix, iy);
      if (p.domain == DomainKind::ball && !(dist(x, p.center, grid.dim) < p.radius)) continue;
      m.of_node[ix + grid.n[0] * iy] = static_cast<int>(m.to_node.size());
      m.to_node.push_back(ix + grid.n[0] * iy);
    }
  return m;
}

// Fills Dirichlet values into the node vector (unknowns untouched).
void fill_known(const ProblemSpec& p, const SolverGrid& grid, const UnknownMap& um,
                std::vector<double>& values) {
  for (int idx = 0; idx < grid.node_count(); ++idx) {
    if (um.of_node[idx] >= 0) continue;
    values[idx] = p.exterior_data(grid.node_flat(idx));
  }
}

// Assembles `scale` times the row of `st` for unknown `row` into the system.
void assemble_row(const Stencil& st, const UnknownMap& um, const ProblemSpec& p, int row,
                  Eigen::MatrixXd& A, Eigen::VectorXd& b, double scale = 1.0) {
  const SolverGrid& grid = st.grid;
  const int node = um.to_node[row];
  const int ix = node % grid.n[0];
  const int iy = node / grid.n[0];
  const Point x = grid.node(ix, iy);
  const double h = grid.h;
  const int lwin = st.wbar_extent[0] - 1;
  const int ly = grid.dim > 1 ? lwin : 0;

  double diag = 0.0;
  double rhs = 0.0;

  const auto couple = [&](int jx, int jy, double c) {
    // c >= 0: coupling to node (jx,jy); Dirichlet and off-box values -> rhs
    c *= scale;
    const bool inside = jx >= 0 && jx < grid.n[0] && jy >= 0 && jy < grid.n[1];
    diag -= c;
    if (inside) {
      const int j = jx + grid.n[0] * jy;
      const int uj = um.of_node[j];
      if (uj >= 0) {
        A(row, uj) += c;
        return;
      }
      rhs -= c * p.exterior_data(grid.node(jx, jy));
      return;
    }
    const Point y{grid.box.lo[0] + jx * h, grid.dim > 1 ? grid.box.lo[1] + jy * h : 0.0};
    rhs -= c * p.exterior_data(y);
  };

  for (int dy = -ly; dy <= ly; ++dy)
    for (int dx = -lwin; dx <= lwin; ++dx) {
      if (dx == 0 && dy == 0) continue;
      double w = st.wbar[std::abs(dx) + st.wbar_extent[0] * std::abs(dy)];
      if (w == 0.0) continue;
      if (st.has_multiplier) {
        const Point y{x[0] + dx * h, grid.dim > 1 ? x[1] + dy * h : 0.0};
        w *= st.kernel.multiplier(x, y);
      }
      if (w < 0.0) throw std::runtime_error("assemble_row: negative off-diagonal weight");
      couple(ix + dx, iy + dy, w);
    }

  const double mii = st.has_multiplier ? st.kernel.multiplier(x, x) : 1.0;
  const double sc = st.shell_coeff * mii;
  couple(ix + 1, iy, sc);
  couple(ix - 1, iy, sc);
  if (grid.dim > 1) {
    couple(ix, iy + 1, sc);
    couple(ix, iy - 1, sc);
  }

  // upwind compensator (multiplier kernels only; cancels for radial ones)
  if (!st.comp_vec.empty()) {
    const Point c = st.comp_vec[node];
    for (int axis = 0; axis < grid.dim; ++axis) {
      const double bcoef = -c[axis];
      if (bcoef == 0.0) continue;
      const int jx = ix + (axis == 0 ? (bcoef > 0.0 ? 1 : -1) : 0);
      const int jy = iy + (axis == 1 ? (bcoef > 0.0 ? 1 : -1) : 0);
      couple(jx, jy, std::abs(bcoef) / h);
    }
  }

  diag -= scale * st.far_mass[node];
  rhs -= scale * st.far_load[node];

  A(row, row) += diag;
  b(row) += rhs;
}

GridFunction wrap_solution(const ProblemSpec& p, const SolverGrid& grid,
                           const std::vector<double>& values) {
  GridFunction u;
  u.box = grid.box;
  u.h = grid.h;
  u.n = grid.n;
  u.dim = grid.dim;
  u.values = values;
  u.exterior = p.exterior_data;
  refresh_bound(u);
  return u;
}

std::uint64_t policy_hash(const std::vector<int>& policy) {
  std::uint64_t h = 1469598103934665603ull;
  for (int v : policy) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

SolveResult solve_dirichlet(const ProblemSpec& p, const QuadratureConfig& cfg, Exec mode) {
  if (p.equation.kind != EquationKind::linear || p.equation.kernels.size() != 1)
    throw std::invalid_argument("solve_dirichlet: expected a single linear kernel");
  ProblemSpec q = p;
  q.equation.kind = EquationKind::bellman;  // degenerate one-kernel family
  return solve_bellman(q, cfg, mode);
}

SolveResult solve_bellman(const ProblemSpec& p, const QuadratureConfig& cfg, Exec mode) {
  const auto t0 = std::chrono::steady_clock::now();
  const SolverGrid grid = make_grid(p.box, p.h);
  if (p.domain == DomainKind::ball) {
    for (int a = 0; a < grid.dim; ++a)
      if (p.center[a] - p.radius < grid.box.lo[a] - 1e-12 ||
          p.center[a] + p.radius > grid.box.hi[a] + 1e-12)
        throw std::invalid_argument("solve: ball not contained in the grid box");
  }
  if (p.equation.kernels.empty())
    throw std::invalid_argument("solve: empty kernel family");
  const bool isaacs = p.equation.kind == EquationKind::isaacs;
  if (isaacs && p.equation.kernels_b.empty())
    throw std::invalid_argument("solve: isaacs needs two kernel families");

  std::vector<Stencil> sa, sb;
  for (const auto& k : p.equation.kernels)
    sa.push_back(build_stencil(k, grid, p.exterior_data, cfg, mode));
  if (isaacs)
    for (const auto& k : p.equation.kernels_b)
      sb.push_back(build_stencil(k, grid, p.exterior_data, cfg, mode));

  const UnknownMap um = unknown_map(p, grid);
  const int nu = static_cast<int>(um.to_node.size());
  if (nu == 0) throw std::invalid_argument("solve: no interior unknowns at this h");

  std::vector<double> values(grid.node_count(), 0.0);
  fill_known(p, grid, um, values);

  std::vector<int> pol_a(grid.node_count(), 0), pol_b(grid.node_count(), 0);
  if (!p.initial_policy.empty()) {
    if (p.initial_policy.size() != static_cast<std::size_t>(grid.node_count()))
      throw std::invalid_argument("solve: initial_policy size mismatch");
    for (int i = 0; i < grid.node_count(); ++i)
      pol_a[i] = std::clamp(p.initial_policy[i], 0,
                            static_cast<int>(p.equation.kernels.size()) - 1);
  }
  std::vector<int> pol_a_new = pol_a, pol_b_new = pol_b;

  SolveResult out;
  std::unordered_set<std::uint64_t> seen;
  Eigen::MatrixXd A(nu, nu);
  Eigen::VectorXd b(nu), sol(nu);

  const int max_iter = std::max(1, p.max_iterations);
  for (int iter = 0; iter < max_iter; ++iter) {
    A.setZero();
    b.setZero();
    for_each_index(static_cast<std::size_t>(nu), [&](std::size_t row) {
      const int node = um.to_node[row];
      if (!isaacs) {
        assemble_row(sa[pol_a[node]], um, p, static_cast<int>(row), A, b);
      } else {
        // midpoint equation 1/2 (L_a + L_b) u = 0 under the frozen pair
        assemble_row(sa[pol_a[node]], um, p, static_cast<int>(row), A, b, 0.5);
        assemble_row(sb[pol_b[node]], um, p, static_cast<int>(row), A, b, 0.5);
      }
    }, mode);

    sol = A.partialPivLu().solve(b);
    if (!sol.allFinite()) throw std::runtime_error("solve: singular linear system");
    for (int row = 0; row < nu; ++row) values[um.to_node[row]] = sol(row);

    // policy improvement
    bool changed = false;
    double bellman_res = 0.0;
    std::vector<double> node_res(nu, 0.0);
    for_each_index(static_cast<std::size_t>(nu), [&](std::size_t row) {
      const int node = um.to_node[row];
      const auto improve = [&](const std::vector<Stencil>& fam, int old_pick, int sign) {
        int best = old_pick;
        double best_v = fam[old_pick].apply_row(node, values);
        for (int kidx = 0; kidx < static_cast<int>(fam.size()); ++kidx) {
          if (kidx == old_pick) continue;
          const double v = fam[kidx].apply_row(node, values);
          // retain the previous policy inside the tie band
          if (sign > 0 ? v > best_v + 1e-12 : v < best_v - 1e-12) {
            best = kidx;
            best_v = v;
          }
        }
        return std::pair<int, double>{best, best_v};
      };
      if (!isaacs) {
        const auto [best, v] = improve(sa, pol_a[node], p.equation.sign);
        pol_a_new[node] = best;
        node_res[row] = v;
      } else {
        const auto [ba, va] = improve(sa, pol_a[node], +1);
        const auto [bb, vb] = improve(sb, pol_b[node], -1);
        pol_a_new[node] = ba;
        pol_b_new[node] = bb;
        node_res[row] = 0.5 * (va + vb);
      }
    }, mode);
    for (int row = 0; row < nu; ++row) {
      const int node = um.to_node[row];
      if (pol_a_new[node] != pol_a[node] || (isaacs && pol_b_new[node] != pol_b[node]))
        changed = true;
      bellman_res = std::max(bellman_res, std::abs(node_res[row]));
    }
    pol_a = pol_a_new;
    pol_b = pol_b_new;
    out.iterations = iter + 1;
    out.residual_inf = bellman_res;

    if (!changed) {
      out.converged = bellman_res <= p.tolerance;
      break;
    }
    const std::uint64_t hsh = policy_hash(pol_a) ^ (policy_hash(pol_b) << 1);
    if (!seen.insert(hsh).second)
      throw std::runtime_error("solve: policy cycle detected (length <= " +
                               std::to_string(out.iterations) + ")");
  }

  out.u = wrap_solution(p, grid, values);
  out.policy.assign(um.to_node.size(), 0);
  for (std::size_t row = 0; row < um.to_node.size(); ++row)
    out.policy[row] = pol_a[um.to_node[row]];
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ResidualField residual(const ExtremalClass& cls, const GridFunction& u,
                       const QuadratureConfig& cfg, Exec mode) {
  const KernelSpec& k = cls.base;
  if (k.multiplier)
    throw std::invalid_argument("residual: extremal class uses the bare J");
  SolverGrid grid;
  grid.box = u.box;
  grid.h = u.h;
  grid.n = u.n;
  grid.dim = u.dim;

  const Stencil st = build_tables(k, grid, cfg, mode);
  const int lwin = st.wbar_extent[0] - 1;
  const double far_a = (lwin + 0.5) * grid.h;
  const AngularRule rule(grid.dim);
  const int nn = grid.node_count();

  ResidualField rf;
  rf.mplus.assign(nn, std::numeric_limits<double>::quiet_NaN());
  rf.mminus.assign(nn, std::numeric_limits<double>::quiet_NaN());
  rf.interior.assign(nn, 0);

  const double lam = cls.lambda, Lam = cls.Lambda;
  const auto select = [&](double v, int sign) {
    if (sign > 0) return v > 0.0 ? Lam * v : lam * v;
    return v > 0.0 ? lam * v : Lam * v;
  };

  for_each_index(static_cast<std::size_t>(nn), [&](std::size_t idx) {
    const int ix = static_cast<int>(idx) % grid.n[0];
    const int iy = static_cast<int>(idx) / grid.n[0];
    if (ix == 0 || ix == grid.n[0] - 1) return;
    if (grid.dim > 1 && (iy == 0 || iy == grid.n[1] - 1)) return;
    rf.interior[idx] = 1;

    const Point x = grid.node(ix, iy);
    const double ui = u.values[idx];
    const double h = grid.h;
    const int ly = grid.dim > 1 ? lwin : 0;

    const auto lattice_value = [&](int jx, int jy) {
      const bool inside = jx >= 0 && jx < grid.n[0] && jy >= 0 && jy < grid.n[1];
      if (inside) return u.values[jx + grid.n[0] * jy];
      const Point y{grid.box.lo[0] + jx * h, grid.dim > 1 ? grid.box.lo[1] + jy * h : 0.0};
      return u.exterior(y);
    };

    Point grad{0.0, 0.0};
    const bool comp = k.compensated() && !cls.symmetric;
    if (comp) {
      grad[0] = (lattice_value(ix + 1, iy) - lattice_value(ix - 1, iy)) / (2.0 * h);
      if (grid.dim > 1)
        grad[1] = (lattice_value(ix, iy + 1) - lattice_value(ix, iy - 1)) / (2.0 * h);
    }

    double plus = 0.0, minus = 0.0;
    if (cls.symmetric) {
      // pairwise second differences over the offset half-lattice
      for (int dy = -ly; dy <= ly; ++dy)
        for (int dx = -lwin; dx <= lwin; ++dx) {
          if (dy < 0 || (dy == 0 && dx <= 0)) continue;  // half-lattice
          const double w = st.wbar[std::abs(dx) + st.wbar_extent[0] * std::abs(dy)];
          if (w == 0.0) continue;
          const double d2 =
              lattice_value(ix + dx, iy + dy) + lattice_value(ix - dx, iy - dy) - 2.0 * ui;
          plus += w * select(d2, +1);
          minus += w * select(d2, -1);
        }
    } else {
      for (int dy = -ly; dy <= ly; ++dy)
        for (int dx = -lwin; dx <= lwin; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const double w = st.wbar[std::abs(dx) + st.wbar_extent[0] * std::abs(dy)];
          if (w == 0.0) continue;
          double diff = lattice_value(ix + dx, iy + dy) - ui;
          if (comp) {
            const double s = norm(Point{dx * h, dy * h}, grid.dim);
            if (s < k.r0()) diff -= grad[0] * dx * h + grad[1] * dy * h;
          }
          plus += w * select(diff, +1);
          minus += w * select(diff, -1);
        }
    }

    // own-cell shell: axis second differences with per-axis selection
    {
      const double sxx = lattice_value(ix + 1, iy) + lattice_value(ix - 1, iy) - 2.0 * ui;
      plus += st.shell_coeff * select(sxx, +1);
      minus += st.shell_coeff * select(sxx, -1);
      if (grid.dim > 1) {
        const double syy = lattice_value(ix, iy + 1) + lattice_value(ix, iy - 1) - 2.0 * ui;
        plus += st.shell_coeff * select(syy, +1);
        minus += st.shell_coeff * select(syy, -1);
      }
    }

    // far field with the sign split inside the integrand
    const auto far = [&](int sign) {
      const auto f = [&](double s) {
        double ang = 0.0;
        for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
          const Point z = scale(rule.dirs[i], s);
          if (!outside_window(z, far_a)) continue;
          if (cls.symmetric) {
            const double d2 = u.exterior(add(x, z)) + u.exterior(sub(x, z)) - 2.0 * ui;
            ang += 0.5 * rule.weights[i] * select(d2, sign);
          } else {
            double diff = u.exterior(add(x, z)) - ui;
            if (comp && s < k.r0()) diff -= dot(grad, z, grid.dim);
            ang += rule.weights[i] * select(diff, sign);
          }
        }
        return std::pow(s, grid.dim - 1) * k.radial(s) * ang;
      };
      const double sup = k.support_radius();
      if (std::isfinite(sup))
        return far_a < sup ? integrate_adaptive(f, far_a, sup, cfg) : QuadResult{0, 0, 0, true};
      return integrate_to_infinity(f, far_a, cfg);
    };
    plus += far(+1).value;
    minus += far(-1).value;

    rf.mplus[idx] = plus;
    rf.mminus[idx] = minus;
  }, mode);

  rf.min_mplus = std::numeric_limits<double>::infinity();
  rf.max_mplus = -std::numeric_limits<double>::infinity();
  rf.min_mminus = std::numeric_limits<double>::infinity();
  rf.max_mminus = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < nn; ++i) {
    if (!rf.interior[i]) continue;
    rf.min_mplus = std::min(rf.min_mplus, rf.mplus[i]);
    rf.max_mplus = std::max(rf.max_mplus, rf.mplus[i]);
    rf.min_mminus = std::min(rf.min_mminus, rf.mminus[i]);
    rf.max_mminus = std::max(rf.max_mminus, rf.mminus[i]);
  }
  return rf;
}

}  // namespace nlreg
