#pragma once

#include <functional>
#include <vector>

#include "nlreg/grid_function.hpp"
#include "nlreg/kernel.hpp"
#include "nlreg/parallel.hpp"
#include "nlreg/quadrature.hpp"

namespace nlreg {

struct SolverGrid {
  Box box;
  double h = 0.0;
  std::array<int, 2> n{0, 1};
  int dim = 1;

  int node_count() const { return n[0] * n[1]; }
  Point node(int ix, int iy = 0) const {
    return {box.lo[0] + ix * h, dim > 1 ? box.lo[1] + iy * h : 0.0};
  }
  Point node_flat(int idx) const { return node(idx % n[0], idx / n[0]); }
};

SolverGrid make_grid(const Box& box, double h);

enum class DomainKind { ball, box };

enum class EquationKind { linear, bellman, isaacs };

struct EquationSpec {
  EquationKind kind = EquationKind::linear;
  std::vector<KernelSpec> kernels;    // linear: exactly one; bellman: the family
  std::vector<KernelSpec> kernels_b;  // isaacs: the second family
  int sign = +1;                      // bellman: +1 argmax (sup), -1 argmin (inf)
};

struct ProblemSpec {
  DomainKind domain = DomainKind::box;
  Point center{0.0, 0.0};   // ball domain
  double radius = 1.0;      // ball domain
  Box box;                  // box domain, or the ball's bounding box
  double h = 0.1;
  std::function<double(const Point&)> exterior_data;
  EquationSpec equation;
  double tolerance = 1e-8;
  int max_iterations = 60;
  std::vector<int> initial_policy;  // per-node warm start (empty = zeros)
};

// Monotone quadrature stencil of one kernel on a grid: translation-invariant
// offset weights (cell integrals of J over the lattice window), the own-cell
// second-moment shell coefficient, per-node far-field mass/load beyond the
// window, and compensator coefficients for multiplier kernels. Off-diagonal
// weights are nonnegative by construction.
struct Stencil {
  SolverGrid grid;
  KernelSpec kernel;
  double r0 = 0.0;
  bool compensated = false;
  bool has_multiplier = false;
  std::vector<double> wbar;  // |offset| weight table, (lwin+1) x (lwin+1 or 1)
  std::array<int, 2> wbar_extent{0, 0};
  double shell_coeff = 0.0;  // per-axis neighbor coupling from the own cell
  std::vector<double> far_mass;  // per node: int_{outside window} K(x_i, y) dy
  std::vector<double> far_load;  // per node: int_{outside window} g(y) K(x_i, y) dy
  std::vector<Point> comp_vec;   // per node compensator vector (multiplier case)
  std::function<double(const Point&)> exterior_data;

  double weight_abs(int adx, int ady) const { return wbar[adx + wbar_extent[0] * ady]; }

  // Applies the discrete operator to grid values at an interior node.
  // Known (Dirichlet) node values must already sit in `values`.
  double apply_row(int node_idx, const std::vector<double>& values) const;
};

// Assembles the stencil; exterior integrals use the given Dirichlet data.
// Requires h < r0/4; throws otherwise, and when monotonicity would fail.
Stencil build_stencil(const KernelSpec& k, const SolverGrid& grid,
                      const std::function<double(const Point&)>& exterior_data,
                      const QuadratureConfig& cfg = {}, Exec mode = Exec::parallel);

struct SolveResult {
  GridFunction u;
  double residual_inf = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
  std::vector<int> policy;  // final per-node policy (bellman/isaacs)
};

SolveResult solve_dirichlet(const ProblemSpec& p, const QuadratureConfig& cfg = {},
                            Exec mode = Exec::parallel);

// Policy iteration for bellman/isaacs equations over finite kernel families;
// also accepts linear problems (degenerate one-kernel family).
SolveResult solve_bellman(const ProblemSpec& p, const QuadratureConfig& cfg = {},
                          Exec mode = Exec::parallel);

struct ResidualField {
  std::vector<double> mplus;   // per node; NaN outside the domain
  std::vector<double> mminus;
  std::vector<uint8_t> interior;
  double min_mplus = 0.0;
  double max_mplus = 0.0;
  double min_mminus = 0.0;
  double max_mminus = 0.0;
};

// Discrete extremal operators M^+_h u, M^-_h u at the interior nodes:
// per-entry bang-bang selection over [lambda J, Lambda J] on the compensated
// difference signs (pairwise second-difference selection for the symmetric
// class), plus the sign-split exterior integral.
ResidualField residual(const ExtremalClass& cls, const GridFunction& u,
                       const QuadratureConfig& cfg = {}, Exec mode = Exec::parallel);

}  // namespace nlreg
