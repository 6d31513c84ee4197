#include <doctest.h>

#include "nlreg/lemmas.hpp"
#include "nlreg/probe.hpp"
#include "nlreg/solver.hpp"

using namespace nlreg;

// The OpenMP kernels assign results by index, so the serial reference path
// must agree bitwise, not just within tolerance.

namespace {
const QuadratureConfig kQuad{1e-11, 1e-9, {}, 4000};
}

TEST_CASE("stencil assembly: serial reference equals the parallel kernel") {
  const auto k = make_kernel(1, make_power_scaling(0.7));
  const auto grid = make_grid({{-1.0, 0.0}, {1.0, 0.0}, 1}, 0.05);
  const auto g = [](const Point& p) { return std::sin(p[0]); };
  const auto a = build_stencil(k, grid, g, kQuad, Exec::serial);
  const auto b = build_stencil(k, grid, g, kQuad, Exec::parallel);
  CHECK(a.wbar == b.wbar);
  CHECK(a.far_mass == b.far_mass);
  CHECK(a.far_load == b.far_load);
  CHECK(a.shell_coeff == b.shell_coeff);
}

TEST_CASE("residual field: serial reference equals the parallel kernel") {
  const auto k = make_kernel(1, make_power_scaling(0.5));
  const auto cls = make_class(1.0, 2.0, true, k);
  const auto bump = BumpFunction{{0.0, 0.0}, 0.6}.as_smooth(1);
  Box box;
  box.dim = 1;
  box.lo = {-1.0, 0.0};
  box.hi = {1.0, 0.0};
  const auto u = sample_to_grid(bump, box, 0.05);
  const auto ra = residual(cls, u, kQuad, Exec::serial);
  const auto rb = residual(cls, u, kQuad, Exec::parallel);
  for (std::size_t i = 0; i < ra.mplus.size(); ++i) {
    if (!ra.interior[i]) continue;
    CHECK(ra.mplus[i] == rb.mplus[i]);
    CHECK(ra.mminus[i] == rb.mminus[i]);
  }
}

TEST_CASE("lemma sweeps: serial and parallel reports are identical") {
  const auto k = make_kernel(1, make_power_scaling(0.5));
  const auto radii = log_spaced(1e-2, 0.9, 8);
  const Point bases[] = {{0.0, 0.0}};
  const auto ra = verify_lemma_integrals(k.scaling, k, radii, bases, kQuad, Exec::serial);
  const auto rb = verify_lemma_integrals(k.scaling, k, radii, bases, kQuad, Exec::parallel);
  REQUIRE(ra.records.size() == rb.records.size());
  for (std::size_t i = 0; i < ra.records.size(); ++i) {
    CHECK(ra.records[i].lhs == rb.records[i].lhs);
    CHECK(ra.records[i].margin == rb.records[i].margin);
  }
}

TEST_CASE("seminorm scan: serial and parallel maxima are identical") {
  SmoothFunction f;
  f.value = [](const Point& p) { return std::sin(5.0 * p[0]); };
  Box box;
  box.dim = 1;
  box.lo = {-1.0, 0.0};
  box.hi = {1.0, 0.0};
  const auto u = sample_to_grid(f, box, 1.0 / 256.0);
  const auto a = holder_seminorm_report(u, {0.0, 0.0}, 1.0, 0.5, 1.0, 100000, Exec::serial);
  const auto b = holder_seminorm_report(u, {0.0, 0.0}, 1.0, 0.5, 1.0, 100000, Exec::parallel);
  CHECK(a.seminorm == b.seminorm);
  CHECK(a.pairs_used == b.pairs_used);
}
