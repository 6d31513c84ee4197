#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nlreg/kernel.hpp"
#include "oracle_quadrature.hpp"

using namespace nlreg;

namespace {
KernelSpec power_kernel_1d(double alpha, TailModel tail = {}) {
  return make_kernel(1, make_power_scaling(alpha), tail);
}
}  // namespace

TEST_CASE("near-diagonal evaluation is the displayed formula") {
  const auto k = power_kernel_1d(0.7);
  const double s = 0.37;
  CHECK(k.eval({0.0, 0.0}, {s, 0.0}) == doctest::Approx(std::pow(s, -1.7)).epsilon(1e-14));
  CHECK_THROWS_AS(k.eval({0.1, 0.0}, {0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("truncated tail vanishes beyond its radius") {
  TailModel tail;
  tail.kind = TailKind::truncate;
  tail.r_inf = 2.0;
  const auto k = power_kernel_1d(0.5, tail);
  CHECK(k.eval({0.0, 0.0}, {2.5, 0.0}) == 0.0);
  CHECK(k.eval({0.0, 0.0}, {1.5, 0.0}) > 0.0);
}

TEST_CASE("log-perturbed kernel is comparable to the log-corrected power law") {
  const auto k = make_kernel(1, make_log_perturbed_scaling(1.0, 1.0));
  for (double s : {1e-6, 1e-4, 1e-2, 0.2}) {
    const double ratio = k.radial(s) * std::pow(s, 2.0) / std::log(1.0 / s);
    CHECK(ratio >= 1.0);   // ln(1+1/s) >= ln(1/s)
    CHECK(ratio <= 2.0);   // and within a constant for s < r0 ^ 1/e
  }
}

TEST_CASE("tail mass: closed form, truncation, and damping oracle") {
  // pure power continuation: omega_1 * int_{1}^inf s^{-1-a} ds = 2/a
  for (double alpha : {0.5, 1.5}) {
    const auto k = power_kernel_1d(alpha);
    CHECK(k.m0 == doctest::Approx(2.0 / alpha).epsilon(1e-9));
  }

  TailModel cut;
  cut.kind = TailKind::truncate;
  cut.r_inf = 1.0;  // = r0: empty tail region
  CHECK(power_kernel_1d(0.5, cut).m0 == 0.0);

  TailModel damp;
  damp.kind = TailKind::exponential_damping;
  damp.rate = 2.0;
  const auto k = power_kernel_1d(0.5, damp);
  const double expected = oracle::integrate_to_inf(
      [](double s) { return 2.0 * std::pow(s, -1.5) * std::exp(-2.0 * (s - 1.0)); }, 1.0);
  CHECK(k.m0 == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("tail mass is radial: independent of the base point") {
  const auto k = power_kernel_1d(0.8);
  CHECK(tail_mass(k, {0.0, 0.0}) == doctest::Approx(tail_mass(k, {3.7, 0.0})).epsilon(1e-12));
}

TEST_CASE("radial symmetry without a multiplier") {
  const auto k = make_kernel(2, make_power_scaling(1.2));
  const double a = k.eval({0.0, 0.0}, {0.3, 0.4});
  const double b = k.eval({1.0, 1.0}, {1.5, 1.0});  // same distance 0.5
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("continuity report across r0") {
  CHECK(power_kernel_1d(0.5).jump_at_r0() == 0.0);  // formula continuation

  TailModel cut;
  cut.kind = TailKind::truncate;
  cut.r_inf = 1.0;
  const auto k = power_kernel_1d(0.5, cut);
  CHECK(k.jump_at_r0() == doctest::Approx(1.0).epsilon(1e-14));  // f(1)/1 = 1

  const auto rep = validate_kernel(k);
  CHECK(rep.tail_finite);
  CHECK(rep.scaling.pass);
  CHECK(rep.jump_at_r0 == doctest::Approx(1.0));
}

TEST_CASE("divergent tails are rejected") {
  TailModel bad;
  bad.kind = TailKind::power_continuation;
  bad.decay_override = -0.1;  // total exponent <= d
  CHECK_THROWS_AS(make_kernel(1, make_power_scaling(0.5), bad), std::invalid_argument);

  TailModel zero_rate;
  zero_rate.kind = TailKind::exponential_damping;
  zero_rate.rate = 0.0;
  CHECK_THROWS_AS(make_kernel(1, make_power_scaling(0.5), zero_rate), std::invalid_argument);

  TailModel low_cut;
  low_cut.kind = TailKind::truncate;
  low_cut.r_inf = 0.5;  // below r0
  CHECK_THROWS_AS(make_kernel(1, make_power_scaling(0.5), low_cut), std::invalid_argument);
}

TEST_CASE("multiplier builds an admissible inhomogeneous kernel") {
  auto k = make_kernel(1, make_power_scaling(0.5), {}, sine_multiplier(1.0, 2.0));
  const Point x{0.3, 0.0}, y{0.8, 0.0};
  const double j = k.radial(0.5);
  const double v = k.eval(x, y);
  CHECK(v >= 1.0 * j);
  CHECK(v <= 2.0 * j);

  const auto scaled = scale_kernel(k, 1.5);
  CHECK(scaled.eval(x, y) == doctest::Approx(1.5 * j).epsilon(1e-14));
}
