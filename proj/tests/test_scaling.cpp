#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nlreg/scaling.hpp"

using namespace nlreg;

TEST_CASE("power profile evaluates and certifies exactly") {
  const auto f = make_power_scaling(1.5);
  CHECK(f(4.0) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(f(0.0) == 0.0);

  const auto rep = check_weak_scaling(f);
  CHECK(rep.pass);
  // pure power: the sandwich is an identity, margins vanish to rounding
  CHECK(std::abs(rep.worst_lower_margin) < 1e-12);
  CHECK(std::abs(rep.worst_upper_margin) < 1e-12);
}

TEST_CASE("log-perturbed profile: identity value and shipped certificate") {
  const auto f = make_log_perturbed_scaling(1.0, 1.0);
  const double t = std::exp(1.0) - 1.0;
  CHECK(f(t) == doctest::Approx(t).epsilon(1e-14));  // ln(1+t) = 1 there

  CHECK(check_weak_scaling(f).pass);
  // the certificate is not tuned to the default grid; a denser, wider grid
  // must also pass
  const auto s = log_spaced(1.0, 1e4, 57);
  const auto tg = log_spaced(1.0, 1e4, 57);
  CHECK(check_weak_scaling(f, s, tg).pass);
}

TEST_CASE("mixed profile passes with the exact exponent pair") {
  const auto f = make_mixed_scaling(1.5, 0.5);
  CHECK(f.delta1 == 0.5);
  CHECK(f.delta2 == 1.5);
  const auto rep = check_weak_scaling(f);
  CHECK(rep.pass);
  CHECK(rep.worst_lower_margin >= -1e-13);

  // dense-grid oracle for the analytic sandwich s^0.5 <= ratio <= s^1.5
  const auto s = log_spaced(1.0, 300.0, 41);
  const auto t = log_spaced(1.0, 300.0, 41);
  for (double sv : s)
    for (double tv : t) {
      const double ratio = f(sv * tv) / f(tv);
      CHECK(ratio >= std::pow(sv, 0.5) * (1.0 - 1e-12));
      CHECK(ratio <= std::pow(sv, 1.5) * (1.0 + 1e-12));
    }
}

TEST_CASE("declared certificate can fail: power alpha=1 with delta2=1/2") {
  auto f = make_power_scaling(1.0);
  f.delta2 = 0.5;  // wrong upper exponent
  const auto rep = check_weak_scaling(f);
  CHECK(!rep.pass);
  CHECK(rep.worst_upper_margin < 0.0);
  CHECK(rep.worst_s > 1.0);
  // the specific pair (s=2, t=1/r0) already violates: 2 > 2^0.5
  const double ratio = f(2.0 * 1.0) / f(1.0);
  CHECK(ratio > std::pow(2.0, 0.5));
}

TEST_CASE("profiles are non-decreasing with f(0) at the bottom") {
  for (const auto& f :
       {make_power_scaling(0.5), make_power_scaling(1.5), make_log_perturbed_scaling(1.0, 1.0),
        make_mixed_scaling(1.5, 0.5)}) {
    CHECK(is_nondecreasing_on_samples(f));
    CHECK(f(0.0) <= f(1e-6));
    CHECK(f(0.0) <= f(10.0));
  }
}

TEST_CASE("bernstein-induced profile fits its own certificate") {
  const auto f = make_bernstein_scaling(make_stable(1.0));
  CHECK(f.delta1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f.delta2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(check_weak_scaling(f).pass);

  const auto g = make_bernstein_scaling(make_relativistic(1.0, 1.0));
  CHECK(g.delta1 > 0.0);
  CHECK(g.delta2 < 2.0);
  CHECK(check_weak_scaling(g).pass);
}

TEST_CASE("certificate validation rejects structural nonsense") {
  auto f = make_power_scaling(0.5);
  f.delta1 = 1.2;  // above delta2
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f = make_power_scaling(0.5);
  f.a1 = -1.0;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_power_scaling(2.5), std::invalid_argument);
}

TEST_CASE("fitted certificate for an exact power is the exponent itself") {
  const auto s = default_s_grid();
  const auto t = default_t_grid(1.0);
  const auto fit = fit_scaling_certificate([](double x) { return std::pow(x, 0.7); }, s, t);
  CHECK(fit.ok);
  CHECK(fit.delta1 == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(fit.delta2 == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(fit.a1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.a2 == doctest::Approx(1.0).epsilon(1e-9));
}
