#include "nlreg/bernstein.hpp"

#include <cmath>
#include <stdexcept>

namespace nlreg {

double BernsteinSpec::phi(double lam) const {
  if (lam < 0.0) throw std::invalid_argument("phi: negative argument");
  double v = drift * lam;
  switch (family) {
    case BernsteinFamily::stable:
      v += std::pow(lam, alpha / 2.0);
      break;
    case BernsteinFamily::relativistic: {
      const double shift = std::pow(m, 2.0 / alpha);
      v += std::pow(lam + shift, alpha / 2.0) - m;
      break;
    }
    case BernsteinFamily::mixed:
      v += std::pow(lam, alpha / 2.0) + std::pow(lam, beta / 2.0);
      break;
    case BernsteinFamily::log_perturbed:
      v += std::pow(lam, alpha / 2.0) * std::pow(std::log1p(lam), p);
      break;
  }
  return v;
}

bool BernsteinSpec::has_levy_measure_density() const {
  return family != BernsteinFamily::log_perturbed;
}

namespace {

// Density of the alpha/2-stable subordinator: (alpha/2)/Gamma(1-alpha/2) t^{-1-alpha/2}.
double stable_subordinator_density(double alpha, double t) {
  const double half = alpha / 2.0;
  return half / std::tgamma(1.0 - half) * std::pow(t, -1.0 - half);
}

}  // namespace

double BernsteinSpec::levy_measure_density(double t) const {
  if (t <= 0.0) throw std::invalid_argument("levy_measure_density: t must be positive");
  switch (family) {
    case BernsteinFamily::stable:
      return stable_subordinator_density(alpha, t);
    case BernsteinFamily::relativistic:
      return stable_subordinator_density(alpha, t) * std::exp(-std::pow(m, 2.0 / alpha) * t);
    case BernsteinFamily::mixed:
      return stable_subordinator_density(alpha, t) + stable_subordinator_density(beta, t);
    case BernsteinFamily::log_perturbed:
      throw std::runtime_error("levy_measure_density: no explicit density for log_perturbed");
  }
  throw std::logic_error("unreachable");
}

double BernsteinSpec::default_r0() const {
  if (family == BernsteinFamily::relativistic) return std::pow(m, -1.0 / alpha);
  return 1.0;
}

std::string BernsteinSpec::family_name() const {
  switch (family) {
    case BernsteinFamily::stable: return "stable";
    case BernsteinFamily::relativistic: return "relativistic";
    case BernsteinFamily::mixed: return "mixed";
    case BernsteinFamily::log_perturbed: return "log_perturbed";
  }
  return "?";
}

namespace {
void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("Bernstein family: alpha must lie in (0,2)");
}
}  // namespace

BernsteinSpec make_stable(double alpha) {
  check_alpha(alpha);
  BernsteinSpec b;
  b.family = BernsteinFamily::stable;
  b.alpha = alpha;
  return b;
}

BernsteinSpec make_relativistic(double alpha, double m) {
  check_alpha(alpha);
  if (m <= 0.0) throw std::invalid_argument("relativistic: m must be positive");
  BernsteinSpec b;
  b.family = BernsteinFamily::relativistic;
  b.alpha = alpha;
  b.m = m;
  return b;
}

BernsteinSpec make_mixed_bernstein(double alpha, double beta) {
  check_alpha(alpha);
  if (!(beta > 0.0 && beta < alpha))
    throw std::invalid_argument("mixed: need 0 < beta < alpha");
  BernsteinSpec b;
  b.family = BernsteinFamily::mixed;
  b.alpha = alpha;
  b.beta = beta;
  return b;
}

BernsteinSpec make_log_perturbed_bernstein(double alpha, double p) {
  check_alpha(alpha);
  if (p < -alpha / 2.0 || p > (2.0 - alpha) / 2.0)
    throw std::invalid_argument("log_perturbed: p outside [-alpha/2, (2-alpha)/2]");
  BernsteinSpec b;
  b.family = BernsteinFamily::log_perturbed;
  b.alpha = alpha;
  b.p = p;
  return b;
}

}  // namespace nlreg
