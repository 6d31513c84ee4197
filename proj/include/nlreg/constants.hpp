#pragma once

#include "nlreg/kernel.hpp"

namespace nlreg {

// beta(t) = (1-t^2)_+^2 evaluated at the two probe radii; the gap
// beta(1/2) - beta(3/4) = 95/256 enters the oscillation gain.
inline double bump_gap() { return 9.0 / 16.0 - 49.0 / 256.0; }

// Closed-form constants of the quantitative lemmas:
//   C1 = omega_d (a2/(2-delta2) + 1/(a1 delta1)) + M0/f(1/r0)
//   C2 = bump bound constant (case-dependent, see below)
//   C3 = omega_d lambda / (2^{d+3+delta2} a2 d)
//   theta = min( C3/(8 C2), (1-2^{-eta1}) / (2 (beta(1/2)-beta(3/4))) ), capped < 1/4
//   gamma = theta (beta(1/2) - beta(3/4)),   gamma in (0, 1-2^{-eta1})
//   alpha = -log2(1-gamma),                  alpha < eta1
struct LemmaConstants {
  double c1 = 0.0;
  double c2 = 0.0;          // certification constant (combined form)
  double c2_active = 0.0;   // tighter case-active variant, reported alongside
  double c3 = 0.0;
  double omega_d = 0.0;
  double theta = 0.0;
  double gamma = 0.0;
  double eta1 = 0.0;
  double r1 = 0.0;
  double alpha = 0.0;
  bool theta_capped = false;  // true when the 1/4 cap binds
};

// eta1 and r1 are caller-supplied (typically from find_eta_r at the epsilon
// below). Throws on the case mismatch delta1 <= 1 <= delta2 with a
// non-symmetric class, and on eta1/r1 out of range.
LemmaConstants compute_constants(const ExtremalClass& cls, double eta1, double r1);

// The individual constants, independent of eta1/r1.
double lemma_c1(const KernelSpec& k);
struct BumpBoundConstants {
  double c2 = 0.0;         // certification constant
  double c2_active = 0.0;  // case-active variant
};
BumpBoundConstants lemma_c2(const ExtremalClass& cls);
double lemma_c3(const ExtremalClass& cls);

// The epsilon the oscillation theorem feeds to the growth lemma:
// omega_d lambda / (Lambda 2^{d+5+delta2} a2 d)  (= C3 / (4 Lambda)).
double theorem_epsilon(const ExtremalClass& cls);

}  // namespace nlreg
