#pragma once

// Exact rational verification of the algebraic identities behind the symbol
// calculus: the pair-phase substitution identity and the two equivalent
// factorizations of the triple resonance. These are polynomial identities, so
// rational arithmetic decides them outright; the floating-point versions in
// symbols.hpp are checked against these in the test suite.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "zklab/rng.hpp"

namespace zklab {

using Rational = boost::multiprecision::cpp_rational;

inline Rational phase_exact(const Rational& xi, const Rational& q) {
  return xi * (xi * xi + q * q);
}

inline Rational p_poly_exact(const Rational& xi, const Rational& q,
                             const Rational& x, const Rational& y) {
  return xi * (3 * x * x + y * y) + 2 * q * x * y;
}

// phi(xi1,q1) + phi(xi-xi1,q-q1) - [ p(xi1 - xi/2, q1 - q/2) + (xi/4)(xi^2+q^2) ].
// The parity recentring shift cancels between the two occurrences of the
// second argument, so the defect is h-free and must vanish identically.
inline Rational substitution_defect(const Rational& xi, const Rational& q,
                                    const Rational& xi1, const Rational& q1) {
  const Rational lhs = phase_exact(xi1, q1) + phase_exact(xi - xi1, q - q1);
  const Rational xt = xi1 - xi / 2;
  const Rational yt = q1 - q / 2;
  const Rational rhs = p_poly_exact(xi, q, xt, yt) + xi * (xi * xi + q * q) / 4;
  return lhs - rhs;
}

inline Rational resonance3_exact(const Rational& xi1, const Rational& q1,
                                 const Rational& xi2, const Rational& q2,
                                 const Rational& xi3, const Rational& q3) {
  return phase_exact(xi1 + xi2 + xi3, q1 + q2 + q3) - phase_exact(xi1, q1) -
         phase_exact(xi2, q2) - phase_exact(xi3, q3);
}

inline Rational resonance3_factored_defect(const Rational& xi1, const Rational& q1,
                                           const Rational& xi2, const Rational& q2,
                                           const Rational& xi3, const Rational& q3) {
  const Rational xi0 = xi1 + xi2 + xi3;
  const Rational q0 = q1 + q2 + q3;
  auto a = [](const Rational& xi, const Rational& q) { return 3 * xi * xi + q * q; };
  const Rational a0 = a(xi0, q0);
  const Rational cross = (xi1 + xi2) * (xi1 + xi3) * (xi2 + xi3);
  const Rational fac = -6 * cross + xi1 * (a0 - a(xi1, q1)) +
                       xi2 * (a0 - a(xi2, q2)) + xi3 * (a0 - a(xi3, q3));
  return resonance3_exact(xi1, q1, xi2, q2, xi3, q3) - fac;
}

inline Rational resonance3_rewritten_defect(const Rational& xi1, const Rational& q1,
                                            const Rational& xi2, const Rational& q2,
                                            const Rational& xi3, const Rational& q3) {
  const Rational xi0 = xi1 + xi2 + xi3;
  const Rational q0 = q1 + q2 + q3;
  auto m = [](const Rational& xi, const Rational& q) {
    return xi * (-3 * xi * xi + q * q);
  };
  const Rational cross = (xi1 + xi2) * (xi1 + xi3) * (xi2 + xi3);
  const Rational rew = 12 * cross + m(xi0, q0) - m(xi1, q1) - m(xi2, q2) - m(xi3, q3);
  return resonance3_exact(xi1, q1, xi2, q2, xi3, q3) - rew;
}

struct IdentitySweepResult {
  long long tuples = 0;
  long long failures = 0;
  Rational max_abs_defect = 0;  // stays 0 unless an identity is broken
};

// Random rational sweep over all three identities; every defect must be
// exactly zero. Numerators up to +-1000, denominators up to 40.
inline IdentitySweepResult check_identities(long long tuples, uint64_t seed) {
  Rng rng(derive_seed(seed, "identity-sweep"));
  auto rnd = [&]() {
    const long long num = rng.uniform_int(-1000, 1000);
    const long long den = rng.uniform_int(1, 40);
    return Rational(num, den);
  };
  IdentitySweepResult res;
  auto tally = [&](const Rational& defect) {
    if (defect != 0) {
      ++res.failures;
      if (abs(defect) > res.max_abs_defect) res.max_abs_defect = abs(defect);
    }
  };
  for (long long i = 0; i < tuples; ++i) {
    tally(substitution_defect(rnd(), rnd(), rnd(), rnd()));
    tally(resonance3_factored_defect(rnd(), rnd(), rnd(), rnd(), rnd(), rnd()));
    tally(resonance3_rewritten_defect(rnd(), rnd(), rnd(), rnd(), rnd(), rnd()));
    ++res.tuples;
  }
  return res;
}

inline std::string rational_to_string(const Rational& r) { return r.str(); }

}  // namespace zklab
