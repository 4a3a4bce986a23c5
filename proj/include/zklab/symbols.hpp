#pragma once

// Symbol algebra for the dispersion relation phi(xi,q) = xi*(xi^2 + q^2):
// anisotropic magnitude, Japanese brackets, the quadratic form p entering the
// level-set geometry, and the resonance functions of pair/triple interactions.

#include <cmath>

#include "zklab/core.hpp"

namespace zklab {

// Dispersion relation of e^{-t dx Delta}.
inline double phase(double xi, double q) { return xi * (xi * xi + q * q); }
inline double phase(const FrequencyPoint& p) { return phase(p.xi, p.q); }

// Anisotropic magnitude |(xi,q)| = sqrt(3 xi^2 + q^2); the natural scale of
// the problem (gradient of phi in xi is 3 xi^2 + q^2). Dyadic shells are cut
// with respect to this magnitude.
inline double dilated_norm(double xi, double q) {
  return std::sqrt(3.0 * xi * xi + q * q);
}
inline double dilated_norm(const FrequencyPoint& p) { return dilated_norm(p.xi, p.q); }

// Japanese brackets use the Euclidean magnitude.
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }
inline double bracket(double xi, double q) {
  return std::sqrt(1.0 + xi * xi + q * q);
}
inline double bracket(const FrequencyPoint& p) { return bracket(p.xi, p.q); }

// Half-integer shift that recenters the torus frequency: 0 for even q,
// 1/2 for odd q.
inline double h_parity(long long q) { return (q % 2 == 0) ? 0.0 : 0.5; }

// Quadratic form p(x,y) = xi*(3x^2 + y^2) + 2*q*x*y attached to the base
// point (xi, q). Level sets of p in (x,y) drive the slice measure bounds.
inline double p_poly(double xi, double q, double x, double y) {
  return xi * (3.0 * x * x + y * y) + 2.0 * q * x * y;
}

// phi(xi1,q1) + phi(xi-xi1, q-q1): the pair phase at fixed output (xi,q).
inline double phase_pair_sum(double xi, double q, double xi1, double q1) {
  return phase(xi1, q1) + phase(xi - xi1, q - q1);
}

// Pair resonance R2 = phi(p) - phi(p1) - phi(p-p1).
inline double resonance2(const FrequencyPoint& p, const FrequencyPoint& p1) {
  return phase(p) - phase(p1) - phase(p.xi - p1.xi, static_cast<double>(p.q - p1.q));
}

// Triple resonance R3 = phi(p1+p2+p3) - phi(p1) - phi(p2) - phi(p3),
// evaluated directly from the definition.
inline double resonance3(const FrequencyPoint& p1, const FrequencyPoint& p2,
                         const FrequencyPoint& p3) {
  double xi0 = p1.xi + p2.xi + p3.xi;
  double q0 = static_cast<double>(p1.q) + p2.q + p3.q;
  return phase(xi0, q0) - phase(p1) - phase(p2) - phase(p3);
}

// Factorized form of the triple resonance:
//   R3 = -6 (xi1+xi2)(xi1+xi3)(xi2+xi3)
//        + sum_i xi_i * (|(xi0,q0)|^2 - |(xi_i,q_i)|^2)
// with |.| the anisotropic magnitude and (xi0,q0) the output frequency.
inline double resonance3_factored(const FrequencyPoint& p1, const FrequencyPoint& p2,
                                  const FrequencyPoint& p3) {
  double xi0 = p1.xi + p2.xi + p3.xi;
  double q0 = static_cast<double>(p1.q) + p2.q + p3.q;
  double a0 = 3.0 * xi0 * xi0 + q0 * q0;
  auto a = [](const FrequencyPoint& p) {
    double qd = static_cast<double>(p.q);
    return 3.0 * p.xi * p.xi + qd * qd;
  };
  double cross = (p1.xi + p2.xi) * (p1.xi + p3.xi) * (p2.xi + p3.xi);
  return -6.0 * cross + p1.xi * (a0 - a(p1)) + p2.xi * (a0 - a(p2)) +
         p3.xi * (a0 - a(p3));
}

// Equivalent rewriting with the sign of the anisotropic form flipped:
//   R3 = 12 (xi1+xi2)(xi1+xi3)(xi2+xi3)
//        + xi0*(-3 xi0^2 + q0^2) - sum_i xi_i*(-3 xi_i^2 + q_i^2).
inline double resonance3_rewritten(const FrequencyPoint& p1, const FrequencyPoint& p2,
                                   const FrequencyPoint& p3) {
  double xi0 = p1.xi + p2.xi + p3.xi;
  double q0 = static_cast<double>(p1.q) + p2.q + p3.q;
  auto m = [](double xi, double q) { return xi * (-3.0 * xi * xi + q * q); };
  double cross = (p1.xi + p2.xi) * (p1.xi + p3.xi) * (p2.xi + p3.xi);
  return 12.0 * cross + m(xi0, q0) - m(p1.xi, p1.q) - m(p2.xi, p2.q) -
         m(p3.xi, p3.q);
}

// Pair-phase decomposition at output (xi,q), q integer: with
// xt = xi1 - xi/2 and yt = q1 - q/2 (recentring, with the parity shift
// folded through), phi(xi1,q1) + phi(xi-xi1,q-q1) =
// p_poly(xi,q; xt, yt) + (xi/4)*(xi^2+q^2). The parity shift h(q) makes the
// recentered torus variable integer-valued: yt = (q1 - q/2 - h) + h.
inline double phase_pair_decomposed(double xi, long long q, double xi1, long long q1) {
  double h = h_parity(q);
  double xt = xi1 - 0.5 * xi;
  double yt_shifted = (static_cast<double>(q1) - 0.5 * static_cast<double>(q) - h) + h;
  return p_poly(xi, static_cast<double>(q), xt, yt_shifted) +
         0.25 * xi * (xi * xi + static_cast<double>(q) * static_cast<double>(q));
}

}  // namespace zklab
