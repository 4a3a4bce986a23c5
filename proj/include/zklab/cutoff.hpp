#pragma once

// The smooth bump mu and derived cutoffs. mu is the standard exp(-1/t)
// smoothed step, even, equal to 1 on [-5/4, 5/4] and 0 outside [-8/5, 8/5],
// nonincreasing in |x|. psi(x) = mu(x) - mu(2x) gives the dyadic partition
//   mu(x) + sum_{n>=1} psi(2^{-n} x) -> 1   (telescoping),
// with supp psi in {5/8 <= |x| <= 8/5} and psi = 1 on {4/5 <= |x| <= 5/4}.

#include <cmath>
#include <vector>

#include "zklab/core.hpp"
#include "zklab/symbols.hpp"

namespace zklab {

namespace detail {

// C-infinity step: 0 for t <= 0, 1 for t >= 1, strictly increasing between.
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace detail

// Smooth even bump: 1 on [-5/4,5/4], 0 outside [-8/5,8/5].
inline double mu(double x) {
  const double ax = std::fabs(x);
  if (ax <= 1.25) return 1.0;
  if (ax >= 1.6) return 0.0;
  return detail::smooth_step((1.6 - ax) / 0.35);
}

inline double psi(double x) { return mu(x) - mu(2.0 * x); }

// Shell profile at dyadic scale N in the anisotropic magnitude. N = 1 is the
// base piece mu(|.|) so the family telescopes to 1.
inline double psi_N(double xi, double q, long long N) {
  const double r = dilated_norm(xi, q);
  if (N == 1) return mu(r);
  return psi(r / static_cast<double>(N));
}

// Modulation profile at dyadic scale L, applied to sigma = tau - phi(xi,q).
inline double eta_L(double sigma, long long L) {
  if (L == 1) return mu(sigma);
  return psi(sigma / static_cast<double>(L));
}

// Canonical time cutoff: 1 on [-delta, delta], 0 outside [-2 delta, 2 delta],
// smooth in between. Used for all "time-localized" hypotheses.
inline double time_cutoff(double t, double delta) {
  const double at = std::fabs(t);
  if (at <= delta) return 1.0;
  if (at >= 2.0 * delta) return 0.0;
  return detail::smooth_step((2.0 * delta - at) / delta);
}

// Dyadic shells N = 1, 2, 4, ... needed to cover a grid: the last shell's
// plateau must reach past the largest anisotropic magnitude the grid holds,
// so that the truncated partition sums to 1 on every lattice point.
inline std::vector<long long> dyadic_shells(const Grid& g) {
  const double xmax =
      dilated_norm(g.xi_max(), static_cast<double>(g.q_max()));
  std::vector<long long> shells{1};
  while (static_cast<double>(shells.back()) < xmax) shells.push_back(shells.back() * 2);
  shells.push_back(shells.back() * 2);  // margin shell, identically covering
  return shells;
}

// Same for modulation scales over the sigma window.
inline std::vector<long long> dyadic_modulations(const Grid& g) {
  const double smax = g.sigma_max();
  std::vector<long long> shells{1};
  while (static_cast<double>(shells.back()) < smax) shells.push_back(shells.back() * 2);
  shells.push_back(shells.back() * 2);
  return shells;
}

}  // namespace zklab
