#pragma once

// Frequency projectors: smooth Littlewood-Paley shells P_N (in the
// anisotropic magnitude) and modulation shells Q_L (in sigma = tau - phi),
// plus the sharp region projectors used by specific estimates.

#include <functional>
#include <string>

#include "zklab/core.hpp"
#include "zklab/cutoff.hpp"
#include "zklab/symbols.hpp"

namespace zklab {

namespace detail {

// Multiply every (xi, q) column by w(j, b). `even` says the weight is
// invariant under (xi,q) -> (-xi,-q), which preserves conjugate symmetry.
template <typename W>
SpectralField apply_column_weight(const SpectralField& u, W w, bool even) {
  SpectralField out = u;
  const Grid& g = u.grid;
  for (int j = 0; j < g.Nx; ++j)
    for (int b = 0; b < g.Ny; ++b) out.at(j, b) *= w(j, b);
  out.real_field = u.real_field && even;
  return out;
}

template <typename W>
SpaceTimeField apply_column_weight(const SpaceTimeField& u, W w, bool even) {
  SpaceTimeField out = u;
  const Grid& g = u.grid;
  for (int m = 0; m < g.Nt; ++m)
    for (int j = 0; j < g.Nx; ++j)
      for (int b = 0; b < g.Ny; ++b) out.at(m, j, b) *= w(j, b);
  out.real_field = u.real_field && even;
  return out;
}

}  // namespace detail

// Smooth dyadic shell projector P_N.
inline SpectralField apply_PN(const SpectralField& u, long long N) {
  const Grid& g = u.grid;
  return detail::apply_column_weight(
      u,
      [&](int j, int b) {
        return psi_N(g.xi(j), static_cast<double>(g.q(b)), N);
      },
      /*even=*/true);
}

inline SpaceTimeField apply_PN(const SpaceTimeField& u, long long N) {
  const Grid& g = u.grid;
  return detail::apply_column_weight(
      u,
      [&](int j, int b) {
        return psi_N(g.xi(j), static_cast<double>(g.q(b)), N);
      },
      /*even=*/true);
}

// Smooth modulation projector Q_L; multiplier depends on sigma only, which on
// the sheared lattice is the m index itself. Commutes with P_N trivially.
inline SpaceTimeField apply_QL(const SpaceTimeField& u, long long L) {
  SpaceTimeField out = u;
  const Grid& g = u.grid;
  for (int m = 0; m < g.Nt; ++m) {
    const double w = eta_L(g.sigma(m), L);
    for (int j = 0; j < g.Nx; ++j)
      for (int b = 0; b < g.Ny; ++b) out.at(m, j, b) *= w;
  }
  return out;
}

// Sharp projector onto {|3 xi^2 - q^2| >= kappa |xi|^alpha, |xi| >= kappa2}.
inline SpectralField apply_P_alpha(const SpectralField& u, double alpha,
                                   double kappa, double kappa2) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ContractViolation("apply_P_alpha: alpha must lie in [0,1]");
  if (!(kappa > 0.0) || !(kappa2 > 0.0))
    throw ContractViolation("apply_P_alpha: constants must be positive");
  const Grid& g = u.grid;
  return detail::apply_column_weight(
      u,
      [&](int j, int b) {
        const double xi = g.xi(j);
        const double q = static_cast<double>(g.q(b));
        const bool keep = std::fabs(3.0 * xi * xi - q * q) >=
                              kappa * std::pow(std::fabs(xi), alpha) &&
                          std::fabs(xi) >= kappa2;
        return keep ? 1.0 : 0.0;
      },
      /*even=*/true);
}

// P_alpha as a predicate, shared with the product-estimate machinery.
inline bool p_alpha_keeps(double xi, double q, double alpha, double kappa,
                          double kappa2) {
  return std::fabs(3.0 * xi * xi - q * q) >= kappa * std::pow(std::fabs(xi), alpha) &&
         std::fabs(xi) >= kappa2;
}

// Sharp y-frequency cap |q| <= kappa * N^beta.
inline SpectralField apply_QN_beta(const SpectralField& u, long long N,
                                   double beta, double kappa) {
  if (!(kappa > 0.0)) throw ContractViolation("apply_QN_beta: kappa must be positive");
  const Grid& g = u.grid;
  const double cap = kappa * std::pow(static_cast<double>(N), beta);
  return detail::apply_column_weight(
      u,
      [&](int, int b) { return std::fabs(static_cast<double>(g.q(b))) <= cap ? 1.0 : 0.0; },
      /*even=*/true);
}

// ---------------------------------------------------------------------------
// Region projectors (closed vocabulary + custom escape hatch)
// ---------------------------------------------------------------------------

struct RegionDescriptor {
  enum class Kind { XiVsQPower, HyperbolaGap, HalfSpace, CustomIndicator };

  Kind kind = Kind::HyperbolaGap;
  double theta = 2.0 / 3.0;  // XiVsQPower: keep |xi| <= |q|^theta
  double threshold = 1.0;    // HyperbolaGap: keep |3 xi^2 - q^2| > threshold
  int sign = +1;             // HalfSpace: keep sign * xi > 0
  bool complement = false;
  std::function<bool(double, int)> custom_pred;  // CustomIndicator predicate

  static RegionDescriptor xi_vs_q_power(double th, bool compl_ = false) {
    RegionDescriptor d;
    d.kind = Kind::XiVsQPower;
    d.theta = th;
    d.complement = compl_;
    return d;
  }
  static RegionDescriptor hyperbola_gap(double thr, bool compl_ = false) {
    RegionDescriptor d;
    d.kind = Kind::HyperbolaGap;
    d.threshold = thr;
    d.complement = compl_;
    return d;
  }
  static RegionDescriptor half_space(int s, bool compl_ = false) {
    RegionDescriptor d;
    d.kind = Kind::HalfSpace;
    d.sign = s;
    d.complement = compl_;
    return d;
  }
  static RegionDescriptor custom(std::function<bool(double, int)> pred,
                                 bool compl_ = false) {
    RegionDescriptor d;
    d.kind = Kind::CustomIndicator;
    d.custom_pred = std::move(pred);
    d.complement = compl_;
    return d;
  }

  bool keeps(double xi, int q) const {
    bool in;
    switch (kind) {
      case Kind::XiVsQPower:
        in = std::fabs(xi) <= std::pow(std::fabs(static_cast<double>(q)), theta);
        break;
      case Kind::HyperbolaGap:
        in = std::fabs(3.0 * xi * xi - static_cast<double>(q) * q) > threshold;
        break;
      case Kind::HalfSpace:
        in = sign > 0 ? xi > 0.0 : xi < 0.0;
        break;
      case Kind::CustomIndicator:
        if (!custom_pred)
          throw ContractViolation("region_projector: empty custom predicate");
        in = custom_pred(xi, q);
        break;
      default:
        throw ContractViolation("region_projector: unknown descriptor");
    }
    return complement ? !in : in;
  }

  // Whether the kept set is symmetric under (xi,q) -> (-xi,-q).
  bool even_region() const {
    switch (kind) {
      case Kind::XiVsQPower:
      case Kind::HyperbolaGap:
        return true;
      default:
        return false;
    }
  }
};

inline SpectralField region_projector(const SpectralField& u,
                                      const RegionDescriptor& d) {
  const Grid& g = u.grid;
  return detail::apply_column_weight(
      u, [&](int j, int b) { return d.keeps(g.xi(j), g.q(b)) ? 1.0 : 0.0; },
      d.even_region());
}

inline SpaceTimeField region_projector(const SpaceTimeField& u,
                                       const RegionDescriptor& d) {
  const Grid& g = u.grid;
  return detail::apply_column_weight(
      u, [&](int j, int b) { return d.keeps(g.xi(j), g.q(b)) ? 1.0 : 0.0; },
      d.even_region());
}

}  // namespace zklab
