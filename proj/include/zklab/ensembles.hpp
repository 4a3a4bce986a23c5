#pragma once

// Random band-limited test ensembles.
//
// Fields are finite sums of wave packets a * theta(t) e^{i((phi+sigma_c)t + xi x + q y)}
// placed on a resonance-exact lattice, so each sample is *exactly* time-localized
// by the canonical cutoff and its space-time transform is known in closed form
// (CutoffKernel envelopes).  Cells are drawn inside the plateau of the dyadic
// shell weight, conjugate-symmetrized so every sample is a real field.
//
// Laws:
//   gaussian-coefficients      gaussian amplitudes, modulation centers in shell L
//   single-shell               unimodular random phases, zero modulation
//   characteristic-concentrated  two opposite high-q columns with low xi spread
//                              (the structure that saturates the L^4 estimate)

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "zklab/blocks.hpp"
#include "zklab/core.hpp"
#include "zklab/cutoff.hpp"
#include "zklab/rng.hpp"

namespace zklab {

enum class EnsembleLaw {
  GaussianCoefficients,
  SingleShell,
  CharacteristicConcentrated,
};

struct RandomFieldSpec {
  long long N = 8;
  long long L = 1;
  EnsembleLaw law = EnsembleLaw::GaussianCoefficients;
  unsigned long long seed = 1;
  int cells = 16;           // packets before conjugate symmetrization
  bool transversal = false; // xi-dominant cells: 3 xi^2 - q^2 >= max(1,|xi|), xi >= 1
  bool q_dominant = false;  // |q| > sqrt(3)|xi| and q != 0 (Airy-weighted ensembles)
  double delta = 1.0;       // canonical cutoff scale

  void validate() const {
    if (N < 1) throw ContractViolation("RandomFieldSpec: N must be >= 1");
    if (L < 1) throw ContractViolation("RandomFieldSpec: L must be >= 1");
    if (cells < 1) throw ContractViolation("RandomFieldSpec: cells must be >= 1");
    if (transversal && q_dominant)
      throw ContractViolation("RandomFieldSpec: transversal and q_dominant are exclusive");
    if (!(delta > 0.0)) throw ContractViolation("RandomFieldSpec: delta must be positive");
  }
};

namespace detail {

// Plateau of the dyadic shell weight at N: psi(r/N) == 1 exactly.
inline bool in_shell_plateau(double r, long long N) {
  const double t = r / static_cast<double>(N);
  return t >= 0.8 && t <= 1.25;
}

// Draws one lattice cell in the shell region requested by spec (everything but
// the concentrated law, which has its own placement).
inline void draw_shell_cell(Rng& rng, const RandomFieldSpec& spec, long long lambda,
                            long long& J, long long& B) {
  for (int attempt = 0; attempt < 4096; ++attempt) {
    const double ang = rng.uniform(0.0, 2.0 * kPi);
    const double rad = rng.uniform(0.9, 1.15) * static_cast<double>(spec.N);
    const double xi = rad * std::cos(ang) / std::sqrt(3.0);
    const double q = rad * std::sin(ang);
    J = std::llround(xi * static_cast<double>(lambda));
    B = std::llround(q);
    const double xr = static_cast<double>(J) / static_cast<double>(lambda);
    const double r = dilated_norm(xr, static_cast<double>(B));
    if (!in_shell_plateau(r, spec.N)) continue;
    if (J == 0 && B == 0) continue;
    if (spec.transversal) {
      if (!(xr >= 1.0 &&
            3.0 * xr * xr - static_cast<double>(B) * B >= std::max(1.0, std::abs(xr))))
        continue;
    }
    if (spec.q_dominant) {
      if (B == 0 || static_cast<double>(B) * B <= 3.0 * xr * xr) continue;
    }
    return;
  }
  throw ContractViolation("draw_shell_cell: no lattice cell satisfies the requested region");
}

}  // namespace detail

// Draws one sample as packets on the lattice.  Deterministic in (spec, rg).
inline SparseField sample_sparse(const RandomFieldSpec& spec, const ResonanceGrid& rg,
                                 const CutoffKernel& ker) {
  spec.validate();
  rg.validate();
  Rng rng(derive_seed(spec.seed, "ensemble",
                      static_cast<unsigned long long>(spec.N),
                      static_cast<unsigned long long>(spec.L)));
  SparseField out;
  out.rg = rg;

  const double dtau = rg.dtau();
  const long long mc_base = (spec.L == 1)
                                ? std::llround(1.0 / dtau)
                                : std::llround(static_cast<double>(spec.L) / dtau);
  const long long mc_top = (spec.L == 1)
                               ? mc_base
                               : std::llround(static_cast<double>(2 * spec.L - 1) / dtau);

  for (int i = 0; i < spec.cells; ++i) {
    long long J = 0, B = 0;
    if (spec.law == EnsembleLaw::CharacteristicConcentrated) {
      B = (i % 2 == 0) ? spec.N : -spec.N;
      do {
        J = rng.uniform_int(-static_cast<long long>(rg.lambda),
                            static_cast<long long>(rg.lambda));
      } while (J == 0);
    } else {
      detail::draw_shell_cell(rng, spec, rg.lambda, J, B);
    }

    long long mc = 0;
    if (spec.law != EnsembleLaw::SingleShell) {
      if (spec.L == 1) {
        mc = rng.uniform_int(-mc_base, mc_base);
      } else {
        const long long mag = rng.uniform_int(mc_base, mc_top);
        mc = (rng.uniform() < 0.5) ? mag : -mag;
      }
    }

    cplx a;
    if (spec.law == EnsembleLaw::GaussianCoefficients) {
      a = rng.gaussian_c();
    } else {
      const double ph = rng.uniform(0.0, 2.0 * kPi);
      a = cplx(std::cos(ph), std::sin(ph));
    }

    append_packet(out, ker, J, B, mc, a);
    append_packet(out, ker, -J, -B, -mc, std::conj(a));
  }
  return out;
}

// Dense contract form: the same packets materialized on a space-time grid.
// Throws when the shell or the packet envelopes exceed the grid's bands.
inline SpaceTimeField sample_field(const RandomFieldSpec& spec, const Grid& g) {
  const ResonanceGrid rg = lattice_from_grid(g);
  const CutoffKernel ker(spec.delta, rg.dtau());
  const SparseField u = sample_sparse(spec, rg, ker);
  return dense_from_sparse(u, g);
}

// Random initial data on the same shell geometry (no time direction); feeds the
// propagator-based estimates.  Conjugate-symmetric, hence real.
inline SpectralField sample_data(const RandomFieldSpec& spec, const Grid& g) {
  spec.validate();
  const long long lambda = std::llround(g.Lx / (2.0 * kPi));
  if (lambda < 1 || std::abs(g.Lx - 2.0 * kPi * static_cast<double>(lambda)) > 1e-9 * g.Lx)
    throw ContractViolation("sample_data: grid needs Lx = 2*pi*lambda");
  Rng rng(derive_seed(spec.seed, "ensemble-data",
                      static_cast<unsigned long long>(spec.N),
                      static_cast<unsigned long long>(spec.L)));
  SpectralField u0(g);
  for (int i = 0; i < spec.cells; ++i) {
    long long J = 0, B = 0;
    if (spec.law == EnsembleLaw::CharacteristicConcentrated) {
      B = (i % 2 == 0) ? spec.N : -spec.N;
      do {
        J = rng.uniform_int(-lambda, lambda);
      } while (J == 0);
    } else {
      detail::draw_shell_cell(rng, spec, lambda, J, B);
    }
    if (2 * std::llabs(J) >= g.Nx || 2 * std::llabs(B) >= g.Ny)
      throw ContractViolation("sample_data: shell beyond grid resolution");
    cplx a;
    if (spec.law == EnsembleLaw::GaussianCoefficients) {
      a = rng.gaussian_c();
    } else {
      const double ph = rng.uniform(0.0, 2.0 * kPi);
      a = cplx(std::cos(ph), std::sin(ph));
    }
    u0.mode(static_cast<int>(J), static_cast<int>(B)) += a;
    u0.mode(static_cast<int>(-J), static_cast<int>(-B)) += std::conj(a);
  }
  return u0;
}

}  // namespace zklab
