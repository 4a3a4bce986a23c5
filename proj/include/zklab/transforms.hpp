#pragma once

// Transforms between physical samples and Fourier coefficients.
//
// Conventions (fixed once, used by every module):
//   forward  = Riemann sum of the continuum transform: sum * (cell measure);
//   inverse  = reciprocal normalization: (2pi)^-1 per continuous variable
//              (t and x) and per torus variable (y, Fourier series).
// So Parseval holds exactly in the continuum normalization and a constant
// field of value 1 has DC coefficient Lx * 2pi.
//
// SpaceTimeField coefficients are stored against the sheared frequency
// tau = phi(xi_j, q_b) + sigma_m (see core.hpp). All operations here apply
// the phase factor e^{i phi t} explicitly when moving to or from time
// samples, which keeps free evolutions exactly representable.

#include <complex>
#include <vector>

#include "zklab/core.hpp"
#include "zklab/cutoff.hpp"
#include "zklab/fft.hpp"
#include "zklab/symbols.hpp"

namespace zklab {

struct PhysicalField {
  Grid grid;
  bool real_field = true;
  std::vector<cplx> val;  // indexed (a, c) row-major: val[a*Ny + c]

  PhysicalField() = default;
  explicit PhysicalField(const Grid& g, bool real = true)
      : grid(g), real_field(real), val(g.spatial_size(), cplx(0.0, 0.0)) {}

  cplx& at(int a, int c) { return val[static_cast<std::size_t>(a) * grid.Ny + c]; }
  const cplx& at(int a, int c) const {
    return val[static_cast<std::size_t>(a) * grid.Ny + c];
  }
};

namespace detail {

// In-place 2D DFT over an (Nx, Ny) row-major complex array.
inline void fft2(std::vector<cplx>& a, int nx, int ny, bool inverse) {
  // rows: contiguous length-ny lines
  for (int r = 0; r < nx; ++r) fft(a.data() + static_cast<std::size_t>(r) * ny,
                                   static_cast<std::size_t>(ny), inverse);
  // columns: strided
  fft_strided(a.data(), static_cast<std::size_t>(nx), static_cast<std::size_t>(ny),
              static_cast<std::size_t>(ny), 1, inverse);
}

}  // namespace detail

// u(x_a, y_c) -> uhat(xi_j, q_b). The (-1)^j factor accounts for the
// centered x grid (x_0 = -Lx/2); y starts at 0 so carries no twiddle.
inline SpectralField to_spectral(const PhysicalField& u) {
  const Grid& g = u.grid;
  SpectralField out(g, u.real_field);
  out.coeff = u.val;
  detail::fft2(out.coeff, g.Nx, g.Ny, /*inverse=*/false);
  const double scale = g.dx() * g.dy();
  for (int j = 0; j < g.Nx; ++j) {
    const double s = (j % 2 == 0) ? scale : -scale;
    for (int b = 0; b < g.Ny; ++b) out.at(j, b) *= s;
  }
  return out;
}

inline PhysicalField to_physical(const SpectralField& f) {
  const Grid& g = f.grid;
  PhysicalField out(g, f.real_field);
  out.val = f.coeff;
  for (int j = 1; j < g.Nx; j += 2)
    for (int b = 0; b < g.Ny; ++b) out.val[static_cast<std::size_t>(j) * g.Ny + b] *= -1.0;
  detail::fft2(out.val, g.Nx, g.Ny, /*inverse=*/true);
  const double scale = g.dxi() / (kTwoPi * kTwoPi);
  for (auto& v : out.val) v *= scale;
  return out;
}

// ---------------------------------------------------------------------------
// Space-time fields vs time slices
// ---------------------------------------------------------------------------

// Spectral slice u^(t)(xi,q) at grid time t_r, for all r at once: one inverse
// FFT per (j,b) column plus the characteristic phase e^{i phi t_r}.
inline std::vector<SpectralField> time_slices(const SpaceTimeField& U) {
  const Grid& g = U.grid;
  std::vector<SpectralField> out(static_cast<std::size_t>(g.Nt),
                                 SpectralField(g, U.real_field));
  std::vector<cplx> line(static_cast<std::size_t>(g.Nt));
  const double scale = g.dtau() / kTwoPi;
  for (int j = 0; j < g.Nx; ++j) {
    for (int b = 0; b < g.Ny; ++b) {
      for (int m = 0; m < g.Nt; ++m)
        line[m] = (m % 2 == 0) ? U.at(m, j, b) : -U.at(m, j, b);
      fft(line.data(), line.size(), /*inverse=*/true);
      const double ph = phase(g.xi(j), static_cast<double>(g.q(b)));
      for (int r = 0; r < g.Nt; ++r) {
        const double a = ph * g.t(r);
        out[r].at(j, b) = scale * cplx(std::cos(a), std::sin(a)) * line[r];
      }
    }
  }
  return out;
}

// Single slice at an arbitrary time (direct sum in m; exact, not windowed).
inline SpectralField time_slice_at(const SpaceTimeField& U, double t) {
  const Grid& g = U.grid;
  SpectralField out(g, U.real_field);
  const double scale = g.dtau() / kTwoPi;
  for (int j = 0; j < g.Nx; ++j) {
    for (int b = 0; b < g.Ny; ++b) {
      cplx acc(0.0, 0.0);
      for (int m = 0; m < g.Nt; ++m) {
        const double a = g.sigma(m) * t;
        acc += U.at(m, j, b) * cplx(std::cos(a), std::sin(a));
      }
      const double a = phase(g.xi(j), static_cast<double>(g.q(b))) * t;
      out.at(j, b) = scale * cplx(std::cos(a), std::sin(a)) * acc;
    }
  }
  return out;
}

// Inverse of time_slices: assemble the space-time spectrum from slices on the
// grid's time lattice.
inline SpaceTimeField from_time_slices(const std::vector<SpectralField>& slices,
                                       const Grid& g) {
  if (static_cast<int>(slices.size()) != g.Nt)
    throw GridError("from_time_slices: slice count != Nt");
  for (const auto& s : slices)
    if (!s.grid.same_spatial(g)) throw GridError("from_time_slices: grid mismatch");
  SpaceTimeField out(g, slices.front().real_field);
  std::vector<cplx> line(static_cast<std::size_t>(g.Nt));
  for (int j = 0; j < g.Nx; ++j) {
    for (int b = 0; b < g.Ny; ++b) {
      const double ph = phase(g.xi(j), static_cast<double>(g.q(b)));
      for (int r = 0; r < g.Nt; ++r) {
        const double a = -ph * g.t(r);
        line[r] = slices[r].at(j, b) * cplx(std::cos(a), std::sin(a));
      }
      fft(line.data(), line.size(), /*inverse=*/false);
      for (int m = 0; m < g.Nt; ++m)
        out.at(m, j, b) = g.dt() * ((m % 2 == 0) ? line[m] : -line[m]);
    }
  }
  return out;
}

// Free linear evolution e^{-t dx Delta} u0 as a space-time field: on the
// sheared lattice it is concentrated at sigma = 0 with weight 2pi/dtau.
inline SpaceTimeField lift_linear_evolution(const SpectralField& u0, double Tw,
                                            int Nt) {
  Grid g(u0.grid.Lx, u0.grid.Nx, u0.grid.Ny, Tw, Nt);
  SpaceTimeField out(g, u0.real_field);
  const double w = kTwoPi / g.dtau();
  for (int j = 0; j < g.Nx; ++j)
    for (int b = 0; b < g.Ny; ++b) out.at(0, j, b) = w * u0.at(j, b);
  return out;
}

// Pointwise multiplication by the canonical time cutoff, column by column:
// slice to the time lattice, scale, reassemble. Exact for the grid's
// window-periodic reading of the field.
inline SpaceTimeField multiply_time_cutoff(const SpaceTimeField& U, double delta) {
  const Grid& g = U.grid;
  if (!(delta > 0.0) || 2.0 * delta > 0.5 * g.Tw)
    throw ContractViolation("multiply_time_cutoff: need 0 < 2*delta <= Tw/2");
  SpaceTimeField out(g, U.real_field);
  std::vector<cplx> line(static_cast<std::size_t>(g.Nt));
  std::vector<double> theta(static_cast<std::size_t>(g.Nt));
  for (int r = 0; r < g.Nt; ++r) theta[r] = time_cutoff(g.t(r), delta);
  for (int j = 0; j < g.Nx; ++j) {
    for (int b = 0; b < g.Ny; ++b) {
      for (int m = 0; m < g.Nt; ++m)
        line[m] = (m % 2 == 0) ? U.at(m, j, b) : -U.at(m, j, b);
      fft(line.data(), line.size(), /*inverse=*/true);
      for (int r = 0; r < g.Nt; ++r) line[r] *= theta[r];
      fft(line.data(), line.size(), /*inverse=*/false);
      const double inv = 1.0 / g.Nt;
      for (int m = 0; m < g.Nt; ++m)
        out.at(m, j, b) = inv * ((m % 2 == 0) ? line[m] : -line[m]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parseval-normalized L2 primitives
// ---------------------------------------------------------------------------

inline double l2_physical(const PhysicalField& u) {
  double s = 0.0;
  for (const auto& v : u.val) s += std::norm(v);
  return std::sqrt(s * u.grid.dx() * u.grid.dy());
}

inline double l2_spectral(const SpectralField& f) {
  double s = 0.0;
  for (const auto& v : f.coeff) s += std::norm(v);
  return std::sqrt(s * f.grid.dxi() / (kTwoPi * kTwoPi));
}

inline double l2_spacetime(const SpaceTimeField& U) {
  double s = 0.0;
  for (const auto& v : U.coeff) s += std::norm(v);
  return std::sqrt(s * U.grid.dtau() * U.grid.dxi() / (kTwoPi * kTwoPi * kTwoPi));
}

}  // namespace zklab
