#pragma once

// The linear group e^{-t dx Delta} on spectral data, plus its two
// one-dimensional factorizations: per-xi (periodic Schrodinger in y, then an
// Airy phase in xi) and per-q (Airy flow in x, then an exact Fourier
// translation by q^2 t). All three act diagonally on coefficients and agree
// up to floating-point regrouping; the 2D multiplier is the reference.

#include <complex>

#include "zklab/core.hpp"
#include "zklab/symbols.hpp"

namespace zklab {

// Full 2D multiplier e^{i t phi(xi,q)}; exactly unitary on coefficients.
inline SpectralField linear_propagate(const SpectralField& u0, double t) {
  SpectralField out = u0;
  const Grid& g = u0.grid;
  for (int j = 0; j < g.Nx; ++j) {
    const double xi = g.xi(j);
    for (int b = 0; b < g.Ny; ++b) {
      const double ph = t * phase(xi, static_cast<double>(g.q(b)));
      out.at(j, b) *= cplx(std::cos(ph), std::sin(ph));
    }
  }
  return out;  // multiplier conjugate-symmetric => reality preserved
}

// For each fixed xi: run the 1D periodic Schrodinger group e^{i s dy^2}
// (Fourier multiplier e^{-i s q^2}) for time s = -xi t, then multiply by the
// 1D Airy phase e^{i t xi^3}.
inline SpectralField schrodinger_view_evolve(const SpectralField& u0, double t) {
  SpectralField out = u0;
  const Grid& g = u0.grid;
  for (int j = 0; j < g.Nx; ++j) {
    const double xi = g.xi(j);
    const double s = -xi * t;
    const double airy_angle = t * xi * xi * xi;
    const cplx airy(std::cos(airy_angle), std::sin(airy_angle));
    for (int b = 0; b < g.Ny; ++b) {
      const double q = static_cast<double>(g.q(b));
      const double schro_angle = -s * q * q;
      out.at(j, b) *= cplx(std::cos(schro_angle), std::sin(schro_angle)) * airy;
    }
  }
  return out;
}

// For each fixed q: run the 1D Airy group e^{-t dx^3} on the x-line
// (multiplier e^{i t xi^3}), then translate x -> x + q^2 t as the exact
// Fourier phase shift e^{i xi q^2 t}.
inline SpectralField airy_view_evolve(const SpectralField& u0, double t) {
  SpectralField out = u0;
  const Grid& g = u0.grid;
  for (int b = 0; b < g.Ny; ++b) {
    const double q = static_cast<double>(g.q(b));
    const double shift_rate = q * q * t;
    for (int j = 0; j < g.Nx; ++j) {
      const double xi = g.xi(j);
      const double airy_angle = t * xi * xi * xi;
      const double shift_angle = xi * shift_rate;
      out.at(j, b) *= cplx(std::cos(airy_angle), std::sin(airy_angle)) *
                      cplx(std::cos(shift_angle), std::sin(shift_angle));
    }
  }
  return out;
}

}  // namespace zklab
