#pragma once

// Core types for the dispersive laboratory on R_x x T_y: frequency lattice,
// spectral fields, and space-time fields stored in sheared (modulation)
// coordinates.
//
// Conventions (used consistently everywhere):
//   * x lives on a periodic box of length Lx centered at 0, y on the 2*pi
//     torus, t on a window of length Tw centered at 0.
//   * Frequencies: xi_j = 2*pi*j/Lx (j integer), q integer, tau_m = 2*pi*m/Tw.
//   * Forward transforms are Riemann-sum approximations of the continuum
//     integral transform (sum times cell measure), so the DC coefficient of
//     the constant field 1 equals Lx * 2*pi.
//   * Inverse transforms carry the matching 1/(2*pi) per variable, making the
//     round trip exact on the lattice.
//   * A space-time field is stored against the dispersion relation
//     phi(xi,q) = xi*(xi^2+q^2): the coefficient slot (m,j,b) sits at
//     tau = phi(xi_j, q_b) + sigma_m ("sheared lattice"). sigma is the
//     distance to the characteristic surface, so modulation weights
//     <tau - phi> = <sigma> are exact lattice quantities, and fields
//     concentrated near the surface need no astronomically large tau window.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zklab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// ---------------------------------------------------------------------------
// Errors. Everything thrown by the library derives from Error so callers can
// map failures onto process exit codes in one place.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class GridError : public Error {
 public:
  using Error::Error;
};

// Contract violation: an operation was invoked outside its domain of
// validity (unresolvable frequency, band exceeding the lattice, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class SingularWeightError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class AliasingError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double last_time)
      : Error(what), last_finite_time(last_time) {}
  double last_finite_time;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Frequency lattice
// ---------------------------------------------------------------------------

struct FrequencyPoint {
  double xi = 0.0;  // continuous frequency of the x-line
  int q = 0;        // integer frequency of the torus direction
};

struct Grid {
  double Lx = 64.0;  // x-period
  int Nx = 128;      // x modes, even, >= 8
  int Ny = 128;      // y modes, even, >= 8
  double Tw = kTwoPi;  // time window for space-time transforms
  int Nt = 128;      // time modes, even, >= 8

  Grid() = default;
  Grid(double lx, int nx, int ny, double tw = kTwoPi, int nt = 128)
      : Lx(lx), Nx(nx), Ny(ny), Tw(tw), Nt(nt) {
    validate();
  }

  void validate() const {
    if (!(Lx > 0.0)) throw GridError("Grid: Lx must be positive");
    if (!(Tw > 0.0)) throw GridError("Grid: Tw must be positive");
    auto chk = [](int n, const char* name) {
      if (n < 8 || (n % 2) != 0)
        throw GridError(std::string("Grid: ") + name + " must be even and >= 8");
    };
    chk(Nx, "Nx");
    chk(Ny, "Ny");
    chk(Nt, "Nt");
  }

  // Cell measures.
  double dx() const { return Lx / Nx; }
  double dy() const { return kTwoPi / Ny; }
  double dt() const { return Tw / Nt; }
  double dxi() const { return kTwoPi / Lx; }
  double dtau() const { return kTwoPi / Tw; }

  // Storage uses DFT order: index i in [0,N) holds signed mode
  // i for i < N/2 and i - N for i >= N/2.
  static int signed_index(int i, int n) { return (i < n / 2) ? i : i - n; }
  static int storage_index(int s, int n) { return (s >= 0) ? s : s + n; }

  double xi(int j) const { return dxi() * signed_index(j, Nx); }
  int q(int b) const { return signed_index(b, Ny); }
  double sigma(int m) const { return dtau() * signed_index(m, Nt); }

  // Physical sample points (x and t centered, y from 0).
  double x(int a) const { return -0.5 * Lx + dx() * a; }
  double y(int c) const { return dy() * c; }
  double t(int r) const { return -0.5 * Tw + dt() * r; }

  double xi_max() const { return dxi() * (Nx / 2); }
  int q_max() const { return Ny / 2; }
  double sigma_max() const { return dtau() * (Nt / 2); }

  std::size_t spatial_size() const {
    return static_cast<std::size_t>(Nx) * static_cast<std::size_t>(Ny);
  }
  std::size_t spacetime_size() const {
    return static_cast<std::size_t>(Nt) * spatial_size();
  }

  bool same_spatial(const Grid& o) const {
    return Lx == o.Lx && Nx == o.Nx && Ny == o.Ny;
  }
  bool operator==(const Grid& o) const {
    return same_spatial(o) && Tw == o.Tw && Nt == o.Nt;
  }
};

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

// Fourier coefficients of a function of (x,y) at a fixed time.
// coeff[j*Ny + b] is the mode (xi_j, q_b) in DFT storage order.
struct SpectralField {
  Grid grid;
  bool real_field = true;  // declares conjugate symmetry
  std::vector<cplx> coeff;

  SpectralField() = default;
  explicit SpectralField(const Grid& g, bool real = true)
      : grid(g), real_field(real), coeff(g.spatial_size(), cplx(0.0, 0.0)) {}

  cplx& at(int j, int b) { return coeff[static_cast<std::size_t>(j) * grid.Ny + b]; }
  const cplx& at(int j, int b) const {
    return coeff[static_cast<std::size_t>(j) * grid.Ny + b];
  }
  // Access by signed mode numbers.
  cplx& mode(int js, int qs) {
    return at(Grid::storage_index(js, grid.Nx), Grid::storage_index(qs, grid.Ny));
  }
  const cplx& mode(int js, int qs) const {
    return at(Grid::storage_index(js, grid.Nx), Grid::storage_index(qs, grid.Ny));
  }
};

// Space-time Fourier coefficients on the sheared lattice:
// coeff[(m*Nx + j)*Ny + b] sits at frequency
//   (tau, xi, q) = (phi(xi_j,q_b) + sigma_m, xi_j, q_b).
struct SpaceTimeField {
  Grid grid;
  bool real_field = true;
  std::vector<cplx> coeff;

  SpaceTimeField() = default;
  explicit SpaceTimeField(const Grid& g, bool real = true)
      : grid(g), real_field(real), coeff(g.spacetime_size(), cplx(0.0, 0.0)) {}

  cplx& at(int m, int j, int b) {
    return coeff[(static_cast<std::size_t>(m) * grid.Nx + j) * grid.Ny + b];
  }
  const cplx& at(int m, int j, int b) const {
    return coeff[(static_cast<std::size_t>(m) * grid.Nx + j) * grid.Ny + b];
  }
  cplx& mode(int ms, int js, int qs) {
    return at(Grid::storage_index(ms, grid.Nt), Grid::storage_index(js, grid.Nx),
              Grid::storage_index(qs, grid.Ny));
  }
  const cplx& mode(int ms, int js, int qs) const {
    return at(Grid::storage_index(ms, grid.Nt), Grid::storage_index(js, grid.Nx),
              Grid::storage_index(qs, grid.Ny));
  }
};

// Relative magnitude of the conjugate-symmetry defect; 0 for a genuinely
// real-valued field. Checked against 1e-12 where the real flag is claimed.
inline double conjugate_symmetry_defect(const SpectralField& f) {
  const Grid& g = f.grid;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < g.Nx; ++j) {
    int jn = (g.Nx - j) % g.Nx;
    for (int b = 0; b < g.Ny; ++b) {
      int bn = (g.Ny - b) % g.Ny;
      cplx d = f.at(j, b) - std::conj(f.at(jn, bn));
      num += std::norm(d);
      den += std::norm(f.at(j, b));
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

inline double conjugate_symmetry_defect(const SpaceTimeField& f) {
  const Grid& g = f.grid;
  double num = 0.0, den = 0.0;
  for (int m = 0; m < g.Nt; ++m) {
    int mn = (g.Nt - m) % g.Nt;
    for (int j = 0; j < g.Nx; ++j) {
      int jn = (g.Nx - j) % g.Nx;
      for (int b = 0; b < g.Ny; ++b) {
        int bn = (g.Ny - b) % g.Ny;
        cplx d = f.at(m, j, b) - std::conj(f.at(mn, jn, bn));
        num += std::norm(d);
        den += std::norm(f.at(m, j, b));
      }
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

// Force exact conjugate symmetry by averaging with the reflected conjugate.
inline void symmetrize_real(SpectralField& f) {
  const Grid& g = f.grid;
  SpectralField tmp = f;
  for (int j = 0; j < g.Nx; ++j) {
    int jn = (g.Nx - j) % g.Nx;
    for (int b = 0; b < g.Ny; ++b) {
      int bn = (g.Ny - b) % g.Ny;
      f.at(j, b) = 0.5 * (tmp.at(j, b) + std::conj(tmp.at(jn, bn)));
    }
  }
  f.real_field = true;
}

inline void symmetrize_real(SpaceTimeField& f) {
  const Grid& g = f.grid;
  SpaceTimeField tmp = f;
  for (int m = 0; m < g.Nt; ++m) {
    int mn = (g.Nt - m) % g.Nt;
    for (int j = 0; j < g.Nx; ++j) {
      int jn = (g.Nx - j) % g.Nx;
      for (int b = 0; b < g.Ny; ++b) {
        int bn = (g.Ny - b) % g.Ny;
        f.at(m, j, b) = 0.5 * (tmp.at(m, j, b) + std::conj(tmp.at(mn, jn, bn)));
      }
    }
  }
  f.real_field = true;
}

}  // namespace zklab
