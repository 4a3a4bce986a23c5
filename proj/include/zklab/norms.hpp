#pragma once

// Norm evaluation for spectral and space-time fields.
//
// Physical-space Lebesgue norms are Riemann sums on the sample grid (L^inf is
// a max over samples); frequency-side norms carry the (2pi)^-d Plancherel
// factors matching the transform convention in transforms.hpp, so that
// X_{0,0} == L^2_{t,x,y} exactly on band-limited data.  The bilinear
// multiplier mp_apply is an exact sparse tuple sum; each tuple's output
// modulation is assigned to the nearest sigma cell (exact whenever the grid
// makes every resonance an integer number of cells, see blocks.hpp), and
// output frequencies falling outside the stored band are dropped.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "zklab/core.hpp"
#include "zklab/cutoff.hpp"
#include "zklab/symbols.hpp"
#include "zklab/transforms.hpp"

namespace zklab {

struct NormSpec {
  enum class Kind { LpTxy, LpTxyRestricted, Mixed, Hs, Xsb, LinfHs };

  Kind kind = Kind::LpTxy;
  double p = 2.0;        // outer exponent (the only one unless Mixed)
  double p_inner = 2.0;  // Mixed: inner exponent
  bool outer_t = false, outer_x = false, outer_y = false;  // Mixed stage split
  double s = 0.0;
  double b = 0.0;
  double T = 1.0;  // LpTxyRestricted half-window

  static NormSpec lp(double p_) {
    NormSpec n;
    n.kind = Kind::LpTxy;
    n.p = p_;
    return n;
  }
  static NormSpec lp_restricted(double p_, double T_) {
    NormSpec n;
    n.kind = Kind::LpTxyRestricted;
    n.p = p_;
    n.T = T_;
    return n;
  }
  // Outer variables given as a subset of "txy", e.g. mixed("tx", 6, 2) for
  // the L^6_{t,x} L^2_y stage order.
  static NormSpec mixed(const char* outer, double p_outer, double p_in) {
    NormSpec n;
    n.kind = Kind::Mixed;
    n.p = p_outer;
    n.p_inner = p_in;
    for (const char* c = outer; *c; ++c) {
      if (*c == 't') n.outer_t = true;
      else if (*c == 'x') n.outer_x = true;
      else if (*c == 'y') n.outer_y = true;
      else throw ContractViolation("NormSpec::mixed: outer variables must be from 'txy'");
    }
    return n;
  }
  static NormSpec hs(double s_) {
    NormSpec n;
    n.kind = Kind::Hs;
    n.s = s_;
    return n;
  }
  static NormSpec xsb(double s_, double b_) {
    NormSpec n;
    n.kind = Kind::Xsb;
    n.s = s_;
    n.b = b_;
    return n;
  }
  static NormSpec linf_hs(double s_) {
    NormSpec n;
    n.kind = Kind::LinfHs;
    n.s = s_;
    return n;
  }

  void validate() const {
    if (kind == Kind::LpTxy || kind == Kind::LpTxyRestricted || kind == Kind::Mixed) {
      if (!(p >= 1.0)) throw ContractViolation("NormSpec: exponent must be >= 1");
      if (kind == Kind::Mixed && !(p_inner >= 1.0))
        throw ContractViolation("NormSpec: inner exponent must be >= 1");
      if (kind == Kind::LpTxyRestricted && !(T > 0.0))
        throw ContractViolation("NormSpec: restricted window must be positive");
    }
  }
};

struct MultiplierWeight {
  enum class Kind { J, I, Jx, Ix, Jy, Iy };
  Kind kind = Kind::J;
  double s = 0.0;
};

namespace detail {

inline bool is_inf(double p) { return std::isinf(p); }

// Lebesgue norm of samples |u| over a (t, x, y) cube with cell weights
// (wt, wx, wy), split into an outer stage over the flagged variables and an
// inner stage over the rest.  `keep_t(r)` restricts the time range.
template <typename Abs, typename KeepT>
double cube_mixed_norm(int Nt, int Nx, int Ny, double wt, double wx, double wy,
                       Abs absval, KeepT keep_t, bool ot, bool ox, bool oy,
                       double p_out, double p_in) {
  // Outer loop dimensions (1 when the variable is inner).
  const int Ot = ot ? Nt : 1, Ox = ox ? Nx : 1, Oy = oy ? Ny : 1;
  const int It = ot ? 1 : Nt, Ix = ox ? 1 : Nx, Iy = oy ? 1 : Ny;
  double w_out = 1.0, w_in = 1.0;
  (ot ? w_out : w_in) *= wt;
  (ox ? w_out : w_in) *= wx;
  (oy ? w_out : w_in) *= wy;

  double acc_out = 0.0;  // sum of w_out * inner^p_out, or running max
  for (int rt = 0; rt < Ot; ++rt)
    for (int ra = 0; ra < Ox; ++ra)
      for (int rc = 0; rc < Oy; ++rc) {
        double acc_in = 0.0;
        int kept = It;  // inner t samples surviving the restriction
        if (!ot) kept = 0;
        for (int it = 0; it < It; ++it) {
          const int r = ot ? rt : it;
          if (!keep_t(r)) continue;
          if (!ot) ++kept;
          for (int ia = 0; ia < Ix; ++ia) {
            const int a = ox ? ra : ia;
            for (int ic = 0; ic < Iy; ++ic) {
              const int c = oy ? rc : ic;
              const double v = absval(r, a, c);
              if (is_inf(p_in))
                acc_in = std::max(acc_in, v);
              else
                acc_in += std::pow(v, p_in);
            }
          }
        }
        if (ot && !keep_t(rt)) continue;
        double inner;
        if (is_inf(p_in))
          inner = acc_in;
        else
          inner = std::pow(acc_in * w_in, 1.0 / p_in);
        (void)kept;
        if (is_inf(p_out))
          acc_out = std::max(acc_out, inner);
        else
          acc_out += w_out * std::pow(inner, p_out);
      }
  return is_inf(p_out) ? acc_out : std::pow(acc_out, 1.0 / p_out);
}

inline double hs_norm_spectral(const SpectralField& u, double s) {
  const Grid& g = u.grid;
  double acc = 0.0;
  for (int j = 0; j < g.Nx; ++j)
    for (int b = 0; b < g.Ny; ++b) {
      const double w = std::pow(bracket(g.xi(j), static_cast<double>(g.q(b))), 2.0 * s);
      acc += w * std::norm(u.at(j, b));
    }
  const double two_pi = 2.0 * kPi;
  return std::sqrt(acc * g.dxi() / (two_pi * two_pi));
}

}  // namespace detail

inline double norm(const SpectralField& u, const NormSpec& spec) {
  spec.validate();
  const Grid& g = u.grid;
  switch (spec.kind) {
    case NormSpec::Kind::Hs:
    case NormSpec::Kind::LinfHs:  // no time axis: coincides with Hs
      return detail::hs_norm_spectral(u, spec.s);
    case NormSpec::Kind::LpTxy: {  // spatial Lp (no time axis)
      PhysicalField ph = to_physical(u);
      return detail::cube_mixed_norm(
          1, g.Nx, g.Ny, 1.0, g.dx(), g.dy(),
          [&](int, int a, int c) { return std::abs(ph.at(a, c)); },
          [](int) { return true; }, false, false, false, spec.p, spec.p);
    }
    case NormSpec::Kind::Mixed: {
      if (spec.outer_t) throw ContractViolation("norm: time stage needs a SpaceTimeField");
      PhysicalField ph = to_physical(u);
      return detail::cube_mixed_norm(
          1, g.Nx, g.Ny, 1.0, g.dx(), g.dy(),
          [&](int, int a, int c) { return std::abs(ph.at(a, c)); },
          [](int) { return true; }, false, spec.outer_x, spec.outer_y, spec.p,
          spec.p_inner);
    }
    case NormSpec::Kind::Xsb:
      throw ContractViolation("norm: Xsb requires a SpaceTimeField");
    case NormSpec::Kind::LpTxyRestricted:
      throw ContractViolation("norm: time restriction requires a SpaceTimeField");
  }
  throw ContractViolation("norm: unknown spec");
}

inline double norm(const SpaceTimeField& u, const NormSpec& spec) {
  spec.validate();
  const Grid& g = u.grid;
  switch (spec.kind) {
    case NormSpec::Kind::Xsb: {
      double acc = 0.0;
      for (int m = 0; m < g.Nt; ++m) {
        const double wb = std::pow(bracket(g.sigma(m)), 2.0 * spec.b);
        for (int j = 0; j < g.Nx; ++j)
          for (int b = 0; b < g.Ny; ++b) {
            const double ws =
                std::pow(bracket(g.xi(j), static_cast<double>(g.q(b))), 2.0 * spec.s);
            acc += ws * wb * std::norm(u.at(m, j, b));
          }
      }
      const double two_pi = 2.0 * kPi;
      return std::sqrt(acc * g.dtau() * g.dxi() / (two_pi * two_pi * two_pi));
    }
    case NormSpec::Kind::LinfHs: {
      std::vector<SpectralField> slices = time_slices(u);
      double best = 0.0;
      for (const SpectralField& sl : slices)
        best = std::max(best, detail::hs_norm_spectral(sl, spec.s));
      return best;
    }
    case NormSpec::Kind::Hs:
      throw ContractViolation("norm: Hs of a space-time field is ambiguous; use LinfHs");
    case NormSpec::Kind::LpTxy:
    case NormSpec::Kind::LpTxyRestricted:
    case NormSpec::Kind::Mixed: {
      const double T = spec.T;
      const bool restricted = spec.kind == NormSpec::Kind::LpTxyRestricted;
      if (restricted && !(T <= 0.5 * g.Tw + 1e-12))
        throw ContractViolation("norm: restriction window exceeds the time window");
      std::vector<SpectralField> slices = time_slices(u);
      std::vector<PhysicalField> phys;
      phys.reserve(slices.size());
      for (const SpectralField& sl : slices) phys.push_back(to_physical(sl));
      const bool ot = spec.kind == NormSpec::Kind::Mixed ? spec.outer_t : false;
      const bool ox = spec.kind == NormSpec::Kind::Mixed ? spec.outer_x : false;
      const bool oy = spec.kind == NormSpec::Kind::Mixed ? spec.outer_y : false;
      const double p_in = spec.kind == NormSpec::Kind::Mixed ? spec.p_inner : spec.p;
      return detail::cube_mixed_norm(
          g.Nt, g.Nx, g.Ny, g.dt(), g.dx(), g.dy(),
          [&](int r, int a, int c) { return std::abs(phys[static_cast<size_t>(r)].at(a, c)); },
          [&](int r) { return !restricted || std::fabs(g.t(r)) <= T + 1e-12; }, ot,
          ox, oy, spec.p, p_in);
    }
  }
  throw ContractViolation("norm: unknown spec");
}

// ---------------------------------------------------------------------------
// Bessel / Riesz multipliers
// ---------------------------------------------------------------------------

namespace detail {

// Weight base for one column: pair (base, singular) where singular marks a
// zero base that makes negative powers blow up.
inline double weight_base(const MultiplierWeight& w, double xi, double q) {
  switch (w.kind) {
    case MultiplierWeight::Kind::J:
      return bracket(xi, q);
    case MultiplierWeight::Kind::I:
      return std::sqrt(xi * xi + q * q);
    case MultiplierWeight::Kind::Jx:
      return bracket(xi);
    case MultiplierWeight::Kind::Ix:
      return std::fabs(xi);
    case MultiplierWeight::Kind::Jy:
      return bracket(q);
    case MultiplierWeight::Kind::Iy:
      return std::fabs(q);
  }
  throw ContractViolation("apply_weight: unknown multiplier");
}

template <typename Field, typename At>
void apply_weight_columns(Field& out, const MultiplierWeight& w, At for_each_column) {
  const Grid& g = out.grid;
  for (int j = 0; j < g.Nx; ++j)
    for (int b = 0; b < g.Ny; ++b) {
      const double base = weight_base(w, g.xi(j), static_cast<double>(g.q(b)));
      double mult;
      if (base == 0.0 && w.s < 0.0) {
        mult = 0.0;  // only legal if the column is identically zero
        for_each_column(j, b, mult, /*singular=*/true);
      } else {
        mult = w.s == 0.0 ? 1.0 : std::pow(base, w.s);
        for_each_column(j, b, mult, /*singular=*/false);
      }
    }
}

}  // namespace detail

inline SpectralField apply_weight(const SpectralField& u, const MultiplierWeight& w) {
  SpectralField out = u;
  detail::apply_weight_columns(out, w, [&](int j, int b, double mult, bool singular) {
    if (singular && std::norm(out.at(j, b)) > 0.0)
      throw SingularWeightError("apply_weight: negative-order homogeneous weight on a zero frequency");
    out.at(j, b) *= mult;
  });
  return out;
}

inline SpaceTimeField apply_weight(const SpaceTimeField& u, const MultiplierWeight& w) {
  SpaceTimeField out = u;
  const Grid& g = u.grid;
  detail::apply_weight_columns(out, w, [&](int j, int b, double mult, bool singular) {
    for (int m = 0; m < g.Nt; ++m) {
      if (singular && std::norm(out.at(m, j, b)) > 0.0)
        throw SingularWeightError("apply_weight: negative-order homogeneous weight on a zero frequency");
      out.at(m, j, b) *= mult;
    }
  });
  return out;
}

// Upper-bound surrogate for the restriction norm: X_{s,b} of the field after
// multiplication by the canonical time cutoff (1 on [-delta, delta],
// supported in [-2 delta, 2 delta]).  Not an infimum over extensions.
inline double restriction_norm_surrogate(const SpaceTimeField& u, double s, double b,
                                         double delta) {
  const Grid& g = u.grid;
  if (!(delta > 0.0) || delta > 0.25 * g.Tw + 1e-12)
    throw ContractViolation("restriction_norm_surrogate: need 0 < delta <= Tw/4");
  SpaceTimeField cut = multiply_time_cutoff(u, delta);
  return norm(cut, NormSpec::xsb(s, b));
}

// ---------------------------------------------------------------------------
// Bilinear multiplier with the parabolic-gap symbol
// ---------------------------------------------------------------------------

// | |(xi1,q1)|^2 - |(xi2,q2)|^2 | ^ (1/2) in the dilated magnitude.
inline double mp_symbol(double xi1, double q1, double xi2, double q2) {
  const double a1 = 3.0 * xi1 * xi1 + q1 * q1;
  const double a2 = 3.0 * xi2 * xi2 + q2 * q2;
  return std::sqrt(std::fabs(a1 - a2));
}

// Exact sparse tuple sum; see the header comment for projection rules.
inline SpaceTimeField mp_apply(const SpaceTimeField& u, const SpaceTimeField& v) {
  const Grid& g = u.grid;
  if (!(g == v.grid)) throw ContractViolation("mp_apply: grid mismatch");

  struct Cell {
    int m, j, b;
    cplx val;
  };
  auto gather = [&](const SpaceTimeField& f) {
    std::vector<Cell> cells;
    for (int m = 0; m < g.Nt; ++m)
      for (int j = 0; j < g.Nx; ++j)
        for (int b = 0; b < g.Ny; ++b) {
          const cplx z = f.at(m, j, b);
          if (z != cplx(0.0, 0.0)) cells.push_back({m, j, b, z});
        }
    return cells;
  };
  const std::vector<Cell> cu = gather(u);
  const std::vector<Cell> cv = gather(v);

  SpaceTimeField out(g);
  out.real_field = false;
  const double two_pi = 2.0 * kPi;
  const double scale = g.dtau() * g.dxi() / (two_pi * two_pi * two_pi);

  for (const Cell& a : cu)
    for (const Cell& c : cv) {
      const long long q1 = g.q(a.b), q2 = g.q(c.b);
      const long long j1 = g.signed_index(a.j, g.Nx), j2 = g.signed_index(c.j, g.Nx);
      const long long j0 = j1 + j2, q0 = q1 + q2;
      if (j0 < -g.Nx / 2 || j0 >= g.Nx / 2) continue;  // outside stored band
      if (q0 < -g.Ny / 2 || q0 >= g.Ny / 2) continue;
      const double xi1 = g.dxi() * static_cast<double>(j1);
      const double xi2 = g.dxi() * static_cast<double>(j2);
      const double sym = mp_symbol(xi1, static_cast<double>(q1), xi2, static_cast<double>(q2));
      if (sym == 0.0) continue;
      // sigma_out = sigma1 + sigma2 - (phi0 - phi1 - phi2); nearest cell.
      const double phi0 = phase(g.dxi() * static_cast<double>(j0), static_cast<double>(q0));
      const double res = phi0 - phase(xi1, static_cast<double>(q1)) -
                         phase(xi2, static_cast<double>(q2));
      const double sig = g.sigma(a.m) + g.sigma(c.m) - res;
      const long long cellnum = std::llround(sig / g.dtau());
      if (cellnum < -g.Nt / 2 || cellnum >= g.Nt / 2) continue;  // modulation overflow
      const int m0 = Grid::storage_index(static_cast<int>(cellnum), g.Nt);
      const int jo = Grid::storage_index(static_cast<int>(j0), g.Nx);
      const int bo = Grid::storage_index(static_cast<int>(q0), g.Ny);
      out.at(m0, jo, bo) += sym * a.val * c.val * scale;
    }
  return out;
}

}  // namespace zklab
