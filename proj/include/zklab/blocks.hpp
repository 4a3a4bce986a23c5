#pragma once

// Sparse space-time convolution engine on resonance-exact lattices.
//
// Grids with Lx = 2*pi*lambda and dtau = 1/(lambda^3*W), lambda and W positive
// integers, make every dispersion value phi(xi_J, q_B) = xi*(xi^2+q^2) an exact
// integer multiple of dtau:
//
//     phi(J/lambda, B) / dtau = W * J * (J^2 + lambda^2*B^2)   (exact in int64).
//
// A field is stored as a set of occupied frequency columns (J,B), each carrying a
// contiguous envelope of samples C(m) of the space-time transform at
// tau = phi(xi_J,q_B) + m*dtau.  Pointwise products in physical space become
// convolutions of envelopes shifted by the integer resonance
//
//     R = [phi(out) - sum_i phi(i)] / dtau,
//
// so n-fold products are computed *exactly* (no time aliasing, no bandwidth
// truncation): the output lattice is virtual and unbounded.  Products are scanned
// column-by-column and reduced through a cell sink, which keeps memory flat even
// when resonance shifts scatter output cells over millions of lattice positions.
//
// The canonical smooth time cutoff enters through its sampled Fourier transform
// (CutoffKernel); fields assembled from such packets are exactly time-localized,
// which is the hypothesis under which the time-restricted norms are evaluated.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zklab/core.hpp"
#include "zklab/cutoff.hpp"
#include "zklab/fft.hpp"
#include "zklab/symbols.hpp"
#include "zklab/transforms.hpp"

namespace zklab {

struct ResonanceGrid {
  long long lambda = 1;  // Lx = 2*pi*lambda, dxi = 1/lambda
  long long W = 1;       // dtau = 1/(lambda^3*W)

  double dxi() const { return 1.0 / static_cast<double>(lambda); }
  double dtau() const {
    return 1.0 / static_cast<double>(lambda * lambda * lambda * W);
  }
  double Lx() const { return 2.0 * kPi * static_cast<double>(lambda); }
  double Tw() const { return 2.0 * kPi / dtau(); }

  void validate() const {
    if (lambda < 1 || W < 1)
      throw ContractViolation("ResonanceGrid: lambda and W must be positive integers");
  }

  double xi(long long J) const { return static_cast<double>(J) * dxi(); }

  // phi(xi_J, q_B) in units of dtau; exact.
  long long phase_cells(long long J, long long B) const {
    return W * J * (J * J + lambda * lambda * B * B);
  }
};

// One occupied frequency column: envelope samples C(m) for
// m = m_lo, ..., m_lo + env.size()-1, at tau = phi(xi_J, q_B) + m*dtau.
struct SparseColumn {
  long long J = 0;
  long long B = 0;
  long long m_lo = 0;
  std::vector<cplx> env;
};

struct SparseField {
  ResonanceGrid rg;
  std::vector<SparseColumn> cols;

  SparseColumn& add_column(long long J, long long B) {
    for (auto& c : cols)
      if (c.J == J && c.B == B) return c;
    cols.push_back(SparseColumn{J, B, 0, {}});
    return cols.back();
  }
  const SparseColumn* find_column(long long J, long long B) const {
    for (const auto& c : cols)
      if (c.J == J && c.B == B) return &c;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Sampled Fourier transform of the canonical time cutoff.
// ---------------------------------------------------------------------------

// Table of theta_delta^(sigma) at sigma = j*dtau, computed by one long FFT of
// theta over the period 2*pi/dtau and truncated where the tail drops below
// rel_tol relative to the peak.  theta is even, so the table is real and even.
class CutoffKernel {
 public:
  CutoffKernel(double delta, double dtau, double rel_tol = 1e-7)
      : delta_(delta), dtau_(dtau) {
    if (!(delta > 0.0) || !(dtau > 0.0))
      throw ContractViolation("CutoffKernel: delta and dtau must be positive");
    const double period = 2.0 * kPi / dtau;
    if (period < 4.0 * delta)
      throw ContractViolation("CutoffKernel: lattice period shorter than the cutoff support");
    // Oversample in time so that spectral aliasing sits far below rel_tol:
    // the first alias arrives at |sigma| = 2*pi/dt = M*dtau.
    std::size_t M = 1;
    const double want = std::max(8192.0, period * 512.0 / kPi);
    while (static_cast<double>(M) < want) M <<= 1;
    std::vector<cplx> buf(M);
    const double dt = period / static_cast<double>(M);
    for (std::size_t a = 0; a < M; ++a) {
      const double t = -0.5 * period + static_cast<double>(a) * dt;
      buf[a] = cplx(time_cutoff(t, delta), 0.0);
    }
    fft(buf, false);
    // Undo the half-period shift: bin j picks up a factor (-1)^j.
    std::vector<double> full(M / 2);
    for (std::size_t j = 0; j < M / 2; ++j) {
      const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
      full[j] = sgn * buf[j].real() * dt;
    }
    const double peak = std::abs(full[0]);
    std::size_t jmax = 0;
    for (std::size_t j = 0; j < M / 2; ++j)
      if (std::abs(full[j]) >= rel_tol * peak) jmax = j;
    tab_.assign(full.begin(), full.begin() + static_cast<long>(jmax) + 1);
  }

  double delta() const { return delta_; }
  double dtau() const { return dtau_; }
  long long half_width() const { return static_cast<long long>(tab_.size()) - 1; }
  double at_cell(long long j) const {
    const long long a = std::llabs(j);
    if (a >= static_cast<long long>(tab_.size())) return 0.0;
    return tab_[static_cast<std::size_t>(a)];
  }

 private:
  double delta_;
  double dtau_;
  std::vector<double> tab_;
};

// Appends coeff * theta_hat(sigma - mc*dtau) on column (J,B): the exact lattice
// transform of the wave packet coeff * theta(t) e^{i((phi+mc*dtau)t + xi x + q y)}
// when coeff is read as a spectral coefficient of the initial datum.
inline void append_packet(SparseField& u, const CutoffKernel& ker, long long J,
                          long long B, long long mc, cplx coeff) {
  auto& col = u.add_column(J, B);
  const long long w = ker.half_width();
  const long long lo = mc - w, hi = mc + w;
  if (col.env.empty()) {
    col.m_lo = lo;
    col.env.assign(static_cast<std::size_t>(hi - lo + 1), cplx(0.0, 0.0));
  } else {
    const long long cur_hi = col.m_lo + static_cast<long long>(col.env.size()) - 1;
    const long long nlo = std::min(col.m_lo, lo), nhi = std::max(cur_hi, hi);
    if (nlo != col.m_lo || nhi != cur_hi) {
      std::vector<cplx> grown(static_cast<std::size_t>(nhi - nlo + 1), cplx(0.0, 0.0));
      for (std::size_t i = 0; i < col.env.size(); ++i)
        grown[static_cast<std::size_t>(col.m_lo - nlo) + i] = col.env[i];
      col.env = std::move(grown);
      col.m_lo = nlo;
    }
  }
  for (long long m = lo; m <= hi; ++m)
    col.env[static_cast<std::size_t>(m - col.m_lo)] += coeff * ker.at_cell(m - mc);
}

// Lift of spectral data to theta(t) * (free evolution): per nonzero mode the
// envelope is u0_hat(ξ,q) * theta_hat(sigma).  The grid must sit on the same
// lambda as rg.
inline SparseField lift_localized_free_evolution(const SpectralField& u0,
                                                 const ResonanceGrid& rg,
                                                 const CutoffKernel& ker) {
  rg.validate();
  const Grid& g = u0.grid;
  if (std::abs(g.Lx - rg.Lx()) > 1e-9 * rg.Lx())
    throw ContractViolation("lift_localized_free_evolution: grid Lx does not match lattice");
  SparseField out;
  out.rg = rg;
  for (int j = 0; j < g.Nx; ++j) {
    for (int b = 0; b < g.Ny; ++b) {
      const cplx v = u0.mode(j, b);
      if (v == cplx(0.0, 0.0)) continue;
      append_packet(out, ker, Grid::signed_index(j, g.Nx), Grid::signed_index(b, g.Ny), 0, v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Field-level helpers.
// ---------------------------------------------------------------------------

inline void scale_columns(SparseField& u,
                          const std::function<double(double xi, long long q)>& w) {
  for (auto& c : u.cols) {
    const double f = w(u.rg.xi(c.J), c.B);
    for (auto& v : c.env) v *= f;
  }
}

// X_{s,b}-type norm with an optional extra frequency weight:
//   sqrt( sum  [w(xi,q) <(xi,q)>^s <sigma>^b]^2 |C|^2 * dtau*dxi/(2pi)^3 ).
inline double xsb_norm(const SparseField& u, double s, double b,
                       const std::function<double(double, long long)>& w = nullptr) {
  long double acc = 0.0L;
  for (const auto& c : u.cols) {
    const double xi = u.rg.xi(c.J);
    double cw = bracket(xi, static_cast<double>(c.B));
    cw = std::pow(cw, s);
    if (w) cw *= w(xi, c.B);
    if (cw == 0.0) continue;
    for (std::size_t i = 0; i < c.env.size(); ++i) {
      const double sig = static_cast<double>(c.m_lo + static_cast<long long>(i)) * u.rg.dtau();
      const double bw = std::pow(bracket(sig), b);
      const double a = std::abs(c.env[i]) * cw * bw;
      acc += static_cast<long double>(a) * a;
    }
  }
  const double meas = u.rg.dtau() * u.rg.dxi() / std::pow(2.0 * kPi, 3);
  return std::sqrt(static_cast<double>(acc) * meas);
}

inline double l2_norm(const SparseField& u) { return xsb_norm(u, 0.0, 0.0); }

// ---------------------------------------------------------------------------
// Products.
// ---------------------------------------------------------------------------

// n-fold product specification.  Either `factors` holds n distinct fields, or
// `base`+`power` requests the diagonal product of one field with itself (the
// tuple enumeration then runs over multisets with multinomial weights, which is
// exact and much cheaper).  column_weight gates/weights *output* columns before
// any envelope work; tuple_weight multiplies each tuple (used for bilinear
// Fourier multipliers).
struct ProductSpec {
  std::vector<const SparseField*> factors;
  const SparseField* base = nullptr;
  int power = 0;

  std::function<double(double xi, long long q)> column_weight;
  std::function<double(const std::vector<const SparseColumn*>&)> tuple_weight;

  int arity() const {
    return base ? power : static_cast<int>(factors.size());
  }
  const ResonanceGrid& rg() const {
    return base ? base->rg : factors.at(0)->rg;
  }
  void validate() const {
    if (base) {
      if (power < 2) throw ContractViolation("ProductSpec: power must be >= 2");
      if (!factors.empty())
        throw ContractViolation("ProductSpec: choose either factors or base^power");
    } else {
      if (factors.size() < 2)
        throw ContractViolation("ProductSpec: need at least two factors");
      for (const auto* f : factors) {
        if (f->rg.lambda != factors[0]->rg.lambda || f->rg.W != factors[0]->rg.W)
          throw ContractViolation("ProductSpec: factors live on different lattices");
      }
    }
  }
};

using CellSink = std::function<void(long long J, long long B, long long m, cplx v)>;

namespace detail {

struct TupleRef {
  long long key;            // packed output column
  std::uint32_t idx;        // flattened tuple index (distinct) or multiset id
  double mult;              // multinomial weight (diagonal mode), else 1
};

inline long long pack_col(long long J, long long B) {
  // Columns stay well within +-2^20 for every configuration we run.
  return (J + (1LL << 30)) * (1LL << 31) + (B + (1LL << 30));
}
inline void unpack_col(long long key, long long& J, long long& B) {
  B = key % (1LL << 31) - (1LL << 30);
  J = key / (1LL << 31) - (1LL << 30);
}

inline void conv_into(const std::vector<cplx>& a, const std::vector<cplx>& b,
                      std::vector<cplx>& out) {
  if (a.empty() || b.empty()) {
    out.clear();
    return;
  }
  out.assign(a.size() + b.size() - 1, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx ai = a[i];
    if (ai == cplx(0.0, 0.0)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
}

// Decodes tuple idx into per-factor column indices (mixed radix for distinct
// factors; combinadic-free direct storage is avoided by re-enumerating
// multisets in the same deterministic order).
}  // namespace detail

// Enumerates every output cell of the product exactly once, grouped by output
// column (columns visited in ascending packed order), and feeds them to sink.
// Emitted values carry the full physical normalization
//   (dtau*dxi/(2pi)^3)^(n-1) * sum_tuples conv(envelopes).
inline void product_scan(const ProductSpec& spec, const CellSink& sink) {
  spec.validate();
  const ResonanceGrid& rg = spec.rg();
  const int n = spec.arity();

  // Phase 1: enumerate tuples cheaply (columns only), bucket by output column.
  std::vector<detail::TupleRef> tuples;
  std::vector<const SparseColumn*> pick(static_cast<std::size_t>(n));

  if (!spec.base) {
    std::vector<std::uint32_t> radix(static_cast<std::size_t>(n));
    std::uint64_t total = 1;
    for (int d = 0; d < n; ++d) {
      radix[static_cast<std::size_t>(d)] =
          static_cast<std::uint32_t>(spec.factors[static_cast<std::size_t>(d)]->cols.size());
      if (radix[static_cast<std::size_t>(d)] == 0) return;
      total *= radix[static_cast<std::size_t>(d)];
    }
    if (total > (1ULL << 31))
      throw ContractViolation("product_scan: tuple space too large");
    tuples.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t rem = idx;
      long long J0 = 0, B0 = 0;
      for (int d = 0; d < n; ++d) {
        const auto& cols = spec.factors[static_cast<std::size_t>(d)]->cols;
        const auto& c = cols[rem % radix[static_cast<std::size_t>(d)]];
        rem /= radix[static_cast<std::size_t>(d)];
        J0 += c.J;
        B0 += c.B;
      }
      double w = 1.0;
      if (spec.column_weight) {
        w = spec.column_weight(rg.xi(J0), B0);
        if (w == 0.0) continue;
      }
      tuples.push_back({detail::pack_col(J0, B0), static_cast<std::uint32_t>(idx), 1.0});
    }
  } else {
    // Non-decreasing index tuples with multinomial multiplicities.
    const auto& cols = spec.base->cols;
    const int nc = static_cast<int>(cols.size());
    if (nc == 0) return;
    std::vector<int> ix(static_cast<std::size_t>(n), 0);
    std::vector<double> fact(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i)
      fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;
    std::uint32_t msid = 0;
    while (true) {
      long long J0 = 0, B0 = 0;
      for (int d = 0; d < n; ++d) {
        J0 += cols[static_cast<std::size_t>(ix[static_cast<std::size_t>(d)])].J;
        B0 += cols[static_cast<std::size_t>(ix[static_cast<std::size_t>(d)])].B;
      }
      double keep = 1.0;
      if (spec.column_weight) keep = spec.column_weight(rg.xi(J0), B0);
      if (keep != 0.0) {
        double mult = fact[static_cast<std::size_t>(n)];
        int run = 1;
        for (int d = 1; d <= n; ++d) {
          if (d < n && ix[static_cast<std::size_t>(d)] == ix[static_cast<std::size_t>(d - 1)]) {
            ++run;
          } else {
            mult /= fact[static_cast<std::size_t>(run)];
            run = 1;
          }
        }
        tuples.push_back({detail::pack_col(J0, B0), msid, mult});
      }
      ++msid;
      int d = n - 1;
      while (d >= 0 && ix[static_cast<std::size_t>(d)] == nc - 1) --d;
      if (d < 0) break;
      const int v = ix[static_cast<std::size_t>(d)] + 1;
      for (int e = d; e < n; ++e) ix[static_cast<std::size_t>(e)] = v;
    }
  }

  std::sort(tuples.begin(), tuples.end(),
            [](const detail::TupleRef& a, const detail::TupleRef& b) {
              return a.key != b.key ? a.key < b.key : a.idx < b.idx;
            });

  const double scale =
      std::pow(rg.dtau() * rg.dxi() / std::pow(2.0 * kPi, 3), n - 1);

  // Phase 2: per output column, accumulate envelope convolutions into a local
  // map, then drain it through the sink.
  std::map<long long, cplx> acc;
  std::vector<cplx> conv_a, conv_b;
  std::size_t t0 = 0;
  while (t0 < tuples.size()) {
    std::size_t t1 = t0;
    while (t1 < tuples.size() && tuples[t1].key == tuples[t0].key) ++t1;
    acc.clear();
    for (std::size_t t = t0; t < t1; ++t) {
      // Decode the tuple's columns.
      if (!spec.base) {
        std::uint64_t rem = tuples[t].idx;
        for (int d = 0; d < n; ++d) {
          const auto& cols = spec.factors[static_cast<std::size_t>(d)]->cols;
          pick[static_cast<std::size_t>(d)] = &cols[rem % cols.size()];
          rem /= cols.size();
        }
      } else {
        // Re-walk the multiset enumeration up to id.  Cheap relative to the
        // envelope convolutions below only for small column counts, so decode
        // directly instead: the id is the rank in the same loop order.
        const auto& cols = spec.base->cols;
        const int nc = static_cast<int>(cols.size());
        std::vector<int> ix(static_cast<std::size_t>(n), 0);
        std::uint32_t rank = tuples[t].idx;
        // Mixed-radix walk: advance the odometer `rank` times is O(rank); use
        // the direct combinatorial unranking instead.
        std::uint32_t r = rank;
        int lo = 0;
        for (int d = 0; d < n; ++d) {
          for (int c = lo; c < nc; ++c) {
            // count multisets of length n-d-1 from alphabet [c, nc)
            const int m = n - d - 1;
            const int a = nc - c;
            // C(a+m-1, m)
            double cnt = 1.0;
            for (int i = 1; i <= m; ++i)
              cnt = cnt * (a - 1 + i) / i;
            const auto icnt = static_cast<std::uint32_t>(std::llround(cnt));
            if (r < icnt) {
              ix[static_cast<std::size_t>(d)] = c;
              lo = c;
              break;
            }
            r -= icnt;
          }
        }
        for (int d = 0; d < n; ++d)
          pick[static_cast<std::size_t>(d)] = &cols[static_cast<std::size_t>(ix[static_cast<std::size_t>(d)])];
      }

      double tw = tuples[t].mult;
      if (spec.tuple_weight) tw *= spec.tuple_weight(pick);
      if (tw == 0.0) continue;

      long long J0 = 0, B0 = 0, mlo = 0, phase_sum = 0;
      for (int d = 0; d < n; ++d) {
        J0 += pick[static_cast<std::size_t>(d)]->J;
        B0 += pick[static_cast<std::size_t>(d)]->B;
        mlo += pick[static_cast<std::size_t>(d)]->m_lo;
        phase_sum += rg.phase_cells(pick[static_cast<std::size_t>(d)]->J,
                                    pick[static_cast<std::size_t>(d)]->B);
      }
      const long long R = rg.phase_cells(J0, B0) - phase_sum;
      const long long start = mlo - R;

      const std::vector<cplx>* cur = &pick[0]->env;
      for (int d = 1; d < n; ++d) {
        detail::conv_into(*cur, pick[static_cast<std::size_t>(d)]->env, conv_b);
        std::swap(conv_a, conv_b);
        cur = &conv_a;
      }
      const double w = tw * scale;
      for (std::size_t i = 0; i < cur->size(); ++i) {
        const cplx v = (*cur)[i];
        if (v != cplx(0.0, 0.0)) acc[start + static_cast<long long>(i)] += w * v;
      }
    }
    long long J0, B0;
    detail::unpack_col(tuples[t0].key, J0, B0);
    double colw = 1.0;
    if (spec.column_weight) colw = spec.column_weight(rg.xi(J0), B0);
    for (const auto& kv : acc)
      if (kv.second != cplx(0.0, 0.0)) sink(J0, B0, kv.first, colw * kv.second);
    t0 = t1;
  }
}

// L^2_{t,x,y} norm of the product (column_weight applied as a multiplier).
inline double product_l2(const ProductSpec& spec) {
  long double acc = 0.0L;
  product_scan(spec, [&](long long, long long, long long, cplx v) {
    const double a = std::abs(v);
    acc += static_cast<long double>(a) * a;
  });
  const ResonanceGrid& rg = spec.rg();
  const double meas = rg.dtau() * rg.dxi() / std::pow(2.0 * kPi, 3);
  return std::sqrt(static_cast<double>(acc) * meas);
}

// X_{s,b}-type norm of the product with an optional extra frequency weight.
inline double product_xsb(const ProductSpec& spec, double s, double b,
                          const std::function<double(double, long long)>& w = nullptr) {
  const ResonanceGrid& rg = spec.rg();
  long double acc = 0.0L;
  product_scan(spec, [&](long long J, long long B, long long m, cplx v) {
    const double xi = rg.xi(J);
    double cw = std::pow(bracket(xi, static_cast<double>(B)), s);
    if (w) cw *= w(xi, B);
    if (cw == 0.0) return;
    const double sig = static_cast<double>(m) * rg.dtau();
    const double a = std::abs(v) * cw * std::pow(bracket(sig), b);
    acc += static_cast<long double>(a) * a;
  });
  const double meas = rg.dtau() * rg.dxi() / std::pow(2.0 * kPi, 3);
  return std::sqrt(static_cast<double>(acc) * meas);
}

// Materializes a product as a SparseField (contiguous envelopes per column).
// Guarded: refuses columns whose resonance spread exceeds max_span cells.
inline SparseField product_collect(const ProductSpec& spec,
                                   long long max_span = 1 << 20) {
  SparseField out;
  out.rg = spec.rg();
  std::map<long long, std::map<long long, cplx>> stage;
  product_scan(spec, [&](long long J, long long B, long long m, cplx v) {
    stage[detail::pack_col(J, B)][m] += v;
  });
  for (const auto& kv : stage) {
    long long J, B;
    detail::unpack_col(kv.first, J, B);
    const auto& cells = kv.second;
    const long long lo = cells.begin()->first;
    const long long hi = cells.rbegin()->first;
    if (hi - lo + 1 > max_span)
      throw ContractViolation("product_collect: column span exceeds guard");
    SparseColumn col;
    col.J = J;
    col.B = B;
    col.m_lo = lo;
    col.env.assign(static_cast<std::size_t>(hi - lo + 1), cplx(0.0, 0.0));
    for (const auto& cv : cells)
      col.env[static_cast<std::size_t>(cv.first - lo)] = cv.second;
    out.cols.push_back(std::move(col));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Zero-momentum contractions (mixed L^p_{t,x} L^2_y norms).
// ---------------------------------------------------------------------------
//
// For a real field u, G^2(t,x) := int_T |u|^2 dy has 2D transform equal to the
// B=0 columns of u*u.  Then
//   ||G||_{L^4_{t,x}}^4 = (dtau*dxi)   (2pi)^{-2} * sum_{c1+c2=0} H(c1)H(c2)
//   ||G||_{L^6_{t,x}}^6 = (dtau*dxi)^2 (2pi)^{-4} * sum_{c1+c2+c3=0} H(c1)H(c2)H(c3)
// with cell sums taken over absolute lattice positions (shear included).

inline cplx zero_momentum_pair_sum(const SparseField& H) {
  cplx acc(0.0, 0.0);
  for (const auto& c : H.cols) {
    if (c.B != 0) continue;
    const SparseColumn* d = H.find_column(-c.J, 0);
    if (!d) continue;
    // absolute tau-cell of (c, m) is phase_cells(J,0)+m; partner needs -m.
    for (std::size_t i = 0; i < c.env.size(); ++i) {
      const long long m = c.m_lo + static_cast<long long>(i);
      const long long m2 = -m;
      if (m2 < d->m_lo || m2 >= d->m_lo + static_cast<long long>(d->env.size())) continue;
      acc += c.env[i] * d->env[static_cast<std::size_t>(m2 - d->m_lo)];
    }
  }
  return acc;
}

inline cplx zero_momentum_triple_sum(const SparseField& H) {
  cplx acc(0.0, 0.0);
  std::vector<cplx> pairconv;
  for (const auto& c1 : H.cols) {
    if (c1.B != 0) continue;
    for (const auto& c2 : H.cols) {
      if (c2.B != 0) continue;
      const SparseColumn* c3 = H.find_column(-c1.J - c2.J, 0);
      if (!c3) continue;
      detail::conv_into(c1.env, c2.env, pairconv);
      // the pair's absolute cell at conv index i is
      //   phase(J1)+phase(J2) + c1.m_lo+c2.m_lo + i;
      // the partner cell needs absolute -(that), i.e. envelope index
      //   m3 = -(abs) - phase(J3)   relative to c3.m_lo.
      const long long base =
          H.rg.phase_cells(c1.J, 0) + H.rg.phase_cells(c2.J, 0) + c1.m_lo + c2.m_lo;
      const long long ph3 = H.rg.phase_cells(-c1.J - c2.J, 0);
      for (std::size_t i = 0; i < pairconv.size(); ++i) {
        if (pairconv[i] == cplx(0.0, 0.0)) continue;
        const long long m3 = -(base + static_cast<long long>(i)) - ph3;
        if (m3 < c3->m_lo || m3 >= c3->m_lo + static_cast<long long>(c3->env.size()))
          continue;
        acc += pairconv[i] * c3->env[static_cast<std::size_t>(m3 - c3->m_lo)];
      }
    }
  }
  return acc;
}

// ||u||_{L^p_{t,x} L^2_y} for even p in {4,6}, computed exactly through the
// y-averaged square H = (u*u)|_{B=0}.
inline double mixed_lp_l2y_norm(const SparseField& u, int p) {
  if (p != 4 && p != 6)
    throw ContractViolation("mixed_lp_l2y_norm: p must be 4 or 6");
  ProductSpec ps;
  ps.base = &u;
  ps.power = 2;
  ps.column_weight = [](double, long long q) { return q == 0 ? 1.0 : 0.0; };
  SparseField H = product_collect(ps);
  const double dxi = u.rg.dxi(), dtau = u.rg.dtau();
  if (p == 4) {
    const double s =
        std::real(zero_momentum_pair_sum(H)) * dtau * dxi / std::pow(2.0 * kPi, 2);
    return std::pow(std::max(s, 0.0), 0.25);
  }
  const double s = std::real(zero_momentum_triple_sum(H)) *
                   std::pow(dtau * dxi, 2) / std::pow(2.0 * kPi, 4);
  return std::pow(std::max(s, 0.0), 1.0 / 6.0);
}

// ---------------------------------------------------------------------------
// Time-slice quadrature for fractional exponents.
// ---------------------------------------------------------------------------

struct SliceNormSpec {
  double p = 4.0;
  bool linf_x_l2y = false;  // true: L^p_t L^inf_x L^2_y instead of L^p_{t,x,y}
  double delta = 1.0;       // integrand supported in [-2 delta, 2 delta]
  int oversample = 8;       // Simpson nodes per oscillation at the top frequency
};

// Simpson quadrature in t of grid-resolved spatial norms.  Intended for fields
// assembled from canonical packets (compact time support); accuracy is set by
// the oversampling factor relative to the field's top time frequency.
inline double slice_time_norm(const SparseField& u, const SliceNormSpec& sn) {
  if (!(sn.p >= 1.0)) throw ContractViolation("slice_time_norm: p must be >= 1");
  if (u.cols.empty()) return 0.0;
  long long Jmax = 1, Bmax = 1;
  double freq_top = 1.0;
  for (const auto& c : u.cols) {
    Jmax = std::max(Jmax, std::llabs(c.J));
    Bmax = std::max(Bmax, std::llabs(c.B));
    const double lo = static_cast<double>(u.rg.phase_cells(c.J, c.B) + c.m_lo);
    const double hi = lo + static_cast<double>(c.env.size()) - 1.0;
    freq_top = std::max({freq_top, std::abs(lo), std::abs(hi)});
  }
  freq_top *= u.rg.dtau();
  int nx = 8, ny = 8;
  while (nx < 4 * (2 * Jmax + 1)) nx <<= 1;
  while (ny < 4 * (2 * Bmax + 1)) ny <<= 1;

  const double halfspan = 2.0 * sn.delta;
  long long M = static_cast<long long>(
      std::ceil(static_cast<double>(sn.oversample) * sn.p * freq_top * halfspan / kPi));
  M = std::max<long long>(M, 128);
  if (M % 2 == 1) ++M;
  if (M > 2000000)
    throw ContractViolation("slice_time_norm: field too oscillatory for slice quadrature");

  const double h = 2.0 * halfspan / static_cast<double>(M);
  const double dx = u.rg.Lx() / nx, dy = 2.0 * kPi / ny;
  const double spec_scale = u.rg.dtau() * u.rg.dxi() / std::pow(2.0 * kPi, 3);

  std::vector<cplx> plane(static_cast<std::size_t>(nx) * ny);
  long double acc = 0.0L;
  for (long long a = 0; a <= M; ++a) {
    const double t = -halfspan + static_cast<double>(a) * h;
    std::fill(plane.begin(), plane.end(), cplx(0.0, 0.0));
    for (const auto& c : u.cols) {
      cplx s(0.0, 0.0);
      for (std::size_t i = 0; i < c.env.size(); ++i) {
        const double tau =
            static_cast<double>(u.rg.phase_cells(c.J, c.B) + c.m_lo +
                                static_cast<long long>(i)) *
            u.rg.dtau();
        s += c.env[i] * cplx(std::cos(tau * t), std::sin(tau * t));
      }
      const int jj = Grid::storage_index(static_cast<int>(c.J), nx);
      const int bb = Grid::storage_index(static_cast<int>(c.B), ny);
      plane[static_cast<std::size_t>(jj) * ny + bb] += s;
    }
    // inverse 2D FFT on the local plane
    for (int j = 0; j < nx; ++j)
      fft(plane.data() + static_cast<std::size_t>(j) * ny, static_cast<std::size_t>(ny), true);
    fft_strided(plane.data(), static_cast<std::size_t>(nx), static_cast<std::size_t>(ny),
                static_cast<std::size_t>(ny), 1, true);

    double node;
    if (!sn.linf_x_l2y) {
      long double sum = 0.0L;
      for (const auto& v : plane) {
        const double m = std::abs(v) * spec_scale;
        sum += std::pow(static_cast<long double>(m), static_cast<long double>(sn.p));
      }
      node = static_cast<double>(sum) * dx * dy;
    } else {
      double best = 0.0;
      for (int j = 0; j < nx; ++j) {
        long double sum = 0.0L;
        for (int b = 0; b < ny; ++b) {
          const double m = std::abs(plane[static_cast<std::size_t>(j) * ny + b]) * spec_scale;
          sum += static_cast<long double>(m) * m;
        }
        best = std::max(best, static_cast<double>(sum) * dy);
      }
      node = std::pow(best, sn.p / 2.0);
    }
    const double sw = (a == 0 || a == M) ? 1.0 : (a % 2 == 1 ? 4.0 : 2.0);
    acc += static_cast<long double>(sw) * node;
  }
  return std::pow(static_cast<double>(acc) * h / 3.0, 1.0 / sn.p);
}

// ---------------------------------------------------------------------------
// Dense conversions.
// ---------------------------------------------------------------------------

inline ResonanceGrid lattice_from_grid(const Grid& g) {
  ResonanceGrid rg;
  rg.lambda = std::llround(g.Lx / (2.0 * kPi));
  if (rg.lambda < 1 || std::abs(g.Lx - 2.0 * kPi * static_cast<double>(rg.lambda)) > 1e-9 * g.Lx)
    throw ContractViolation("lattice_from_grid: grid needs Lx = 2*pi*lambda");
  const double dtau = g.dtau();
  const double l3 = static_cast<double>(rg.lambda * rg.lambda * rg.lambda);
  rg.W = std::llround(1.0 / (l3 * dtau));
  if (rg.W < 1 || std::abs(dtau * l3 * static_cast<double>(rg.W) - 1.0) > 1e-9)
    throw ContractViolation("lattice_from_grid: grid needs dtau = 1/(lambda^3 W)");
  return rg;
}

inline SparseField sparse_from_dense(const SpaceTimeField& u) {
  SparseField out;
  out.rg = lattice_from_grid(u.grid);
  const Grid& g = u.grid;
  for (int j = 0; j < g.Nx; ++j) {
    for (int b = 0; b < g.Ny; ++b) {
      bool occupied = false;
      int m_first = 0, m_last = 0;
      for (int m = 0; m < g.Nt; ++m) {
        if (u.at(m, j, b) != cplx(0.0, 0.0)) {
          const int sm = Grid::signed_index(m, g.Nt);
          if (!occupied || sm < m_first) m_first = sm;
          if (!occupied || sm > m_last) m_last = sm;
          occupied = true;
        }
      }
      if (!occupied) continue;
      SparseColumn col;
      col.J = Grid::signed_index(j, g.Nx);
      col.B = Grid::signed_index(b, g.Ny);
      col.m_lo = m_first;
      col.env.assign(static_cast<std::size_t>(m_last - m_first + 1), cplx(0.0, 0.0));
      for (int m = 0; m < g.Nt; ++m) {
        const int sm = Grid::signed_index(m, g.Nt);
        if (sm < m_first || sm > m_last) continue;
        col.env[static_cast<std::size_t>(sm - m_first)] = u.at(m, j, b);
      }
      out.cols.push_back(std::move(col));
    }
  }
  return out;
}

inline SpaceTimeField dense_from_sparse(const SparseField& u, const Grid& g) {
  const ResonanceGrid check = lattice_from_grid(g);
  if (check.lambda != u.rg.lambda || check.W != u.rg.W)
    throw ContractViolation("dense_from_sparse: lattice mismatch");
  SpaceTimeField out(g);
  for (const auto& c : u.cols) {
    if (2 * std::llabs(c.J) >= g.Nx || 2 * std::llabs(c.B) >= g.Ny)
      throw ContractViolation("dense_from_sparse: spatial band exceeds grid");
    const long long hi = c.m_lo + static_cast<long long>(c.env.size()) - 1;
    if (2 * std::llabs(c.m_lo) >= g.Nt || 2 * std::llabs(hi) >= g.Nt)
      throw ContractViolation("dense_from_sparse: modulation band exceeds grid");
    const int jj = Grid::storage_index(static_cast<int>(c.J), g.Nx);
    const int bb = Grid::storage_index(static_cast<int>(c.B), g.Ny);
    for (std::size_t i = 0; i < c.env.size(); ++i) {
      const int mm =
          Grid::storage_index(static_cast<int>(c.m_lo + static_cast<long long>(i)), g.Nt);
      out.at(mm, jj, bb) += c.env[i];
    }
  }
  // A field is real iff its transform is Hermitian under (tau,xi,q) -> -(tau,xi,q);
  // on the sheared lattice that maps cell (m,j,b) to (-m,-j,-b).
  bool herm = true;
  for (int m = 0; m < g.Nt && herm; ++m) {
    const int mm = Grid::storage_index(-Grid::signed_index(m, g.Nt), g.Nt);
    for (int j = 0; j < g.Nx && herm; ++j) {
      const int jj = Grid::storage_index(-Grid::signed_index(j, g.Nx), g.Nx);
      for (int b = 0; b < g.Ny; ++b) {
        const int bb = Grid::storage_index(-Grid::signed_index(b, g.Ny), g.Ny);
        const cplx v = out.at(m, j, b);
        if (v == cplx(0.0, 0.0)) continue;
        if (std::abs(out.at(mm, jj, bb) - std::conj(v)) >
            1e-12 * (1.0 + std::abs(v))) {
          herm = false;
          break;
        }
      }
    }
  }
  out.real_field = herm;
  return out;
}

}  // namespace zklab
