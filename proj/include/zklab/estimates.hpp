#pragma once

// Estimate catalogue and quotient harness.
//
// Every inequality is tested as lhs/rhs on concrete fields.  Constants are not
// testable, exponents are: sweeps fit log2(max quotient) against log2(N) and
// compare the slope with the rhs's explicit epsilon allowance.
//
// Route map (all lhs time-localized by the canonical cutoff, delta = 1):
//   even L^p of real fields      p = 4, 6 via exact sparse convolution:
//                                ||u||_4^2 = ||u^2||_2,  ||u||_6^3 = ||u^3||_2
//   bilinear multipliers         exact pair convolution with a per-tuple symbol
//   mixed L^p_{t,x} L^2_y        y-averaged square + zero-momentum contraction
//   fractional p                 time-slice Simpson quadrature (small shells)
//   X_{s,b} norms                exact lattice sums
//
// The explicit failure witness u_N = (delta_{q,N} + delta_{q,-N})
// chi_[-1,1](xi) chi_[-1,1](tau - phi) has closed-form X_{s,b} norms and an
// exactly N-independent L^4 norm on resonance-exact lattices (the channel
// phases differ by rigid integer lattice shifts only).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "zklab/blocks.hpp"
#include "zklab/core.hpp"
#include "zklab/ensembles.hpp"
#include "zklab/fit.hpp"
#include "zklab/projectors.hpp"
#include "zklab/rng.hpp"
#include "zklab/symbols.hpp"

namespace zklab {

enum class EstimateId {
  L4Main,
  L4Old,
  L4Interp,
  MPBilinear,
  MPDual,
  SchrL4,
  SchrL6,
  SchrLp,
  AiryL6,
  AiryEndpoint,
  AiryLp,
  AiryL6L2y,
  AiryL4L2y,
  OptLp,
  OptL6,
  L5Schr,
  L5Airy,
  L5Opt,
  BilinRefine,
  BilinRefineDual,
  MultiGzk,
  TriMzk,
};

inline const char* estimate_name(EstimateId id) {
  switch (id) {
    case EstimateId::L4Main: return "L4-main";
    case EstimateId::L4Old: return "L4-old";
    case EstimateId::L4Interp: return "L4-interp";
    case EstimateId::MPBilinear: return "MP-bilinear";
    case EstimateId::MPDual: return "MP-dual";
    case EstimateId::SchrL4: return "Schr-L4";
    case EstimateId::SchrL6: return "Schr-L6";
    case EstimateId::SchrLp: return "Schr-Lp";
    case EstimateId::AiryL6: return "Airy-L6";
    case EstimateId::AiryEndpoint: return "Airy-endpoint";
    case EstimateId::AiryLp: return "Airy-Lp";
    case EstimateId::AiryL6L2y: return "Airy-L6-L2y";
    case EstimateId::AiryL4L2y: return "Airy-L4-L2y";
    case EstimateId::OptLp: return "Opt-Lp";
    case EstimateId::OptL6: return "Opt-L6";
    case EstimateId::L5Schr: return "L5-Schr";
    case EstimateId::L5Airy: return "L5-Airy";
    case EstimateId::L5Opt: return "L5-Opt";
    case EstimateId::BilinRefine: return "Bilin-refine";
    case EstimateId::BilinRefineDual: return "Bilin-refine-dual";
    case EstimateId::MultiGzk: return "Multi-gZK";
    case EstimateId::TriMzk: return "Tri-mZK";
  }
  return "?";
}

inline EstimateId estimate_from_name(const std::string& s) {
  static const EstimateId all[] = {
      EstimateId::L4Main,      EstimateId::L4Old,        EstimateId::L4Interp,
      EstimateId::MPBilinear,  EstimateId::MPDual,       EstimateId::SchrL4,
      EstimateId::SchrL6,      EstimateId::SchrLp,       EstimateId::AiryL6,
      EstimateId::AiryEndpoint, EstimateId::AiryLp,      EstimateId::AiryL6L2y,
      EstimateId::AiryL4L2y,   EstimateId::OptLp,        EstimateId::OptL6,
      EstimateId::L5Schr,      EstimateId::L5Airy,       EstimateId::L5Opt,
      EstimateId::BilinRefine, EstimateId::BilinRefineDual, EstimateId::MultiGzk,
      EstimateId::TriMzk};
  for (EstimateId id : all)
    if (s == estimate_name(id)) return id;
  throw ContractViolation("estimate_from_name: unknown estimate id '" + s + "'");
}

// Estimates whose input is initial data (the lhs carries the free evolution).
inline bool estimate_takes_data(EstimateId id) {
  return id == EstimateId::SchrL4 || id == EstimateId::SchrL6 ||
         id == EstimateId::AiryL6 || id == EstimateId::AiryEndpoint;
}

// Estimates evaluated by slice quadrature (fractional exponents): ensembles are
// kept at small shells for these.
inline bool estimate_uses_slices(EstimateId id) {
  return id == EstimateId::L4Interp || id == EstimateId::SchrLp ||
         id == EstimateId::AiryLp || id == EstimateId::AiryEndpoint ||
         id == EstimateId::OptLp || id == EstimateId::L5Schr ||
         id == EstimateId::L5Airy || id == EstimateId::L5Opt;
}

struct EstimateParams {
  double s = 0.0;      // rhs regularity where the estimate has a free s
  double b = 0.55;     // rhs modulation exponent where "b > 1/2" is quantified
  double eps = 0.05;   // the paper-side "0+"
  double p = 4.0;      // Lebesgue exponent for the p-family
  double alpha = 0.0;  // refinement parameter in [0,1]
  int k = 2;           // nonlinearity degree for the multilinear family
};

inline int estimate_arity(EstimateId id, const EstimateParams& prm) {
  switch (id) {
    case EstimateId::MPBilinear:
    case EstimateId::MPDual:
    case EstimateId::BilinRefine:
    case EstimateId::BilinRefineDual:
      return 2;
    case EstimateId::MultiGzk:
      return prm.k + 1;
    case EstimateId::TriMzk:
      return 3;
    default:
      return 1;
  }
}

// Growth allowance in N that the rhs weight explicitly grants (the fitted
// max-quotient slope must stay below this plus the harness tolerance).
inline double rhs_eps_exponent(EstimateId id, const EstimateParams& prm) {
  switch (id) {
    case EstimateId::L4Main:
    case EstimateId::L4Interp:
    case EstimateId::OptL6:
    case EstimateId::L5Schr:
    case EstimateId::L5Airy:
    case EstimateId::L5Opt:
    case EstimateId::BilinRefine:
    case EstimateId::BilinRefineDual:
    case EstimateId::SchrL6:
      return prm.eps;
    case EstimateId::SchrLp:
      return (1.5 - 3.0 / prm.p) * prm.eps;
    case EstimateId::OptLp:
      return (0.5 - 1.0 / prm.p) * prm.eps;
    default:
      return 0.0;
  }
}

struct QuotientResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double quotient = 0.0;
};

struct QuotientRow {
  EstimateId id = EstimateId::L4Main;
  EstimateParams prm;
  long long N = 0;
  long long L = 0;
  unsigned long long seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double quotient = 0.0;
};

namespace detail {

inline std::function<double(double, long long)> w_jx(double s) {
  return [s](double xi, long long) { return std::pow(bracket(xi), s); };
}
inline std::function<double(double, long long)> w_jy(double s) {
  return [s](double, long long q) { return std::pow(bracket(static_cast<double>(q)), s); };
}
inline std::function<double(double, long long)> w_ix(double s) {
  return [s](double xi, long long) { return std::pow(std::abs(xi), s); };
}
inline std::function<double(double, long long)> w_iy(double s) {
  return [s](double, long long q) { return std::pow(std::abs(static_cast<double>(q)), s); };
}

inline double lp_even_norm(const SparseField& u, int p) {
  ProductSpec ps;
  ps.base = &u;
  if (p == 4) {
    ps.power = 2;
    return std::sqrt(product_l2(ps));
  }
  if (p == 6) {
    ps.power = 3;
    return std::cbrt(product_l2(ps));
  }
  throw ContractViolation("lp_even_norm: p must be 4 or 6");
}

inline double slice_lp(const SparseField& u, double p, bool linf_x_l2y = false) {
  SliceNormSpec sn;
  sn.p = p;
  sn.linf_x_l2y = linf_x_l2y;
  return slice_time_norm(u, sn);
}

inline double weighted_l2_data(const SpectralField& u0,
                               const std::function<double(double, long long)>& w) {
  const Grid& g = u0.grid;
  long double acc = 0.0L;
  for (int j = 0; j < g.Nx; ++j) {
    const double xi = g.xi(j);
    for (int b = 0; b < g.Ny; ++b) {
      const cplx v = u0.at(j, b);
      if (v == cplx(0.0, 0.0)) continue;
      const double a = std::abs(v) * (w ? w(xi, g.q(b)) : 1.0);
      acc += static_cast<long double>(a) * a;
    }
  }
  return std::sqrt(static_cast<double>(acc) * g.dxi() / std::pow(2.0 * kPi, 2));
}

inline SparseField weighted_copy(const SparseField& u,
                                 const std::function<double(double, long long)>& w) {
  SparseField v = u;
  scale_columns(v, w);
  return v;
}

inline double mp_tuple_symbol(const std::vector<const SparseColumn*>& cols,
                              const ResonanceGrid& rg) {
  const double x1 = rg.xi(cols[0]->J), x2 = rg.xi(cols[1]->J);
  const double q1 = static_cast<double>(cols[0]->B), q2 = static_cast<double>(cols[1]->B);
  return std::sqrt(std::abs(x1 * x1 + q1 * q1 - (x2 * x2 + q2 * q2)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quotients.
// ---------------------------------------------------------------------------

// Field-input estimates on sparse fields.  `fields` carries arity entries; the
// multilinear family also accepts a single field used in all slots (diagonal
// product, exact via multiset enumeration).
inline QuotientResult quotient_sparse(EstimateId id, const EstimateParams& prm,
                                      const std::vector<const SparseField*>& fields) {
  if (estimate_takes_data(id))
    throw ContractViolation("quotient_sparse: estimate takes initial data");
  const int arity = estimate_arity(id, prm);
  const bool diagonal = (arity > 1 && static_cast<int>(fields.size()) == 1);
  if (!diagonal && static_cast<int>(fields.size()) != arity)
    throw ContractViolation("quotient_sparse: arity mismatch");
  for (const auto* f : fields)
    if (!f) throw ContractViolation("quotient_sparse: null field");

  const auto need_b_above_half = [&]() {
    if (!(prm.b > 0.5))
      throw ContractViolation("quotient: hypothesis requires b > 1/2");
  };
  const auto need_p_range = [&]() {
    if (!(prm.p >= 2.0 && prm.p <= 6.0))
      throw ContractViolation("quotient: hypothesis requires p in [2,6]");
  };
  if (!(prm.eps > 0.0)) throw ContractViolation("quotient: eps must be positive");

  const SparseField& u = *fields[0];
  QuotientResult r;

  switch (id) {
    case EstimateId::L4Main:
      // rhs regularity defaults to eps; a nonzero prm.s overrides it, which is
      // how hypothesis-sensitivity runs weaken the rhs (e.g. s = -1/4).
      need_b_above_half();
      r.lhs = detail::lp_even_norm(u, 4);
      r.rhs = xsb_norm(u, prm.s != 0.0 ? prm.s : prm.eps, prm.b);
      break;
    case EstimateId::L4Old:
      r.lhs = detail::lp_even_norm(u, 4);
      r.rhs = xsb_norm(u, 1.0 / 6.0, 3.0 / 8.0);
      break;
    case EstimateId::L4Interp:
      r.lhs = detail::slice_lp(u, 3.8);
      r.rhs = xsb_norm(u, prm.eps, 0.45);
      break;
    case EstimateId::MPBilinear: {
      if (!(prm.b > 0.0)) throw ContractViolation("quotient: hypothesis requires b > 0");
      const SparseField& v = diagonal ? u : *fields[1];
      ProductSpec ps;
      ps.factors = {&u, &v};
      const ResonanceGrid rg = u.rg;
      ps.tuple_weight = [rg](const std::vector<const SparseColumn*>& cols) {
        return detail::mp_tuple_symbol(cols, rg);
      };
      r.lhs = product_l2(ps);
      r.rhs = xsb_norm(u, 0.0, prm.b, detail::w_jy(0.5 + prm.eps)) *
              xsb_norm(v, 0.0, prm.b);
      break;
    }
    case EstimateId::MPDual: {
      const SparseField& v = diagonal ? u : *fields[1];
      ProductSpec ps;
      ps.factors = {&u, &v};
      const ResonanceGrid rg = u.rg;
      ps.tuple_weight = [rg](const std::vector<const SparseColumn*>& cols) {
        return detail::mp_tuple_symbol(cols, rg);
      };
      r.lhs = product_l2(ps);
      const double btld = 0.5 - 0.5 * prm.eps;
      r.rhs = xsb_norm(u, 0.5 + prm.eps, btld) * xsb_norm(v, prm.eps, btld);
      break;
    }
    case EstimateId::SchrLp:
      need_b_above_half();
      need_p_range();
      r.lhs = detail::slice_lp(u, prm.p);
      r.rhs = xsb_norm(u, 0.0, (1.5 - 3.0 / prm.p) * prm.b,
                       [&](double xi, long long q) {
                         return std::pow(bracket(xi), 0.5 - 1.0 / prm.p) *
                                std::pow(bracket(static_cast<double>(q)),
                                         (1.5 - 3.0 / prm.p) * prm.eps);
                       });
      break;
    case EstimateId::AiryLp: {
      need_b_above_half();
      need_p_range();
      const SparseField w = detail::weighted_copy(u, detail::w_ix(0.25 - 0.5 / prm.p));
      r.lhs = detail::slice_lp(w, prm.p);
      r.rhs = xsb_norm(u, 0.0, (1.5 - 3.0 / prm.p) * prm.b, detail::w_iy(0.5 - 1.0 / prm.p));
      break;
    }
    case EstimateId::AiryL6L2y: {
      need_b_above_half();
      const SparseField w = detail::weighted_copy(u, detail::w_ix(1.0 / 6.0));
      r.lhs = mixed_lp_l2y_norm(w, 6);
      r.rhs = xsb_norm(u, 0.0, prm.b);
      break;
    }
    case EstimateId::AiryL4L2y: {
      const SparseField w = detail::weighted_copy(u, detail::w_ix(0.125));
      r.lhs = mixed_lp_l2y_norm(w, 4);
      r.rhs = xsb_norm(u, 0.0, 0.375 + prm.eps);
      break;
    }
    case EstimateId::OptLp:
      need_b_above_half();
      need_p_range();
      r.lhs = detail::slice_lp(u, prm.p);
      r.rhs = xsb_norm(u, 1.0 / 3.0 - 2.0 / (3.0 * prm.p) + (0.5 - 1.0 / prm.p) * prm.eps,
                       (1.5 - 3.0 / prm.p) * prm.b);
      break;
    case EstimateId::OptL6:
      need_b_above_half();
      r.lhs = detail::lp_even_norm(u, 6);
      r.rhs = xsb_norm(u, 2.0 / 9.0 + prm.eps, prm.b);
      break;
    case EstimateId::L5Schr:
      need_b_above_half();
      r.lhs = detail::slice_lp(u, 5.0);
      r.rhs = xsb_norm(u, prm.eps, prm.b, detail::w_jx(0.2));
      break;
    case EstimateId::L5Airy: {
      need_b_above_half();
      const SparseField w = detail::weighted_copy(u, detail::w_ix(0.1));
      r.lhs = detail::slice_lp(w, 5.0);
      r.rhs = xsb_norm(u, prm.eps, prm.b, detail::w_iy(0.2));
      break;
    }
    case EstimateId::L5Opt:
      need_b_above_half();
      r.lhs = detail::slice_lp(u, 5.0);
      r.rhs = xsb_norm(u, 2.0 / 15.0 + prm.eps, prm.b);
      break;
    case EstimateId::BilinRefine:
    case EstimateId::BilinRefineDual: {
      if (!(prm.alpha >= 0.0 && prm.alpha <= 1.0))
        throw ContractViolation("quotient: refinement needs alpha in [0,1]");
      if (id == EstimateId::BilinRefine) need_b_above_half();
      const SparseField& v = diagonal ? u : *fields[1];
      ProductSpec ps;
      ps.factors = {&u, &v};
      const double alpha = prm.alpha;
      ps.column_weight = [alpha](double xi, long long q) {
        return p_alpha_keeps(xi, static_cast<double>(q), alpha, 1.0, 1.0)
                   ? std::pow(std::abs(xi), 0.25 * alpha)
                   : 0.0;
      };
      r.lhs = product_l2(ps);
      const double bb = (id == EstimateId::BilinRefine) ? prm.b : 0.45;
      r.rhs = xsb_norm(u, prm.eps, bb) * xsb_norm(v, prm.eps, bb);
      break;
    }
    case EstimateId::MultiGzk:
    case EstimateId::TriMzk: {
      const int kk = (id == EstimateId::TriMzk) ? 2 : prm.k;
      if (kk < 2) throw ContractViolation("quotient: multilinear family needs k >= 2");
      ProductSpec ps;
      if (diagonal) {
        ps.base = &u;
        ps.power = kk + 1;
      } else {
        for (const auto* f : fields) ps.factors.push_back(f);
      }
      r.lhs = product_xsb(ps, prm.s, -0.5 + 2.0 * prm.eps, detail::w_ix(1.0));
      r.rhs = 1.0;
      if (diagonal) {
        r.rhs = std::pow(xsb_norm(u, prm.s, 0.5 + prm.eps), kk + 1);
      } else {
        for (const auto* f : fields) r.rhs *= xsb_norm(*f, prm.s, 0.5 + prm.eps);
      }
      break;
    }
    default:
      throw ContractViolation("quotient_sparse: estimate takes initial data");
  }

  if (!(r.rhs > 0.0))
    throw DegenerateInputError("quotient: rhs norm vanishes");
  r.quotient = r.lhs / r.rhs;
  return r;
}

// Data-input estimates: the lhs lives on the localized free evolution.
inline QuotientResult quotient_data(EstimateId id, const EstimateParams& prm,
                                    const SpectralField& u0, const ResonanceGrid& rg,
                                    double delta = 1.0) {
  if (!estimate_takes_data(id))
    throw ContractViolation("quotient_data: estimate takes space-time fields");
  const CutoffKernel ker(delta, rg.dtau());
  const SparseField lift = lift_localized_free_evolution(u0, rg, ker);
  QuotientResult r;
  switch (id) {
    case EstimateId::SchrL4:
      r.lhs = detail::lp_even_norm(lift, 4);
      r.rhs = detail::weighted_l2_data(u0, detail::w_jx(0.25));
      break;
    case EstimateId::SchrL6:
      if (!(prm.eps > 0.0)) throw ContractViolation("quotient: eps must be positive");
      r.lhs = detail::lp_even_norm(lift, 6);
      r.rhs = detail::weighted_l2_data(u0, [&](double xi, long long q) {
        return std::pow(bracket(xi), 1.0 / 3.0) *
               std::pow(bracket(static_cast<double>(q)), prm.eps);
      });
      break;
    case EstimateId::AiryL6: {
      const SparseField w = detail::weighted_copy(lift, detail::w_ix(1.0 / 6.0));
      r.lhs = detail::lp_even_norm(w, 6);
      r.rhs = detail::weighted_l2_data(u0, detail::w_iy(1.0 / 3.0));
      break;
    }
    case EstimateId::AiryEndpoint: {
      const SparseField w = detail::weighted_copy(lift, detail::w_ix(0.25));
      r.lhs = detail::slice_lp(w, 4.0, /*linf_x_l2y=*/true);
      r.rhs = detail::weighted_l2_data(u0, nullptr);
      break;
    }
    default:
      throw ContractViolation("quotient_data: unhandled estimate");
  }
  if (!(r.rhs > 0.0))
    throw DegenerateInputError("quotient: rhs norm vanishes");
  r.quotient = r.lhs / r.rhs;
  return r;
}

// Dense contract form: space-time fields are converted to their sparse columns
// (the representation is identical; the engine computes the same numbers).
inline QuotientRow quotient(EstimateId id, const EstimateParams& prm,
                            const std::vector<const SpaceTimeField*>& fields,
                            unsigned long long seed = 0) {
  std::vector<SparseField> conv;
  conv.reserve(fields.size());
  for (const auto* f : fields) {
    if (!f) throw ContractViolation("quotient: null field");
    conv.push_back(sparse_from_dense(*f));
  }
  std::vector<const SparseField*> ptrs;
  for (const auto& f : conv) ptrs.push_back(&f);
  const QuotientResult q = quotient_sparse(id, prm, ptrs);
  QuotientRow row;
  row.id = id;
  row.prm = prm;
  row.seed = seed;
  row.lhs = q.lhs;
  row.rhs = q.rhs;
  row.quotient = q.quotient;
  return row;
}

// ---------------------------------------------------------------------------
// Scaling sweeps.
// ---------------------------------------------------------------------------

struct SweepConfig {
  std::vector<long long> Ns = {4, 8, 16, 32};
  int samples = 20;
  unsigned long long seed = 1;
  EnsembleLaw law = EnsembleLaw::GaussianCoefficients;
  int cells = 16;
  long long L = 1;
  long long N2 = 0;           // second-factor shell for bilinear ids (0: follow N)
  bool mix_concentrated = false;  // add characteristic-concentrated members
  bool transversal = false;
  bool q_dominant = false;
  ResonanceGrid rg{1, 1};
  double delta = 1.0;

  void validate() const {
    if (Ns.size() < 4) throw ContractViolation("SweepConfig: need >= 4 dyadic N values");
    if (samples < 20) throw ContractViolation("SweepConfig: need >= 20 samples per N");
  }
};

struct SweepSummary {
  std::vector<QuotientRow> rows;
  std::vector<double> max_by_N;
  FitResult fit;          // log2 max quotient vs log2 N
  double max_quotient = 0.0;
  long long degenerate_rows = 0;  // rows recorded as NaN (rhs vanished)
};

// Runs quotients over seeded random ensembles and fits the max-quotient growth.
// Deterministic: row order is (N-index, sample-index).
inline SweepSummary scaling_sweep(EstimateId id, const EstimateParams& prm,
                                  const SweepConfig& cfg) {
  cfg.validate();
  const int arity = estimate_arity(id, prm);
  const bool takes_data = estimate_takes_data(id);
  const CutoffKernel ker(cfg.delta, cfg.rg.dtau());

  SweepSummary out;
  std::vector<double> xs, ys;
  for (std::size_t ni = 0; ni < cfg.Ns.size(); ++ni) {
    const long long N = cfg.Ns[ni];
    double maxq = 0.0;
    for (int sidx = 0; sidx < cfg.samples; ++sidx) {
      RandomFieldSpec spec;
      spec.N = N;
      spec.L = cfg.L;
      spec.cells = cfg.cells;
      spec.transversal = cfg.transversal;
      spec.q_dominant = cfg.q_dominant;
      spec.delta = cfg.delta;
      spec.law = cfg.law;
      if (cfg.mix_concentrated && sidx % 2 == 1)
        spec.law = EnsembleLaw::CharacteristicConcentrated;

      QuotientResult q;
      const unsigned long long rowseed =
          derive_seed(cfg.seed, "sweep", static_cast<unsigned long long>(N),
                      static_cast<unsigned long long>(sidx));
      try {
        if (takes_data) {
          spec.seed = rowseed;
          int nx = 8, ny = 8;
          while (nx < 4 * N) nx <<= 1;
          while (ny < 4 * N) ny <<= 1;
          const Grid g(2.0 * kPi * static_cast<double>(cfg.rg.lambda), nx, ny);
          const SpectralField u0 = sample_data(spec, g);
          q = quotient_data(id, prm, u0, cfg.rg, cfg.delta);
        } else {
          std::vector<SparseField> flds;
          flds.reserve(static_cast<std::size_t>(arity));
          for (int a = 0; a < arity; ++a) {
            RandomFieldSpec fs = spec;
            fs.seed = derive_seed(rowseed, "factor", static_cast<unsigned long long>(a));
            if (a > 0 && cfg.N2 > 0) fs.N = cfg.N2;
            flds.push_back(sample_sparse(fs, cfg.rg, ker));
          }
          std::vector<const SparseField*> ptrs;
          for (const auto& f : flds) ptrs.push_back(&f);
          q = quotient_sparse(id, prm, ptrs);
        }
      } catch (const DegenerateInputError&) {
        // Recorded, not fatal: the sweep contract is error-free.
        q.lhs = q.rhs = q.quotient = std::numeric_limits<double>::quiet_NaN();
        ++out.degenerate_rows;
      }
      QuotientRow row;
      row.id = id;
      row.prm = prm;
      row.N = N;
      row.L = cfg.L;
      row.seed = rowseed;
      row.lhs = q.lhs;
      row.rhs = q.rhs;
      row.quotient = q.quotient;
      out.rows.push_back(row);
      if (q.quotient > maxq) maxq = q.quotient;  // NaN-safe
    }
    out.max_by_N.push_back(maxq);
    out.max_quotient = std::max(out.max_quotient, maxq);
    xs.push_back(static_cast<double>(N));
    ys.push_back(maxq);
  }
  out.fit = loglog_fit(xs, ys);
  return out;
}

// ---------------------------------------------------------------------------
// The explicit failure witness.
// ---------------------------------------------------------------------------

namespace detail {

// Simpson quadrature of f over [-1,1].
template <typename F>
double simpson11(F f, int panels = 512) {
  const double h = 2.0 / (2.0 * panels);
  long double acc = f(-1.0);
  for (int i = 1; i < 2 * panels; ++i)
    acc += ((i % 2 == 1) ? 4.0L : 2.0L) * f(-1.0 + h * i);
  acc += f(1.0);
  return static_cast<double>(acc) * h / 3.0;
}

}  // namespace detail

struct CounterexampleNorms {
  double xsb_closed = 0.0;  // closed-form X_{s,b} norm (1D quadratures)
  double xsb_grid = 0.0;    // lattice realization, trapezoid boundary weights
  double l4 = 0.0;          // ||u_N||_{L^4} from the lattice field (exact convolution)
};

// The witness u_N with amplitude (2pi)^{3/2}, so that ||u_N||_{X_{0,0}}^2 = 8.
inline constexpr double kCounterexampleAmplitude = 15.749609945722419;  // (2*pi)^1.5

inline double counterexample_xsb_closed(long long N, double s, double b) {
  const double Ixi = detail::simpson11([&](double xi) {
    return std::pow(1.0 + xi * xi + static_cast<double>(N) * static_cast<double>(N), s);
  });
  const double Isig =
      detail::simpson11([&](double sig) { return std::pow(1.0 + sig * sig, b); });
  return std::sqrt(2.0 * Ixi * Isig);
}

inline double counterexample_xsb_grid(long long N, double s, double b,
                                      long long res = 32) {
  // X_{s,b} norm of the lattice realization at spacing 1/res in xi and sigma;
  // boundary cells of the sharp indicator get trapezoid half-weights.
  long double sx = 0.0L, st = 0.0L;
  for (long long j = -res; j <= res; ++j) {
    const double xi = static_cast<double>(j) / static_cast<double>(res);
    const double w = (std::llabs(j) == res) ? 0.5 : 1.0;
    sx += w * std::pow(1.0 + xi * xi + static_cast<double>(N) * static_cast<double>(N), s);
  }
  for (long long m = -res; m <= res; ++m) {
    const double sg = static_cast<double>(m) / static_cast<double>(res);
    const double w = (std::llabs(m) == res) ? 0.5 : 1.0;
    st += w * std::pow(1.0 + sg * sg, b);
  }
  const double d = 1.0 / static_cast<double>(res);
  return std::sqrt(2.0 * static_cast<double>(sx) * d * static_cast<double>(st) * d);
}

// Sparse lattice realization on the lambda=2, W=1 lattice (dxi = 1/2, dtau = 1/8).
inline SparseField counterexample_sparse(long long N) {
  if (N < 2) throw ContractViolation("counterexample: N must be >= 2");
  SparseField u;
  u.rg = ResonanceGrid{2, 1};
  const long long jr = 2, mr = 8;  // |xi| <= 1, |sigma| <= 1
  for (long long sgn : {+1LL, -1LL}) {
    for (long long J = -jr; J <= jr; ++J) {
      SparseColumn col;
      col.J = J;
      col.B = sgn * N;
      col.m_lo = -mr;
      col.env.assign(static_cast<std::size_t>(2 * mr + 1),
                     cplx(kCounterexampleAmplitude, 0.0));
      u.cols.push_back(std::move(col));
    }
  }
  return u;
}

inline CounterexampleNorms counterexample_norms(long long N, double s, double b) {
  CounterexampleNorms out;
  out.xsb_closed = counterexample_xsb_closed(N, s, b);
  out.xsb_grid = counterexample_xsb_grid(N, s, b);
  const SparseField u = counterexample_sparse(N);
  out.l4 = detail::lp_even_norm(u, 4);
  return out;
}

// Dense contract form of the witness.
inline SpaceTimeField counterexample_field(long long N, const Grid& g) {
  if (N < 2) throw ContractViolation("counterexample: N must be >= 2");
  if (2 * N >= g.Ny)
    throw ContractViolation("counterexample_field: N beyond q-resolution");
  SpaceTimeField out(g);
  out.real_field = true;
  for (int j = 0; j < g.Nx; ++j) {
    if (std::abs(g.xi(j)) > 1.0) continue;
    for (int m = 0; m < g.Nt; ++m) {
      if (std::abs(g.sigma(m)) > 1.0) continue;
      out.at(m, j, Grid::storage_index(static_cast<int>(N), g.Ny)) =
          cplx(kCounterexampleAmplitude, 0.0);
      out.at(m, j, Grid::storage_index(static_cast<int>(-N), g.Ny)) =
          cplx(kCounterexampleAmplitude, 0.0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multilinear quotients (dense contract form with the aliasing guard).
// ---------------------------------------------------------------------------

inline QuotientRow multilinear_quotient(int k, double s, double eps,
                                        const std::vector<const SpaceTimeField*>& fields,
                                        unsigned long long seed = 0) {
  if (k < 2) throw ContractViolation("multilinear_quotient: k must be >= 2");
  if (static_cast<int>(fields.size()) != k + 1)
    throw ContractViolation("multilinear_quotient: need k+1 fields");
  std::vector<SparseField> conv;
  conv.reserve(fields.size());
  for (const auto* f : fields) {
    if (!f) throw ContractViolation("multilinear_quotient: null field");
    // Aliasing guard: the product's spatial band must fit the declared grid.
    long long Jmax = 0, Bmax = 0;
    SparseField sp = sparse_from_dense(*f);
    for (const auto& c : sp.cols) {
      Jmax = std::max(Jmax, std::llabs(c.J));
      Bmax = std::max(Bmax, std::llabs(c.B));
    }
    if (2 * (k + 1) * Jmax >= f->grid.Nx || 2 * (k + 1) * Bmax >= f->grid.Ny)
      throw ContractViolation("multilinear_quotient: product band exceeds grid (aliasing)");
    conv.push_back(std::move(sp));
  }
  EstimateParams prm;
  prm.k = k;
  prm.s = s;
  prm.eps = eps;
  std::vector<const SparseField*> ptrs;
  for (const auto& f : conv) ptrs.push_back(&f);
  const QuotientResult q = quotient_sparse(EstimateId::MultiGzk, prm, ptrs);
  QuotientRow row;
  row.id = (k == 2) ? EstimateId::TriMzk : EstimateId::MultiGzk;
  row.prm = prm;
  row.seed = seed;
  row.lhs = q.lhs;
  row.rhs = q.rhs;
  row.quotient = q.quotient;
  return row;
}

// Sparse sweep for the multilinear family: independent factors for k = 2,
// diagonal power for larger k (cost control; the diagonal is a valid instance).
inline SweepSummary multilinear_sweep(int k, double s, double eps,
                                      const std::vector<long long>& Ns, int samples,
                                      unsigned long long seed, int cells) {
  if (k < 2) throw ContractViolation("multilinear_sweep: k must be >= 2");
  EstimateParams prm;
  prm.k = k;
  prm.s = s;
  prm.eps = eps;
  const ResonanceGrid rg{1, 1};
  // Coarser cutoff tail for the (k+1)-fold convolutions: envelope width enters
  // the cost quadratically per factor.  The kernel is part of the ensemble
  // definition, so this only changes the test fields, not any computed norm.
  const CutoffKernel ker(1.0, rg.dtau(), 1e-5);
  SweepSummary out;
  std::vector<double> xs, ys;
  for (long long N : Ns) {
    double maxq = 0.0;
    for (int sidx = 0; sidx < samples; ++sidx) {
      const unsigned long long rowseed =
          derive_seed(seed, "multilinear", static_cast<unsigned long long>(N),
                      static_cast<unsigned long long>(sidx));
      QuotientResult q;
      try {
        if (k == 2) {
          std::vector<SparseField> flds;
          for (int a = 0; a < 3; ++a) {
            RandomFieldSpec fs;
            fs.N = N;
            fs.cells = cells;
            fs.seed = derive_seed(rowseed, "factor", static_cast<unsigned long long>(a));
            flds.push_back(sample_sparse(fs, rg, ker));
          }
          std::vector<const SparseField*> ptrs{&flds[0], &flds[1], &flds[2]};
          q = quotient_sparse(EstimateId::MultiGzk, prm, ptrs);
        } else {
          RandomFieldSpec fs;
          fs.N = N;
          fs.cells = std::max(2, cells / 2);
          fs.seed = rowseed;
          const SparseField f = sample_sparse(fs, rg, ker);
          std::vector<const SparseField*> ptrs{&f};
          q = quotient_sparse(EstimateId::MultiGzk, prm, ptrs);
        }
      } catch (const DegenerateInputError&) {
        q.lhs = q.rhs = q.quotient = std::numeric_limits<double>::quiet_NaN();
        ++out.degenerate_rows;
      }
      QuotientRow row;
      row.id = (k == 2) ? EstimateId::TriMzk : EstimateId::MultiGzk;
      row.prm = prm;
      row.N = N;
      row.L = 1;
      row.seed = rowseed;
      row.lhs = q.lhs;
      row.rhs = q.rhs;
      row.quotient = q.quotient;
      out.rows.push_back(row);
      if (q.quotient > maxq) maxq = q.quotient;  // NaN-safe
    }
    out.max_by_N.push_back(maxq);
    out.max_quotient = std::max(out.max_quotient, maxq);
    xs.push_back(static_cast<double>(N));
    ys.push_back(maxq);
  }
  out.fit = loglog_fit(xs, ys);
  return out;
}

}  // namespace zklab
