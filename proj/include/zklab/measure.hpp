#pragma once

// Level-set measures on R x Z for the quadratic form p at a base point
// (xi, q): the measure of
//
//   B = { (xi1, q1) :  p(xi1, q1 + h) in [c, c+K],  ball constraints,
//         [lin variant only] |xi1| < xi/2 }
//
// subject to the variant's gap condition on (xi, q) itself:
//   lin:   |3 xi^2 - q^2| >= kappa_hyp
//   alpha: xi >= kappa_xi  and  |3 xi^2 - q^2| >= kappa_hyp * xi^alpha
// (gap failure means the base point is outside the set family: measure 0).
//
// At fixed q1, p(xi1, q1+h) is an upward parabola in xi1 (xi > 0), so the
// window [c, c+K] pulls back to at most two xi1 intervals with endpoints
// center +- sqrt(D), D = ((q^2-3xi^2)/(9xi^2)) (q1+h)^2 + c'/(3xi); the ball
// constraints are further intervals, and the slice is an exact intersection.
// The total measure is the sum of slice lengths over the finitely many
// admissible q1 (Lebesgue x counting). A Monte-Carlo oracle samples the
// defining inequalities directly, sharing only the bounding boxes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zklab/core.hpp"
#include "zklab/fit.hpp"
#include "zklab/rng.hpp"
#include "zklab/symbols.hpp"

namespace zklab {

struct MeasureQuery {
  double tau = 0.0;  // level origin; enters only through c (kept for reports)
  double xi = 1.0;   // > 0
  long long q = 0;
  double h = 0.0;  // 0 or 1/2
  long long N1 = 1, N2 = 1;
  double c = 0.0;
  double K = 1.0;
  double alpha = -1.0;  // < 0 => lin variant; in [0,1] => alpha variant
  double kappa_ball = 1.0, kappa_hyp = 1.0, kappa_xi = 1.0;

  bool is_alpha() const { return alpha >= 0.0; }

  void validate() const {
    if (!(xi > 0.0)) throw ContractViolation("MeasureQuery: xi must be positive");
    if (!(K >= 1.0)) throw ContractViolation("MeasureQuery: K must be >= 1");
    if (h != 0.0 && h != 0.5) throw ContractViolation("MeasureQuery: h must be 0 or 1/2");
    if (is_alpha() && alpha > 1.0)
      throw ContractViolation("MeasureQuery: alpha must lie in [0,1]");
    if (!(kappa_ball > 0.0) || !(kappa_hyp > 0.0) || !(kappa_xi > 0.0))
      throw ContractViolation("MeasureQuery: constants must be positive");
    if (N1 < 1 || N2 < 1) throw ContractViolation("MeasureQuery: shells must be >= 1");
  }

  // Gap condition of the chosen variant at the base point (xi, q).
  bool gate() const {
    const double gap = std::fabs(3.0 * xi * xi - static_cast<double>(q) * q);
    if (!is_alpha()) return gap >= kappa_hyp;
    return xi >= kappa_xi && gap >= kappa_hyp * std::pow(xi, alpha);
  }

  // Sign-case tag mirroring the proof's case split.
  std::string sign_case_tag() const {
    const double d = static_cast<double>(q) * q - 3.0 * xi * xi;
    std::string tag = d > 0.0 ? "q2-dominant" : "xi2-dominant";
    if (c >= 0.0)
      tag += "|c+";
    else
      tag += (c + K >= 0.0) ? "|c-|Kc+" : "|c-|Kc-";
    return tag;
  }
};

// c for the level window |tau - (xi/4)(xi^2+q^2) - p| <= K/2.
inline double c_from_tau(double tau, double xi, long long q, double K) {
  const double qd = static_cast<double>(q);
  return tau - 0.25 * xi * (xi * xi + qd * qd) - 0.5 * K;
}

struct Interval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi > lo ? hi - lo : 0.0; }
};

inline bool intersect(Interval& a, const Interval& b) {
  a.lo = std::max(a.lo, b.lo);
  a.hi = std::min(a.hi, b.hi);
  return a.hi > a.lo;
}

struct SliceIntervals {
  long long q1 = 0;
  std::vector<Interval> intervals;
  std::string case_tag;

  double total_length() const {
    double s = 0.0;
    for (const Interval& iv : intervals) s += iv.length();
    return s;
  }
};

namespace detail {

// xi1-interval of one dilated ball |(xi1 - x0, y)| <= R around x-center x0,
// at fixed y-component. Returns false if the slice misses the ball.
inline bool ball_interval(double x0, double ycomp, double R, Interval& out) {
  const double rem = R * R - ycomp * ycomp;
  if (rem < 0.0) return false;
  const double r = std::sqrt(rem / 3.0);
  out = {x0 - r, x0 + r};
  return true;
}

}  // namespace detail

inline SliceIntervals slice_intervals(const MeasureQuery& mq, long long q1) {
  mq.validate();
  SliceIntervals out;
  out.q1 = q1;
  out.case_tag = mq.sign_case_tag();
  if (!mq.gate()) {
    out.case_tag += "|gate-closed";
    return out;
  }

  const double xi = mq.xi;
  const double qd = static_cast<double>(mq.q);
  const double y = static_cast<double>(q1) + mq.h;

  // Parabola pullback: roots center +- sqrt(D(c')).
  const double lead = (qd * qd - 3.0 * xi * xi) / (9.0 * xi * xi);
  const double D1 = lead * y * y + mq.c / (3.0 * xi);
  const double D2 = lead * y * y + (mq.c + mq.K) / (3.0 * xi);
  if (D2 < 0.0) {
    out.case_tag += "|empty";
    return out;
  }
  const double center = -y * qd / (3.0 * xi);
  const double s2 = std::sqrt(D2);
  std::vector<Interval> base;
  if (D1 <= 0.0) {
    base.push_back({center - s2, center + s2});
    out.case_tag += "|central";
  } else {
    const double s1 = std::sqrt(D1);
    base.push_back({center - s2, center - s1});
    base.push_back({center + s1, center + s2});
    out.case_tag += "|two-sided";
  }

  // Constraint intervals: ball around -xi/2 (y-part y + q/2), ball around
  // +xi/2 (y-part q/2 - y), and the strip for the lin variant.
  std::vector<Interval> constraints;
  Interval iv;
  if (!detail::ball_interval(-0.5 * xi, y + 0.5 * qd,
                             mq.kappa_ball * static_cast<double>(mq.N1), iv))
    return out;
  constraints.push_back(iv);
  if (!detail::ball_interval(0.5 * xi, 0.5 * qd - y,
                             mq.kappa_ball * static_cast<double>(mq.N2), iv))
    return out;
  constraints.push_back(iv);
  if (!mq.is_alpha()) constraints.push_back({-0.5 * xi, 0.5 * xi});

  for (Interval b : base) {
    bool alive = b.hi > b.lo;
    for (const Interval& cns : constraints)
      if (alive) alive = intersect(b, cns);
    if (alive) out.intervals.push_back(b);
  }
  return out;
}

// Exact bound on the admissible torus slices from the two ball constraints.
inline long long admissible_q1_bound(const MeasureQuery& mq) {
  const double span = mq.kappa_ball * static_cast<double>(std::max(mq.N1, mq.N2)) +
                      0.5 * std::fabs(static_cast<double>(mq.q)) + 1.0;
  return static_cast<long long>(std::ceil(span));
}

inline double measure_B(const MeasureQuery& mq) {
  mq.validate();
  if (!mq.gate()) return 0.0;
  const long long bound = admissible_q1_bound(mq);
  double total = 0.0;
  for (long long q1 = -bound; q1 <= bound; ++q1)
    total += slice_intervals(mq, q1).total_length();
  return total;
}

struct McEstimate {
  double estimate = 0.0;
  double stderr_total = 0.0;
};

// Independent oracle: per admissible q1, uniform xi1 samples over the hull of
// the ball boxes (and strip for lin), evaluating the defining inequalities
// verbatim. Shares no root algebra with slice_intervals.
inline McEstimate mc_oracle_measure(const MeasureQuery& mq, long long samples,
                                    uint64_t seed) {
  mq.validate();
  if (samples < 10000)
    throw ContractViolation("mc_oracle_measure: need at least 1e4 samples");
  McEstimate out;
  if (!mq.gate()) return out;

  const double xi = mq.xi;
  const double qd = static_cast<double>(mq.q);
  const double R1 = mq.kappa_ball * static_cast<double>(mq.N1);
  const double R2 = mq.kappa_ball * static_cast<double>(mq.N2);
  const long long bound = admissible_q1_bound(mq);

  // Collect per-q1 sampling boxes first so the sample budget can be split.
  struct Box {
    long long q1;
    double lo, hi;
  };
  std::vector<Box> boxes;
  for (long long q1 = -bound; q1 <= bound; ++q1) {
    const double y = static_cast<double>(q1) + mq.h;
    Interval b1, b2;
    if (!detail::ball_interval(-0.5 * xi, y + 0.5 * qd, R1, b1)) continue;
    if (!detail::ball_interval(0.5 * xi, 0.5 * qd - y, R2, b2)) continue;
    Interval box = b1;
    if (!intersect(box, b2)) continue;
    if (!mq.is_alpha() && !intersect(box, {-0.5 * xi, 0.5 * xi})) continue;
    boxes.push_back({q1, box.lo, box.hi});
  }
  if (boxes.empty()) return out;

  const long long per_slice =
      std::max<long long>(200, samples / static_cast<long long>(boxes.size()));
  double var_sum = 0.0;
  for (const Box& box : boxes) {
    Rng rng(derive_seed(seed, "mc-measure", static_cast<uint64_t>(box.q1 + (1 << 20))));
    const double y = static_cast<double>(box.q1) + mq.h;
    const double width = box.hi - box.lo;
    long long hits = 0;
    for (long long i = 0; i < per_slice; ++i) {
      const double xi1 = rng.uniform(box.lo, box.hi);
      const bool in_window = [&] {
        const double pv = p_poly(xi, qd, xi1, y);
        if (pv < mq.c || pv > mq.c + mq.K) return false;
        if (dilated_norm(xi1 + 0.5 * xi, y + 0.5 * qd) > R1) return false;
        if (dilated_norm(0.5 * xi - xi1, 0.5 * qd - y) > R2) return false;
        if (!mq.is_alpha() && std::fabs(xi1) >= 0.5 * xi) return false;
        return true;
      }();
      if (in_window) ++hits;
    }
    const double phat = static_cast<double>(hits) / static_cast<double>(per_slice);
    out.estimate += width * phat;
    var_sum += width * width * phat * (1.0 - phat) / static_cast<double>(per_slice);
  }
  out.stderr_total = std::sqrt(var_sum);
  return out;
}

// ---------------------------------------------------------------------------
// Sup-bound scans
// ---------------------------------------------------------------------------

enum class MeasureVariant { Lin, Alpha };

struct MeasureScanRow {
  MeasureQuery query;
  double measure = 0.0;
  double ratio = 0.0;
  std::string case_tag;
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  bool has_mc = false;
};

struct ScanReport {
  std::vector<MeasureScanRow> rows;
  double max_ratio = 0.0;
  size_t argmax_index = 0;
  // Aggregate (max over sweep groups) fitted growth exponents of |B|^{1/2};
  // NaN when the family carries no sweep with enough positive measures.
  double k_exponent = std::numeric_limits<double>::quiet_NaN();
  double n_exponent = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline std::string group_key_without(const MeasureQuery& q, bool drop_K, bool drop_N) {
  std::ostringstream os;
  os.precision(17);
  os << q.tau << '|' << q.xi << '|' << q.q << '|' << q.h << '|' << q.c << '|'
     << q.alpha << '|' << q.kappa_ball << '|' << q.kappa_hyp << '|' << q.kappa_xi;
  if (!drop_K) os << '|' << q.K;
  if (!drop_N) os << '|' << q.N1 << '|' << q.N2;
  return os.str();
}

inline double max_group_exponent(const std::vector<MeasureScanRow>& rows, bool by_K) {
  std::map<std::string, std::vector<std::pair<double, double>>> groups;
  for (const MeasureScanRow& r : rows) {
    const double x = by_K ? r.query.K
                          : static_cast<double>(std::max(r.query.N1, r.query.N2));
    groups[group_key_without(r.query, by_K, !by_K)].push_back(
        {x, std::sqrt(std::max(0.0, r.measure))});
  }
  double best = std::numeric_limits<double>::quiet_NaN();
  for (auto& kv : groups) {
    auto& pts = kv.second;
    std::vector<double> xs, ys;
    for (auto& p : pts)
      if (p.second > 0.0) {
        xs.push_back(p.first);
        ys.push_back(p.second);
      }
    // Need a genuine sweep: three distinct abscissae with positive measure.
    std::vector<double> uniq = xs;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() < 3) continue;
    const double slope = loglog_fit(xs, ys).slope;
    if (std::isnan(best) || slope > best) best = slope;
  }
  return best;
}

}  // namespace detail

// Evaluate a finite query family: per-query measure and normalized ratio
// (|B|^{1/2} or xi^{alpha/4}|B|^{1/2} against (N1 v N2)^eps K^{1/2}), the
// worst ratio with its arg-max, and sweep-fitted growth exponents.
inline ScanReport scan_sup_bound(const std::vector<MeasureQuery>& family, double eps,
                                 MeasureVariant variant, long long mc_samples = 0,
                                 uint64_t mc_seed = 0) {
  if (family.empty()) throw ContractViolation("scan_sup_bound: empty family");
  if (!(eps > 0.0)) throw ContractViolation("scan_sup_bound: eps must be positive");
  ScanReport rep;
  rep.rows.reserve(family.size());
  for (size_t i = 0; i < family.size(); ++i) {
    MeasureQuery q = family[i];
    if ((variant == MeasureVariant::Alpha) != q.is_alpha())
      throw ContractViolation("scan_sup_bound: query variant mismatch");
    MeasureScanRow row;
    row.query = q;
    row.measure = measure_B(q);
    const double nmax = static_cast<double>(std::max(q.N1, q.N2));
    const double denom = std::pow(nmax, eps) * std::sqrt(q.K);
    double lhs = std::sqrt(std::max(0.0, row.measure));
    if (variant == MeasureVariant::Alpha) lhs *= std::pow(q.xi, 0.25 * q.alpha);
    row.ratio = lhs / denom;
    row.case_tag = q.sign_case_tag();
    if (mc_samples > 0) {
      const McEstimate mc = mc_oracle_measure(q, mc_samples, derive_seed(mc_seed, "scan", i));
      row.mc_estimate = mc.estimate;
      row.mc_stderr = mc.stderr_total;
      row.has_mc = true;
    }
    if (row.ratio > rep.max_ratio) {
      rep.max_ratio = row.ratio;
      rep.argmax_index = i;
    }
    rep.rows.push_back(std::move(row));
  }
  rep.k_exponent = detail::max_group_exponent(rep.rows, /*by_K=*/true);
  rep.n_exponent = detail::max_group_exponent(rep.rows, /*by_K=*/false);
  return rep;
}

// ---------------------------------------------------------------------------
// Query families.
// ---------------------------------------------------------------------------

// Random queries across the parameter box; exercised against the MC oracle.
inline std::vector<MeasureQuery> random_measure_family(int count, MeasureVariant v,
                                                       uint64_t seed) {
  if (count < 1) throw ContractViolation("random_measure_family: count must be >= 1");
  Rng rng(derive_seed(seed, "measure-family"));
  std::vector<MeasureQuery> fam;
  fam.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    MeasureQuery q;
    q.xi = rng.uniform(0.5, 8.0);
    q.q = rng.uniform_int(-8, 8);
    q.h = rng.uniform_int(0, 1) ? 0.5 : 0.0;
    q.N1 = 1LL << rng.uniform_int(0, 5);
    q.N2 = 1LL << rng.uniform_int(0, 5);
    q.K = static_cast<double>(1LL << rng.uniform_int(0, 4));
    q.c = rng.uniform(-20.0, 20.0);
    q.tau = q.c;  // recorded origin; the slice geometry reads c
    q.alpha = (v == MeasureVariant::Alpha)
                  ? 0.5 * static_cast<double>(rng.uniform_int(0, 2))
                  : -1.0;
    fam.push_back(q);
  }
  return fam;
}

// Structured dyadic sweeps: per random base query, one sub-family varying K
// with shells fixed and one varying N1 with K fixed, so the per-group exponent
// fits in scan_sup_bound see clean single-variable sweeps.
inline std::vector<MeasureQuery> dyadic_measure_family(MeasureVariant v,
                                                       const std::vector<double>& Ks,
                                                       const std::vector<long long>& Ns,
                                                       int bases, uint64_t seed) {
  if (Ks.empty() || Ns.empty())
    throw ContractViolation("dyadic_measure_family: empty sweep list");
  Rng rng(derive_seed(seed, "measure-dyadic"));
  std::vector<MeasureQuery> fam;
  for (int i = 0; i < bases; ++i) {
    MeasureQuery base;
    base.xi = rng.uniform(0.5, 6.0);
    base.q = rng.uniform_int(-6, 6);
    base.h = rng.uniform_int(0, 1) ? 0.5 : 0.0;
    base.c = rng.uniform(-10.0, 10.0);
    base.tau = base.c;
    base.alpha = (v == MeasureVariant::Alpha)
                     ? 0.5 * static_cast<double>(rng.uniform_int(0, 2))
                     : -1.0;
    base.N1 = 4;
    base.N2 = 1LL << rng.uniform_int(0, 3);
    for (double K : Ks) {
      MeasureQuery q = base;
      q.K = K;
      fam.push_back(q);
    }
    base.K = static_cast<double>(1LL << rng.uniform_int(0, 3));
    for (long long N : Ns) {
      MeasureQuery q = base;
      q.N1 = N;
      fam.push_back(q);
    }
  }
  return fam;
}

}  // namespace zklab
