#pragma once

// Experiment runner: maps config sections to experiment families, writes the
// per-family CSVs, renders optional plots, and emits a manifest with content
// hashes.  Exit codes: 0 clean, 2 invalid config (thrown as ConfigError before
// any work), 3 completed with degenerate rows recorded.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "zklab/config.hpp"
#include "zklab/core.hpp"
#include "zklab/ensembles.hpp"
#include "zklab/estimates.hpp"
#include "zklab/identities.hpp"
#include "zklab/io.hpp"
#include "zklab/measure.hpp"
#include "zklab/report.hpp"
#include "zklab/solver.hpp"
#include "zklab/version.hpp"

namespace zklab {

struct OutputRecord {
  std::string path;
  std::size_t rows = 0;
  std::string hash;
};

struct RunContext {
  std::string out_dir = ".";
  unsigned long long seed = 1;
  int workers = 1;
  Grid grid{64.0, 128, 128};
  long long degenerate_events = 0;
  std::vector<OutputRecord> outputs;
  std::vector<std::string> summary_lines;

  std::string path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }
  void note(std::string line) { summary_lines.push_back(std::move(line)); }
  void finish_csv(CsvWriter& w) {
    w.close();
    outputs.push_back({w.path(), w.rows(), hash_hex(fnv1a_file(w.path()))});
  }
};

// Deterministic map over [0, n): results land in slot order regardless of the
// number of workers.
template <typename Fn>
void parallel_cells(int n, int workers, Fn fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto drain = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int spawn = std::min(workers, n);
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int w = 0; w < spawn; ++w) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
}

namespace detail {

inline std::vector<std::string> quotient_row_cells(const QuotientRow& r) {
  return {estimate_name(r.id),        std::to_string(r.prm.k),
          format_double(r.prm.s),     format_double(r.prm.b),
          format_double(r.prm.eps),   format_double(r.prm.p),
          format_double(r.prm.alpha), std::to_string(r.N),
          std::to_string(r.L),        std::to_string(r.seed),
          format_double(r.lhs),       format_double(r.rhs),
          format_double(r.quotient)};
}

inline const std::vector<std::string>& quotient_header() {
  static const std::vector<std::string> h = {"estimate_id", "k",   "s",   "b",
                                             "eps",         "p",   "alpha", "N",
                                             "L",           "seed", "lhs", "rhs",
                                             "quotient"};
  return h;
}

inline const std::vector<std::string>& sweep_header() {
  static const std::vector<std::string> h = {
      "estimate_id", "k",     "s",     "b",     "eps",         "p",
      "alpha",       "slope", "ci_lo", "ci_hi", "max_quotient"};
  return h;
}

inline std::vector<std::string> sweep_row_cells(EstimateId id, const EstimateParams& prm,
                                                const SweepSummary& sw) {
  return {estimate_name(id),          std::to_string(prm.k),
          format_double(prm.s),       format_double(prm.b),
          format_double(prm.eps),     format_double(prm.p),
          format_double(prm.alpha),   format_double(sw.fit.slope),
          format_double(sw.fit.ci_lo), format_double(sw.fit.ci_hi),
          format_double(sw.max_quotient)};
}

inline void write_sweep_outputs(RunContext& ctx, const std::string& stem,
                                const std::vector<std::pair<EstimateParams, SweepSummary>>& sweeps,
                                EstimateId id) {
  CsvWriter rows(ctx.path(stem + "_rows.csv"), quotient_header());
  CsvWriter fits(ctx.path(stem + "_sweep.csv"), sweep_header());
  for (const auto& [prm, sw] : sweeps) {
    for (const QuotientRow& r : sw.rows) rows.row(quotient_row_cells(r));
    fits.row(sweep_row_cells(id, prm, sw));
    ctx.degenerate_events += sw.degenerate_rows;
  }
  ctx.finish_csv(rows);
  ctx.finish_csv(fits);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Families.
// ---------------------------------------------------------------------------

inline Grid grid_from_config(const Config& cfg, const Grid& fallback) {
  Grid g = fallback;
  g.Lx = cfg.get_double("grid", "Lx", g.Lx);
  g.Nx = static_cast<int>(cfg.get_int("grid", "Nx", g.Nx));
  g.Ny = static_cast<int>(cfg.get_int("grid", "Ny", g.Ny));
  g.Tw = cfg.get_double("grid", "Tw", g.Tw);
  g.Nt = static_cast<int>(cfg.get_int("grid", "Nt", g.Nt));
  try {
    g.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("config: [grid] invalid: ") + e.what());
  }
  return g;
}

inline void run_simulate(const Config& cfg, RunContext& ctx) {
  const Grid g = grid_from_config(cfg, ctx.grid);
  EvolutionConfig ec;
  ec.k = static_cast<int>(cfg.get_int("simulate", "k", 1));
  ec.sign = static_cast<int>(cfg.get_int("simulate", "sign", 1));
  ec.dt = cfg.get_double("simulate", "dt", 1e-3);
  ec.T = cfg.get_double("simulate", "T", 1.0);
  ec.sample_stride = static_cast<int>(cfg.get_int("simulate", "stride", 100));
  ec.nonlinear_coeff = cfg.get_double("simulate", "nonlinear_coeff", 1.0);
  try {
    ec.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("config: [simulate] invalid: ") + e.what());
  }
  const double amp = cfg.get_double("simulate", "amplitude", 0.5);
  const long long modes = cfg.get_int("simulate", "modes", 6);

  // Random low-mode real data, reproducible from the seed.
  Rng rng(derive_seed(ctx.seed, "simulate-data"));
  SpectralField u0(g);
  for (long long i = 0; i < modes; ++i) {
    const int js = static_cast<int>(rng.uniform_int(-4, 4));
    const int qs = static_cast<int>(rng.uniform_int(-4, 4));
    if (js == 0 && qs == 0) continue;
    const cplx a = amp * rng.gaussian_c();
    u0.mode(js, qs) += a;
    u0.mode(-js, -qs) += std::conj(a);
  }

  const GzkResult res = gzk_solve(u0, ec);
  CsvWriter tr(ctx.path("trajectory.csv"), {"t", "mass", "energy", "l2", "linf"});
  long long bad_rows = 0;
  for (std::size_t i = 0; i < res.conserved.times.size(); ++i) {
    const double m = res.conserved.mass[i];
    if (!std::isfinite(m)) ++bad_rows;
    tr.row({format_double(res.conserved.times[i]), format_double(m),
            format_double(res.conserved.energy[i]), format_double(res.conserved.l2[i]),
            format_double(res.conserved.linf[i])});
  }
  ctx.degenerate_events += bad_rows;
  ctx.finish_csv(tr);
  const double drift =
      std::abs(res.conserved.mass.back() - res.conserved.mass.front());
  ctx.note("simulate: " + std::to_string(res.conserved.times.size()) +
           " samples, mass drift " + format_double(drift));
}

inline void run_l4(const Config& cfg, RunContext& ctx) {
  SweepConfig sc;
  sc.Ns = cfg.has("l4", "Ns") ? cfg.get_int_list("l4", "Ns")
                              : std::vector<long long>{4, 8, 16, 32, 64, 128};
  sc.samples = static_cast<int>(cfg.get_int("l4", "samples", 20));
  sc.cells = static_cast<int>(cfg.get_int("l4", "cells", 16));
  sc.seed = static_cast<unsigned long long>(cfg.get_int("l4", "seed", ctx.seed));
  sc.mix_concentrated = cfg.get_bool("l4", "mix_concentrated", true);
  if (sc.Ns.empty()) throw ConfigError("config: [l4] Ns: empty sweep list");

  EstimateParams prm;
  prm.eps = cfg.get_double("l4", "eps", 0.05);
  prm.b = cfg.get_double("l4", "b", 0.55);

  std::vector<std::pair<EstimateParams, SweepSummary>> sweeps;
  sweeps.emplace_back(prm, scaling_sweep(EstimateId::L4Main, prm, sc));
  if (cfg.get_bool("l4", "falsified", false)) {
    EstimateParams bad = prm;
    bad.s = cfg.get_double("l4", "falsified_s", -0.25);
    sweeps.emplace_back(bad, scaling_sweep(EstimateId::L4Main, bad, sc));
  }
  detail::write_sweep_outputs(ctx, "l4", sweeps, EstimateId::L4Main);
  ctx.note("l4: slope " + format_double(sweeps.front().second.fit.slope) +
           ", max quotient " + format_double(sweeps.front().second.max_quotient));
}

inline void run_measure(const Config& cfg, RunContext& ctx) {
  const std::string variant_s = cfg.get("measure", "variant", "lin");
  MeasureVariant variant;
  if (variant_s == "lin")
    variant = MeasureVariant::Lin;
  else if (variant_s == "alpha")
    variant = MeasureVariant::Alpha;
  else
    throw ConfigError("config: [measure] variant must be lin or alpha, got '" +
                      variant_s + "'");
  const double eps = cfg.get_double("measure", "eps", 0.05);
  const std::string family = cfg.get("measure", "family", "default");
  const long long mc_samples = cfg.get_int("measure", "mc_samples", 0);
  const unsigned long long seed =
      static_cast<unsigned long long>(cfg.get_int("measure", "seed", ctx.seed));

  std::vector<MeasureQuery> queries;
  if (family == "default" || family == "dyadic") {
    std::vector<double> Ks;
    if (cfg.has("measure", "Ks")) {
      Ks = cfg.get_list("measure", "Ks");
    } else {
      for (double K = 1.0; K <= 256.0; K *= 2.0) Ks.push_back(K);
    }
    std::vector<long long> Ns = cfg.has("measure", "Ns")
                                    ? cfg.get_int_list("measure", "Ns")
                                    : std::vector<long long>{1, 2, 4, 8, 16, 32, 64, 128, 256};
    if (Ks.empty()) throw ConfigError("config: [measure] Ks: empty sweep list");
    if (Ns.empty()) throw ConfigError("config: [measure] Ns: empty sweep list");
    const int bases = static_cast<int>(cfg.get_int("measure", "bases", 6));
    queries = dyadic_measure_family(variant, Ks, Ns, bases, seed);
  } else if (family == "random") {
    const int count = static_cast<int>(cfg.get_int("measure", "count", 200));
    queries = random_measure_family(count, variant, seed);
  } else {
    throw ConfigError("config: [measure] family must be default|dyadic|random, got '" +
                      family + "'");
  }

  const ScanReport rep = scan_sup_bound(queries, eps, variant, mc_samples, seed);
  CsvWriter w(ctx.path("measure_scan.csv"),
              {"variant", "tau", "xi", "q", "h", "N1", "N2", "c", "K", "alpha",
               "measure", "ratio", "case_tag", "mc_estimate", "mc_stderr"});
  for (const MeasureScanRow& r : rep.rows) {
    w.row({variant_s, format_double(r.query.tau), format_double(r.query.xi),
           std::to_string(r.query.q), format_double(r.query.h),
           std::to_string(r.query.N1), std::to_string(r.query.N2),
           format_double(r.query.c), format_double(r.query.K),
           format_double(r.query.alpha), format_double(r.measure),
           format_double(r.ratio), r.case_tag,
           r.has_mc ? format_double(r.mc_estimate) : "",
           r.has_mc ? format_double(r.mc_stderr) : ""});
  }
  ctx.finish_csv(w);
  ctx.note("measure: max ratio " + format_double(rep.max_ratio) + " (K-exp " +
           format_double(rep.k_exponent) + ", N-exp " + format_double(rep.n_exponent) +
           ")");
}

inline void run_counterexample(const Config& cfg, RunContext& ctx) {
  std::vector<double> ss = cfg.has("counterexample", "s")
                               ? cfg.get_list("counterexample", "s")
                               : std::vector<double>{-0.5, -0.25, 0.0, 0.25};
  const double b = cfg.get_double("counterexample", "b", 0.55);
  std::vector<long long> Ns = cfg.has("counterexample", "Ns")
                                  ? cfg.get_int_list("counterexample", "Ns")
                                  : std::vector<long long>{4, 8, 16, 32, 64, 128, 256};
  if (ss.empty()) throw ConfigError("config: [counterexample] s: empty sweep list");
  if (Ns.empty()) throw ConfigError("config: [counterexample] Ns: empty sweep list");

  CsvWriter rows(ctx.path("counterexample_rows.csv"),
                 {"N", "s", "b", "xsb_closed", "xsb_grid", "l4", "l4_sq"});
  CsvWriter fits(ctx.path("counterexample_slopes.csv"),
                 {"s", "b", "xsb_slope", "ci_lo", "ci_hi", "l4_slope", "l4_floor_ratio"});
  for (double s : ss) {
    std::vector<double> xs, xsb, l4s;
    for (long long N : Ns) {
      const CounterexampleNorms cn = counterexample_norms(N, s, b);
      rows.row({std::to_string(N), format_double(s), format_double(b),
                format_double(cn.xsb_closed), format_double(cn.xsb_grid),
                format_double(cn.l4), format_double(cn.l4 * cn.l4)});
      xs.push_back(static_cast<double>(N));
      xsb.push_back(cn.xsb_grid);
      l4s.push_back(cn.l4 * cn.l4);
    }
    const FitResult fx = loglog_fit(xs, xsb);
    const FitResult fl = loglog_fit(xs, l4s);
    const double floor_ratio = *std::min_element(l4s.begin(), l4s.end()) / l4s.front();
    fits.row({format_double(s), format_double(b), format_double(fx.slope),
              format_double(fx.ci_lo), format_double(fx.ci_hi),
              format_double(fl.slope), format_double(floor_ratio)});
    ctx.note("counterexample s=" + format_double(s) + ": xsb slope " +
             format_double(fx.slope) + ", l4 slope " + format_double(fl.slope));
  }
  ctx.finish_csv(rows);
  ctx.finish_csv(fits);
}

inline void run_resonance(const Config& cfg, RunContext& ctx) {
  const long long tuples = cfg.get_int("resonance", "tuples", 200);
  const unsigned long long seed =
      static_cast<unsigned long long>(cfg.get_int("resonance", "seed", ctx.seed));
  if (tuples < 1) throw ConfigError("config: [resonance] tuples must be >= 1");
  Rng rng(derive_seed(seed, "resonance-scan"));
  CsvWriter w(ctx.path("resonance_scan.csv"),
              {"xi1", "q1", "xi2", "q2", "xi3", "q3", "resonance", "defect_factored",
               "defect_rewritten"});
  auto rnd = [&]() { return Rational(rng.uniform_int(-1000, 1000), rng.uniform_int(1, 40)); };
  for (long long i = 0; i < tuples; ++i) {
    const Rational x1 = rnd(), p1 = rnd(), x2 = rnd(), p2 = rnd(), x3 = rnd(), p3 = rnd();
    const Rational r = resonance3_exact(x1, p1, x2, p2, x3, p3);
    const Rational d1 = resonance3_factored_defect(x1, p1, x2, p2, x3, p3);
    const Rational d2 = resonance3_rewritten_defect(x1, p1, x2, p2, x3, p3);
    auto dbl = [](const Rational& v) { return v.convert_to<double>(); };
    w.row({format_double(dbl(x1)), format_double(dbl(p1)), format_double(dbl(x2)),
           format_double(dbl(p2)), format_double(dbl(x3)), format_double(dbl(p3)),
           format_double(dbl(r)), rational_to_string(d1), rational_to_string(d2)});
  }
  ctx.finish_csv(w);
  ctx.note("resonance: " + std::to_string(tuples) + " tuples, all factorization defects 0");
}

inline void run_identities(const Config& cfg, RunContext& ctx) {
  const long long tuples = cfg.get_int("identities", "tuples", 1000);
  const unsigned long long seed =
      static_cast<unsigned long long>(cfg.get_int("identities", "seed", ctx.seed));
  if (tuples < 1) throw ConfigError("config: [identities] tuples must be >= 1");
  const IdentitySweepResult res = check_identities(tuples, seed);
  CsvWriter w(ctx.path("identities.csv"), {"tuples", "failures", "max_abs_defect"});
  w.row({std::to_string(res.tuples), std::to_string(res.failures),
         rational_to_string(res.max_abs_defect)});
  ctx.finish_csv(w);
  if (res.failures > 0) ++ctx.degenerate_events;
  ctx.note("identities: " + std::to_string(res.tuples) + " tuples, max absolute defect " +
           rational_to_string(res.max_abs_defect));
}

inline void run_multilinear(const Config& cfg, RunContext& ctx) {
  std::vector<long long> ks = cfg.has("multilinear", "k")
                                  ? cfg.get_int_list("multilinear", "k")
                                  : std::vector<long long>{2};
  std::vector<double> ss = cfg.has("multilinear", "s") ? cfg.get_list("multilinear", "s")
                                                       : std::vector<double>{0.40};
  if (ks.empty()) throw ConfigError("config: [multilinear] k: empty sweep list");
  if (ss.empty()) throw ConfigError("config: [multilinear] s: empty sweep list");
  if (ks.size() != ss.size())
    throw ConfigError("config: [multilinear] k and s lists must pair up");
  std::vector<long long> Ns = cfg.has("multilinear", "Ns")
                                  ? cfg.get_int_list("multilinear", "Ns")
                                  : std::vector<long long>{4, 8, 16, 32, 64};
  if (Ns.empty()) throw ConfigError("config: [multilinear] Ns: empty sweep list");
  const int samples = static_cast<int>(cfg.get_int("multilinear", "samples", 20));
  const int cells = static_cast<int>(cfg.get_int("multilinear", "cells", 8));
  const double eps = cfg.get_double("multilinear", "eps", 0.05);
  const unsigned long long seed =
      static_cast<unsigned long long>(cfg.get_int("multilinear", "seed", ctx.seed));

  std::vector<std::pair<EstimateParams, SweepSummary>> sweeps(ks.size());
  parallel_cells(static_cast<int>(ks.size()), ctx.workers, [&](int i) {
    EstimateParams prm;
    prm.k = static_cast<int>(ks[static_cast<std::size_t>(i)]);
    prm.s = ss[static_cast<std::size_t>(i)];
    prm.eps = eps;
    sweeps[static_cast<std::size_t>(i)] = {
        prm, multilinear_sweep(prm.k, prm.s, eps, Ns, samples, seed, cells)};
  });
  detail::write_sweep_outputs(ctx, "multilinear", sweeps, EstimateId::MultiGzk);
  for (const auto& [prm, sw] : sweeps)
    ctx.note("multilinear k=" + std::to_string(prm.k) + ": slope " +
             format_double(sw.fit.slope));
}

inline void run_report(const Config&, RunContext& ctx) {
  namespace fs = std::filesystem;
  int rendered = 0;

  const std::string l4p = ctx.path("l4_rows.csv");
  if (fs::exists(l4p)) {
    const CsvTable t = read_csv(l4p);
    const int cN = t.column("N"), cq = t.column("quotient");
    std::map<long long, double> maxq;
    for (const auto& r : t.rows) {
      const long long N = std::stoll(r[static_cast<std::size_t>(cN)]);
      const double q = std::stod(r[static_cast<std::size_t>(cq)]);
      if (std::isfinite(q)) maxq[N] = std::max(maxq[N], q);
    }
    PlotSeries s;
    s.label = "max quotient";
    for (const auto& kv : maxq) {
      s.x.push_back(static_cast<double>(kv.first));
      s.y.push_back(kv.second);
    }
    PlotSpec spec;
    spec.title = "L4 quotient vs shell";
    spec.x_label = "N";
    spec.y_label = "max quotient";
    spec.log2_x = spec.log2_y = true;
    render_svg_plot(ctx.path("l4_quotient.svg"), spec, {s});
    ctx.outputs.push_back({ctx.path("l4_quotient.svg"), 1,
                           hash_hex(fnv1a_file(ctx.path("l4_quotient.svg")))});
    ++rendered;
  }

  const std::string mp = ctx.path("measure_scan.csv");
  if (fs::exists(mp)) {
    const CsvTable t = read_csv(mp);
    const int cK = t.column("K"), cr = t.column("ratio");
    std::map<double, double> best;
    for (const auto& r : t.rows) {
      const double K = std::stod(r[static_cast<std::size_t>(cK)]);
      const double ratio = std::stod(r[static_cast<std::size_t>(cr)]);
      best[K] = std::max(best[K], ratio);
    }
    PlotSeries s;
    s.label = "max ratio";
    for (const auto& kv : best) {
      s.x.push_back(kv.first);
      s.y.push_back(kv.second);
    }
    PlotSpec spec;
    spec.title = "measure ratio vs K";
    spec.x_label = "K";
    spec.y_label = "max ratio";
    spec.log2_x = true;
    render_svg_plot(ctx.path("measure_ratio.svg"), spec, {s});
    ctx.outputs.push_back({ctx.path("measure_ratio.svg"), 1,
                           hash_hex(fnv1a_file(ctx.path("measure_ratio.svg")))});
    ++rendered;
  }

  const std::string cp = ctx.path("counterexample_rows.csv");
  if (fs::exists(cp)) {
    const CsvTable t = read_csv(cp);
    const int cN = t.column("N"), cs = t.column("s"), cx = t.column("xsb_grid");
    std::map<std::string, PlotSeries> per_s;
    for (const auto& r : t.rows) {
      const std::string key = r[static_cast<std::size_t>(cs)];
      PlotSeries& s = per_s[key];
      s.label = "s=" + key;
      s.x.push_back(std::stod(r[static_cast<std::size_t>(cN)]));
      s.y.push_back(std::stod(r[static_cast<std::size_t>(cx)]));
    }
    std::vector<PlotSeries> series;
    for (auto& kv : per_s) series.push_back(std::move(kv.second));
    PlotSpec spec;
    spec.title = "witness norm growth";
    spec.x_label = "N";
    spec.y_label = "X norm";
    spec.log2_x = spec.log2_y = true;
    render_svg_plot(ctx.path("counterexample_slopes.svg"), spec, series);
    ctx.outputs.push_back({ctx.path("counterexample_slopes.svg"), 1,
                           hash_hex(fnv1a_file(ctx.path("counterexample_slopes.svg")))});
    ++rendered;
  }
  ctx.note("report: rendered " + std::to_string(rendered) + " plots");
}

// ---------------------------------------------------------------------------
// Dispatch.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {
      "simulate", "l4",         "measure", "counterexample",
      "resonance", "identities", "multilinear", "report"};
  return names;
}

inline void run_family(const std::string& name, const Config& cfg, RunContext& ctx) {
  if (name == "simulate") return run_simulate(cfg, ctx);
  if (name == "l4") return run_l4(cfg, ctx);
  if (name == "measure") return run_measure(cfg, ctx);
  if (name == "counterexample") return run_counterexample(cfg, ctx);
  if (name == "resonance") return run_resonance(cfg, ctx);
  if (name == "identities") return run_identities(cfg, ctx);
  if (name == "multilinear") return run_multilinear(cfg, ctx);
  if (name == "report") return run_report(cfg, ctx);
  throw ConfigError("config: unknown experiment family '" + name + "'");
}

inline void write_manifest(const Config& cfg, const RunContext& ctx, double wall_s,
                           int exit_code) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config_hash"] = hash_hex(fnv1a(serialize_config(cfg)));
  j["seed"] = ctx.seed;
  j["wall_time_s"] = wall_s;
  j["degenerate_events"] = ctx.degenerate_events;
  j["exit_code"] = exit_code;
  j["outputs"] = nlohmann::json::array();
  for (const OutputRecord& o : ctx.outputs)
    j["outputs"].push_back({{"path", std::filesystem::path(o.path).filename().string()},
                            {"rows", o.rows},
                            {"hash", o.hash}});
  std::ofstream m(ctx.path("manifest.json"), std::ios::binary | std::ios::trunc);
  m << j.dump(2) << '\n';
}

// Runs every family that has a config section (or the explicit `families`
// list); returns the exit code per the contract.
inline int run(const Config& cfg, RunContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(ctx.out_dir);

  ctx.seed = static_cast<unsigned long long>(cfg.get_int("", "seed", ctx.seed));
  ctx.workers = static_cast<int>(cfg.get_int("", "workers", ctx.workers));
  if (cfg.has("", "out")) ctx.out_dir = cfg.get("", "out");
  std::filesystem::create_directories(ctx.out_dir);
  ctx.grid = grid_from_config(cfg, ctx.grid);

  std::vector<std::string> todo;
  if (cfg.has("", "families")) {
    std::istringstream in(cfg.get("", "families"));
    std::string tok;
    while (in >> tok) todo.push_back(tok);
  } else {
    for (const std::string& f : family_names())
      if (cfg.sections.count(f)) todo.push_back(f);
  }
  if (todo.empty())
    throw ConfigError("config: no experiment family sections present");
  for (const std::string& f : todo) run_family(f, cfg, ctx);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int code = ctx.degenerate_events > 0 ? 3 : 0;
  write_manifest(cfg, ctx, wall, code);
  return code;
}

}  // namespace zklab
