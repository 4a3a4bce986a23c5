// zklab: configuration-driven experiment runner.
//
//   zklab run --config experiments.cfg [--out DIR] [--seed S] [--workers W]
//   zklab <family> [flags...]        one experiment family with CLI overrides
//
// Exit codes: 0 all checks passed; 2 invalid config/flags; 3 run completed
// with degenerate rows recorded.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zklab/runner.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string grid_spec;
  long long seed = -1;
  int workers = 1;
};

void add_common(CLI::App* app, CommonFlags& fl) {
  app->add_option("--config", fl.config_path, "config file (key=value or JSON)");
  app->add_option("--out", fl.out_dir, "output directory (env ZKLAB_OUT overrides)");
  app->add_option("--seed", fl.seed, "base seed for all randomness");
  app->add_option("--workers", fl.workers, "worker threads for independent cells");
  app->add_option("--grid", fl.grid_spec, "grid as Nx,Ny,Nt,Lx,Tw");
}

void apply_common(const CommonFlags& fl, zklab::Config& cfg) {
  if (fl.seed >= 0) cfg.set("", "seed", std::to_string(fl.seed));
  if (fl.workers != 1) cfg.set("", "workers", std::to_string(fl.workers));
  std::string out = fl.out_dir;
  if (const char* env = std::getenv("ZKLAB_OUT")) out = env;
  if (!out.empty()) cfg.set("", "out", out);
  if (!fl.grid_spec.empty()) {
    // Nx,Ny,Nt,Lx,Tw with trailing items optional.
    std::vector<std::string> parts;
    std::string cur;
    for (char c : fl.grid_spec) {
      if (c == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    static const char* keys[] = {"Nx", "Ny", "Nt", "Lx", "Tw"};
    if (parts.size() > 5) throw zklab::ConfigError("--grid takes at most Nx,Ny,Nt,Lx,Tw");
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (!parts[i].empty()) cfg.set("grid", keys[i], parts[i]);
  }
}

zklab::Config base_config(const CommonFlags& fl) {
  zklab::Config cfg;
  if (!fl.config_path.empty()) cfg = zklab::load_config(fl.config_path);
  apply_common(fl, cfg);
  return cfg;
}

int execute(const zklab::Config& cfg) {
  zklab::RunContext ctx;
  ctx.out_dir = cfg.get("", "out", ".");
  const int code = zklab::run(cfg, ctx);
  for (const std::string& line : ctx.summary_lines) std::printf("%s\n", line.c_str());
  std::printf("wrote %zu outputs to %s (exit %d)\n", ctx.outputs.size(),
              ctx.out_dir.c_str(), code);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational laboratory for dispersive space-time estimates"};
  app.require_subcommand(1);

  CommonFlags fl;
  struct FamilyFlags {
    double eps = -1.0, b = -1.0, s_single = std::nan("");
    std::string s_list, Ns, variant, family, k_list, s_multi;
    long long samples = -1, cells = -1, tuples = -1, count = -1, mc = -1;
    bool falsified = false;
  } ff;

  CLI::App* c_run = app.add_subcommand("run", "run every family in the config");
  add_common(c_run, fl);

  CLI::App* c_sim = app.add_subcommand("simulate", "nonlinear evolution + conservation");
  add_common(c_sim, fl);

  CLI::App* c_l4 = app.add_subcommand("l4", "L4 estimate quotient sweep");
  add_common(c_l4, fl);
  c_l4->add_option("--eps", ff.eps, "rhs regularity weight");
  c_l4->add_option("--b", ff.b, "rhs modulation exponent");
  c_l4->add_option("--Ns", ff.Ns, "shell list, e.g. 4..128");
  c_l4->add_option("--samples", ff.samples, "samples per shell");
  c_l4->add_flag("--falsified", ff.falsified, "also sweep the weakened rhs variant");

  CLI::App* c_meas = app.add_subcommand("measure", "level-set measure scans");
  add_common(c_meas, fl);
  c_meas->add_option("--variant", ff.variant, "lin|alpha");
  c_meas->add_option("--eps", ff.eps, "shell-growth allowance");
  c_meas->add_option("--family", ff.family, "default|dyadic|random");
  c_meas->add_option("--count", ff.count, "random-family query count");
  c_meas->add_option("--mc", ff.mc, "Monte-Carlo samples per query (0 = off)");

  CLI::App* c_ctr = app.add_subcommand("counterexample", "witness norm slopes");
  add_common(c_ctr, fl);
  c_ctr->add_option("--s", ff.s_list, "s values, e.g. -0.5,-0.25,0,0.25");
  c_ctr->add_option("--b", ff.b, "modulation exponent");
  c_ctr->add_option("--Ns", ff.Ns, "shell list, e.g. 4..256");

  CLI::App* c_res = app.add_subcommand("resonance", "resonance factorization scan");
  add_common(c_res, fl);
  c_res->add_option("--tuples", ff.tuples, "random tuples");

  CLI::App* c_id = app.add_subcommand("identities", "exact rational identity checks");
  add_common(c_id, fl);
  c_id->add_option("--tuples", ff.tuples, "random tuples");

  CLI::App* c_ml = app.add_subcommand("multilinear", "multilinear quotient sweeps");
  add_common(c_ml, fl);
  c_ml->add_option("--k", ff.k_list, "degrees, e.g. 2,4");
  c_ml->add_option("--s", ff.s_multi, "regularities paired with --k");
  c_ml->add_option("--eps", ff.eps, "modulation epsilon");
  c_ml->add_option("--Ns", ff.Ns, "shell list");
  c_ml->add_option("--samples", ff.samples, "samples per shell");
  c_ml->add_option("--cells", ff.cells, "packets per field");

  CLI::App* c_rep = app.add_subcommand("report", "render plots from CSVs in --out");
  add_common(c_rep, fl);

  CLI11_PARSE(app, argc, argv);

  try {
    zklab::Config cfg = base_config(fl);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub != "run") {
      // Scope to one family and fold flag overrides into its section.
      cfg.set("", "families", sub);
      cfg.sections[sub];
      if (ff.eps >= 0.0) cfg.set(sub, "eps", zklab::format_double(ff.eps));
      if (ff.b >= 0.0) cfg.set(sub, "b", zklab::format_double(ff.b));
      if (!ff.Ns.empty()) cfg.set(sub, "Ns", ff.Ns);
      if (ff.samples >= 0) cfg.set(sub, "samples", std::to_string(ff.samples));
      if (ff.cells >= 0) cfg.set(sub, "cells", std::to_string(ff.cells));
      if (ff.tuples >= 0) cfg.set(sub, "tuples", std::to_string(ff.tuples));
      if (ff.count >= 0) cfg.set(sub, "count", std::to_string(ff.count));
      if (ff.mc >= 0) cfg.set(sub, "mc_samples", std::to_string(ff.mc));
      if (ff.falsified) cfg.set(sub, "falsified", "true");
      if (!ff.variant.empty()) cfg.set(sub, "variant", ff.variant);
      if (!ff.family.empty()) cfg.set(sub, "family", ff.family);
      if (!ff.s_list.empty() && sub == "counterexample") cfg.set(sub, "s", ff.s_list);
      if (!ff.k_list.empty()) cfg.set(sub, "k", ff.k_list);
      if (!ff.s_multi.empty() && sub == "multilinear") cfg.set(sub, "s", ff.s_multi);
    }
    return execute(cfg);
  } catch (const zklab::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const zklab::ContractViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
