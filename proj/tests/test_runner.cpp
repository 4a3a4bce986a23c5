// Config parsing, CSV/field round-trips, hashes, plot rendering, and the
// experiment runner's manifest contract.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zklab/rng.hpp"
#include "zklab/runner.hpp"

using namespace zklab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config text parsing and typed getters", "[runner]") {
  const std::string text =
      "# top comment\n"
      "seed = 42\n"
      "families = identities\n"
      "\n"
      "[l4]\n"
      "eps = 0.05   # trailing comment\n"
      "Ns = 4..64\n"
      "mix = true\n"
      "[measure]\n"
      "Ks = 1, 2 4\n";
  const Config cfg = parse_config(text);

  CHECK(cfg.get_int("", "seed", 0) == 42);
  CHECK(cfg.get("", "families") == "identities");
  CHECK(cfg.get_double("l4", "eps", 0.0) == 0.05);
  CHECK(cfg.get_bool("l4", "mix", false) == true);
  CHECK(cfg.get_double("l4", "absent", 7.5) == 7.5);

  const std::vector<long long> ns = cfg.get_int_list("l4", "Ns");
  CHECK(ns == std::vector<long long>{4, 8, 16, 32, 64});
  const std::vector<double> ks = cfg.get_list("measure", "Ks");
  CHECK(ks == std::vector<double>{1.0, 2.0, 4.0});

  CHECK_THROWS_AS(cfg.require("l4", "absent"), ConfigError);
  CHECK(cfg.require("l4", "eps") == "0.05");
}

TEST_CASE("config serialization round-trips", "[runner]") {
  Config cfg;
  cfg.set("", "seed", "7");
  cfg.set("l4", "eps", format_double_cfg(0.05));
  cfg.set("l4", "Ns", "4 8 16");
  cfg.set("measure", "variant", "lin");
  const Config back = parse_config(serialize_config(cfg));
  CHECK(back.sections == cfg.sections);
  // and serialization of the reparse is bytewise stable
  CHECK(serialize_config(back) == serialize_config(cfg));
}

TEST_CASE("JSON configs map to the same sections", "[runner]") {
  const std::string json = R"({
    "seed": 42,
    "families": "identities",
    "l4": {"eps": 0.05, "Ns": [4, 8, 16], "mix": true}
  })";
  const Config cfg = parse_config(json);
  CHECK(cfg.get_int("", "seed", 0) == 42);
  CHECK(cfg.get_double("l4", "eps", 0.0) == 0.05);
  CHECK(cfg.get_int_list("l4", "Ns") == std::vector<long long>{4, 8, 16});
  CHECK(cfg.get_bool("l4", "mix", false) == true);

  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("config errors carry location and key context", "[runner]") {
  try {
    parse_config("a = 1\nb = 2\nbroken line\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[open\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(" = 3\n"), ConfigError);

  const Config cfg = parse_config("[l4]\neps = fast\nn = 1.5x\nflag = maybe\nr = 8..4\n");
  CHECK_THROWS_AS(cfg.get_double("l4", "eps", 0.0), ConfigError);
  CHECK_THROWS_AS(cfg.get_int("l4", "n", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_bool("l4", "flag", false), ConfigError);
  CHECK_THROWS_AS(cfg.get_list("l4", "r"), ConfigError);
  try {
    cfg.get_double("l4", "eps", 0.0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("l4.eps") != std::string::npos);
  }
}

TEST_CASE("csv writer is strict and doubles survive the trip", "[runner]") {
  const fs::path dir = fresh_dir("zklab_test_csv");
  const std::string path = (dir / "t.csv").string();
  CsvWriter w(path, {"a", "b"});
  const std::vector<double> vals = {1.0 / 3.0, 0.1, -2.5e-17, 1e300, kPi};
  for (double v : vals) w.row({format_double(v), format_double(2.0 * v)});
  CHECK_THROWS_AS(w.row({"1"}), ContractViolation);
  w.close();

  const CsvTable t = read_csv(path);
  REQUIRE(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    CHECK(std::stod(t.rows[i][0]) == vals[i]);
    CHECK(std::stod(t.rows[i][1]) == 2.0 * vals[i]);
  }
  CHECK(t.column("b") == 1);
  CHECK(t.column("nope") == -1);
  fs::remove_all(dir);
}

TEST_CASE("file hash agrees with the in-memory hash", "[runner]") {
  const fs::path dir = fresh_dir("zklab_test_hash");
  const std::string path = (dir / "h.bin").string();
  const std::string payload = "zklab hash check\n\x01\x02 payload";
  {
    std::ofstream o(path, std::ios::binary);
    o << payload;
  }
  CHECK(fnv1a_file(path) == fnv1a(payload));
  CHECK(hash_hex(fnv1a(payload)).size() == 16);
  CHECK_THROWS_AS(fnv1a_file((dir / "missing").string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("field files round-trip bit-for-bit", "[runner]") {
  const fs::path dir = fresh_dir("zklab_test_fields");
  Rng rng(99);

  const Grid g(2.0 * kPi, 8, 6);
  SpectralField u(g);
  u.real_field = false;
  for (auto& c : u.coeff) c = rng.gaussian_c();
  const std::string path = (dir / "u.field").string();
  save_field(u, path);
  const SpectralField v = load_field(path);
  CHECK(v.grid.Nx == 8);
  CHECK(v.grid.Ny == 6);
  CHECK(v.real_field == false);
  REQUIRE(v.coeff.size() == u.coeff.size());
  for (std::size_t i = 0; i < u.coeff.size(); ++i) CHECK(v.coeff[i] == u.coeff[i]);

  const nlohmann::json sidecar = nlohmann::json::parse(slurp(path + ".json"));
  CHECK(sidecar["kind"] == "spectral-field");
  CHECK(sidecar["Nx"] == 8);

  const Grid gs(2.0 * kPi, 4, 4, 2.0 * kPi, 8);
  SpaceTimeField U(gs);
  for (auto& c : U.coeff) c = rng.gaussian_c();
  const std::string spath = (dir / "U.field").string();
  save_field(U, spath);
  const SpaceTimeField V = load_spacetime_field(spath);
  CHECK(V.grid.Nt == 8);
  REQUIRE(V.coeff.size() == U.coeff.size());
  for (std::size_t i = 0; i < U.coeff.size(); ++i) CHECK(V.coeff[i] == U.coeff[i]);

  CHECK_THROWS_AS(load_field((dir / "missing.field").string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("svg plots render with escaped text and filtered points", "[runner]") {
  const fs::path dir = fresh_dir("zklab_test_svg");
  PlotSeries s;
  s.label = "q<max>";
  s.x = {0.0, 4.0, 8.0, 16.0};  // x = 0 must be dropped on a log axis
  s.y = {1.0, 1.0, 1.5, 2.0};
  PlotSpec spec;
  spec.title = "a<b & c";
  spec.log2_x = true;
  const std::string path = (dir / "p.svg").string();
  render_svg_plot(path, spec, {s});
  const std::string svg = slurp(path);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("a&lt;b &amp; c") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("q&lt;max&gt;") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("parallel map fills slots identically to the serial loop", "[runner]") {
  std::vector<int> serial(17, -1), pooled(17, -1);
  parallel_cells(17, 1, [&](int i) { serial[static_cast<std::size_t>(i)] = i * i; });
  parallel_cells(17, 4, [&](int i) { pooled[static_cast<std::size_t>(i)] = i * i; });
  CHECK(serial == pooled);
}

TEST_CASE("runner writes outputs and a manifest that verifies", "[runner]") {
  const fs::path dir = fresh_dir("zklab_test_run");
  const Config cfg = parse_config(
      "seed = 11\n"
      "[identities]\n"
      "tuples = 50\n"
      "[resonance]\n"
      "tuples = 20\n"
      "[report]\n");

  RunContext ctx;
  ctx.out_dir = dir.string();
  const int code = run(cfg, ctx);
  CHECK(code == 0);

  REQUIRE(fs::exists(dir / "manifest.json"));
  const nlohmann::json man = nlohmann::json::parse(slurp((dir / "manifest.json").string()));
  CHECK(man["exit_code"] == 0);
  CHECK(man["seed"] == 11);
  CHECK(man["degenerate_events"] == 0);
  CHECK(man["config_hash"] == hash_hex(fnv1a(serialize_config(cfg))));
  REQUIRE(man["outputs"].is_array());
  REQUIRE(man["outputs"].size() >= 2);
  for (const auto& o : man["outputs"]) {
    const fs::path p = dir / o["path"].get<std::string>();
    REQUIRE(fs::exists(p));
    CHECK(o["hash"].get<std::string>() == hash_hex(fnv1a_file(p.string())));
  }

  const CsvTable ident = read_csv((dir / "identities.csv").string());
  REQUIRE(ident.rows.size() == 1);
  CHECK(ident.rows[0][ident.column("tuples")] == "50");
  CHECK(ident.rows[0][ident.column("failures")] == "0");
  CHECK(ident.rows[0][ident.column("max_abs_defect")] == "0");
  fs::remove_all(dir);
}

TEST_CASE("identical configs produce byte-identical outputs", "[runner]") {
  const Config cfg = parse_config("seed = 5\n[identities]\ntuples = 40\n[resonance]\ntuples = 10\n");
  const fs::path d1 = fresh_dir("zklab_test_repro1");
  const fs::path d2 = fresh_dir("zklab_test_repro2");
  RunContext c1, c2;
  c1.out_dir = d1.string();
  c2.out_dir = d2.string();
  REQUIRE(run(cfg, c1) == 0);
  REQUIRE(run(cfg, c2) == 0);
  for (const char* name : {"identities.csv", "resonance_scan.csv", "manifest.json"}) {
    CHECK(fnv1a_file((d1 / name).string()) == fnv1a_file((d2 / name).string()));
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("explicit family lists and bad configs are rejected up front", "[runner]") {
  const fs::path dir = fresh_dir("zklab_test_badcfg");
  RunContext ctx;
  ctx.out_dir = dir.string();

  Config none;
  none.set("", "seed", "1");
  CHECK_THROWS_AS(run(none, ctx), ConfigError);

  Config unknown;
  unknown.set("", "families", "identities frobnicate");
  unknown.set("identities", "tuples", "5");
  CHECK_THROWS_AS(run(unknown, ctx), ConfigError);

  Config badgrid;
  badgrid.set("grid", "Nx", "7");  // odd extent
  badgrid.set("identities", "tuples", "5");
  CHECK_THROWS_AS(run(badgrid, ctx), ConfigError);

  Config badlist;
  badlist.set("", "families", "l4");
  badlist.set("l4", "Ns", "");
  CHECK_THROWS_AS(run(badlist, ctx), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("report family plots whatever csvs are present", "[runner]") {
  const fs::path dir = fresh_dir("zklab_test_report");
  {
    CsvWriter w((dir / "l4_rows.csv").string(), {"N", "quotient"});
    w.row({"4", format_double(1.0)});
    w.row({"8", format_double(1.4)});
    w.row({"16", format_double(1.9)});
    w.close();
  }
  RunContext ctx;
  ctx.out_dir = dir.string();
  run_report(Config{}, ctx);
  REQUIRE(fs::exists(dir / "l4_quotient.svg"));
  CHECK(slurp((dir / "l4_quotient.svg").string()).find("<svg") == 0);
  REQUIRE(ctx.outputs.size() == 1);
  CHECK(ctx.outputs[0].rows == 1);
  fs::remove_all(dir);
}
