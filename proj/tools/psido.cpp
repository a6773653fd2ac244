#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psido/psido.hpp"

namespace {

int dispatch(CLI::App& app, const CLI::App* run, const CLI::App* index, const CLI::App* cat,
             psido::RunConfig& cfg, const std::string& config_path, const std::string& grid_spec,
             const std::vector<std::string>& tol_kv, const std::string& index_symbol, double t0,
             double xi0, double radius, long samples, const std::string& index_out) {
  using psido::SchemaError;
  if (cat->parsed()) return psido::catalog_command();
  if (index->parsed())
    return psido::index_command(index_symbol, t0, xi0, radius, samples, index_out);
  if (run->parsed()) {
    if (!config_path.empty()) {
      nlohmann::json j;
      try {
        j = psido::read_json_file(config_path);
      } catch (const std::exception& e) {
        throw SchemaError(std::string("config file: ") + e.what());
      }
      psido::RunConfig file_cfg = psido::run_config_from_json(j);
      // flags given on the command line win over the file
      if (cfg.suites.empty()) cfg.suites = file_cfg.suites;
      if (grid_spec.empty()) cfg.grids = file_cfg.grids;
      if (cfg.out_dir == "psido_out") cfg.out_dir = file_cfg.out_dir;
      if (cfg.seed == 2026) cfg.seed = file_cfg.seed;
      if (cfg.symbols.empty()) cfg.symbols = file_cfg.symbols;
      for (const auto& kv : file_cfg.tol_overrides)
        cfg.tol_overrides.emplace(kv.first, kv.second);
    }
    if (!grid_spec.empty()) cfg.grids = psido::parse_grid_spec(grid_spec);
    for (const std::string& kv : tol_kv) {
      size_t eq = kv.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 >= kv.size())
        throw SchemaError("tolerance override must look like KEY=VAL, got '" + kv + "'");
      try {
        cfg.tol_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw SchemaError("bad tolerance value in '" + kv + "'");
      }
    }
    return psido::run_command(cfg);
  }
  std::printf("%s\n", app.help().c_str());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"global pseudo-differential calculus on the open unit cube"};
  app.require_subcommand(0, 1);

  psido::RunConfig cfg;
  std::string config_path, grid_spec, index_out;
  std::vector<std::string> tol_kv;
  std::string index_symbol = "oscillator";
  double t0 = 0.0, xi0 = 0.0, radius = 3.0;
  long samples = 512;

  CLI::App* run = app.add_subcommand("run", "execute probe suites and write reports");
  run->add_option("config", config_path, "JSON config file");
  run->add_option("--suite", cfg.suites, "suite name (repeatable): core|spectral|multipliers|sobolev|all");
  run->add_option("--symbol", cfg.symbols, "symbol selection for the boundedness probe (repeatable)");
  run->add_option("--grid", grid_spec, "grid schedule T:M[,T:M...]; T accepts pi multiples like 4pi");
  run->add_option("--seed", cfg.seed, "random seed (fixed seed => byte-identical reports)");
  run->add_option("--out", cfg.out_dir, "output directory");
  run->add_option("--tol-override", tol_kv, "tolerance override KEY=VAL (repeatable)");

  CLI::App* index = app.add_subcommand("index", "winding number of a symbol along a circle");
  index->add_option("--symbol", index_symbol, "catalog symbol name");
  index->add_option("--t0", t0, "contour center, spatial coordinate");
  index->add_option("--xi0", xi0, "contour center, frequency coordinate");
  index->add_option("--radius", radius, "contour radius");
  index->add_option("--samples", samples, "initial sample count (doubled until converged)");
  index->add_option("--out", index_out, "also write the report to this file");

  CLI::App* cat = app.add_subcommand("catalog", "list built-in symbols, probes and suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    return dispatch(app, run, index, cat, cfg, config_path, grid_spec, tol_kv, index_symbol, t0,
                    xi0, radius, samples, index_out);
  } catch (const psido::SchemaError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "probe failure: %s\n", e.what());
    return 1;
  }
}
