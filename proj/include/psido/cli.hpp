#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "psido/calculus.hpp"
#include "psido/catalog.hpp"
#include "psido/io.hpp"

namespace psido {

// Config or flag contents that violate the documented schema; mapped to
// exit code 2 by the driver.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Run configuration.

// "T:M[,T:M...]"; T accepts plain decimals and pi multiples ("4pi", "0.5pi").
inline std::vector<GridSched> parse_grid_spec(const std::string& spec_str) {
  std::vector<GridSched> out;
  std::stringstream ss(spec_str);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= item.size())
      throw SchemaError("grid entry must look like T:M, got '" + item + "'");
    std::string tpart = item.substr(0, colon), mpart = item.substr(colon + 1);
    double T = 0.0;
    size_t used = 0;
    try {
      if (tpart == "pi") {
        T = M_PI;
        used = tpart.size();
      } else if (tpart.size() > 2 && tpart.compare(tpart.size() - 2, 2, "pi") == 0) {
        T = M_PI * std::stod(tpart.substr(0, tpart.size() - 2), &used);
        used += 2;
      } else {
        T = std::stod(tpart, &used);
      }
    } catch (const std::exception&) {
      throw SchemaError("bad grid window '" + tpart + "'");
    }
    if (used != tpart.size() || !(T > 0.0))
      throw SchemaError("bad grid window '" + tpart + "'");
    long M = 0;
    try {
      M = std::stol(mpart, &used);
    } catch (const std::exception&) {
      throw SchemaError("bad grid size '" + mpart + "'");
    }
    if (used != mpart.size() || M < 8 || (M & (M - 1)) != 0)
      throw SchemaError("grid size must be a power of two >= 8, got '" + mpart + "'");
    out.push_back({T, M});
  }
  if (out.empty()) throw SchemaError("empty grid specification");
  return out;
}

struct RunConfig {
  std::vector<GridSched> grids = {{8.0, 128}, {8.0, 256}, {8.0, 512}};
  unsigned long long seed = 2026;
  std::string out_dir = "psido_out";
  std::vector<std::string> suites;
  std::vector<std::string> symbols;  // CV-probe selection; empty = default trio
  std::map<std::string, double> tol_overrides;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> v = {"core", "spectral", "multipliers", "sobolev", "all"};
  return v;
}

// Strict schema: the five keys below, exact types, nothing else.
inline RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("config root must be a JSON object");
  RunConfig cfg;
  for (const auto& kv : j.items()) {
    const std::string& key = kv.key();
    if (key != "grids" && key != "seed" && key != "out" && key != "suites" &&
        key != "symbols" && key != "tolerances")
      throw SchemaError("unknown config key '" + key + "'");
  }
  try {
    if (j.contains("grids")) {
      cfg.grids.clear();
      if (!j["grids"].is_array()) throw SchemaError("'grids' must be an array");
      for (const auto& e : j["grids"]) {
        if (e.is_string()) {
          for (const GridSched& s : parse_grid_spec(e.get<std::string>())) cfg.grids.push_back(s);
        } else if (e.is_array() && e.size() == 2) {
          std::ostringstream os;
          os << e.at(0).get<double>() << ":" << e.at(1).get<long>();
          for (const GridSched& s : parse_grid_spec(os.str())) cfg.grids.push_back(s);
        } else {
          throw SchemaError("'grids' entries must be \"T:M\" strings or [T, M] pairs");
        }
      }
      if (cfg.grids.empty()) throw SchemaError("'grids' must not be empty");
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned long long>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("suites")) cfg.suites = j["suites"].get<std::vector<std::string>>();
    if (j.contains("symbols")) cfg.symbols = j["symbols"].get<std::vector<std::string>>();
    if (j.contains("tolerances")) {
      if (!j["tolerances"].is_object()) throw SchemaError("'tolerances' must be an object");
      for (const auto& kv : j["tolerances"].items())
        cfg.tol_overrides[kv.key()] = kv.value().get<double>();
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("config type error: ") + e.what());
  }
  return cfg;
}

inline void validate_run_config(const RunConfig& cfg) {
  if (cfg.suites.empty())
    throw SchemaError("no suites selected; pass --suite or a config with 'suites'");
  for (const std::string& s : cfg.suites) {
    bool known = false;
    for (const std::string& k : known_suites()) known = known || k == s;
    if (!known) throw SchemaError("unknown suite '" + s + "'");
  }
  for (const std::string& name : cfg.symbols) make_catalog_symbol(name);  // throws if unknown
}

// ---------------------------------------------------------------------------
// Probe outcomes.

struct ProbeOutcome {
  std::string name;  // suite/probe
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::uint64_t probe_seed(const RunConfig& cfg, std::uint64_t salt) {
  return cfg.seed * 1000003ULL + salt;
}

inline std::vector<double> schedule_ms(const std::vector<GridSched>& sched) {
  std::vector<double> v;
  for (const GridSched& s : sched) v.push_back(static_cast<double>(s.M));
  return v;
}

inline void write_probe(const std::string& dir, const std::string& stem, const ProbeReport& r) {
  write_json_file(probe_report_to_json(r), dir + "/" + stem + ".json");
  std::vector<std::pair<std::string, std::vector<double>>> curves(r.measured.begin(),
                                                                  r.measured.end());
  write_curves_csv(dir + "/" + stem + ".csv", "M", schedule_ms(r.schedule), curves);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Suites. Each probe writes its report under <out>/<suite>/ and contributes
// one outcome; a failing outcome names the violated invariant.

inline std::vector<ProbeOutcome> run_core_suite(const RunConfig& cfg, const std::string& dir) {
  std::vector<ProbeOutcome> out;

  // transform round trip, band-limited inputs
  {
    ProbeReport rep;
    rep.probe = "transform_roundtrip";
    rep.schedule = cfg.grids;
    rep.tolerance = 1e-8;
    double worst = 0.0;
    std::mt19937_64 rng(detail::probe_seed(cfg, 1));
    for (const GridSched& gs : cfg.grids) {
      GridPtr g = make_grid(gs.T, gs.M, 1);
      GFunction f = random_decaying(g, rng);
      GFunction rt = inv_fourier_G(fourier_G(f));
      double rel = l2_norm(GFunction{g, rt.values - f.values}) / l2_norm(f);
      rep.measured["roundtrip_rel"].push_back(rel);
      worst = std::max(worst, rel);
    }
    rep.verdict = worst <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "transform_roundtrip", rep);
    out.push_back({"core/transform_roundtrip", worst <= rep.tolerance,
                   "analysis-synthesis round trip, worst rel " + fmt17(worst)});
  }

  // Plancherel constant = 1 across the schedule
  {
    ProbeReport rep;
    rep.probe = "plancherel_constant";
    rep.schedule = cfg.grids;
    rep.tolerance = 1e-6;
    double worst = 0.0;
    for (size_t i = 0; i < cfg.grids.size(); ++i) {
      GridPtr g = make_grid(cfg.grids[i].T, cfg.grids[i].M, 1);
      double c = plancherel_constant(g, 20, detail::probe_seed(cfg, 100 + i));
      rep.measured["constant"].push_back(c);
      worst = std::max(worst, std::abs(c - 1.0));
    }
    rep.verdict = worst <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "plancherel_constant", rep);
    out.push_back({"core/plancherel_constant", worst <= rep.tolerance,
                   "energy ratio vs 1, worst deviation " + fmt17(worst)});
  }

  // both quantization routes agree
  {
    ProbeReport rep;
    rep.probe = "quantize_dual_path";
    rep.tolerance = 1e-7;
    GridSched gs = cfg.grids[cfg.grids.size() > 1 ? 1 : 0];
    rep.schedule = {gs};
    GridPtr g = make_grid(gs.T, gs.M, 1);
    std::mt19937_64 rng(detail::probe_seed(cfg, 2));
    double worst = 0.0;
    for (const char* name : {"sine", "bessel(1)", "oscillator"}) {
      Symbol s = make_catalog_symbol(name);
      double symbol_worst = 0.0;
      for (int trial = 0; trial < 5; ++trial) {
        GFunction f = random_decaying(g, rng);
        GFunction a = apply_op(s, f);
        GFunction b = apply_op_pullback(s, f);
        symbol_worst = std::max(
            symbol_worst, l2_norm(GFunction{g, a.values - b.values}) / std::max(l2_norm(a), 1e-300));
      }
      rep.measured["rel_" + std::string(name)].push_back(symbol_worst);
      worst = std::max(worst, symbol_worst);
    }
    rep.verdict = worst <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "quantize_dual_path", rep);
    out.push_back({"core/quantize_dual_path", worst <= rep.tolerance,
                   "frequency-sum vs chart-transport quantization, worst rel " + fmt17(worst)});
  }

  // terminating expansions are exact on interior mode columns
  {
    ProbeReport rep;
    rep.probe = "compose_expansion_exact";
    rep.tolerance = 1e-9;
    rep.schedule = {{2.0 * M_PI, 128}};
    GridPtr g = make_grid(2.0 * M_PI, 128, 1);
    Symbol a = make_catalog_symbol("dfield"), b = make_catalog_symbol("sine");
    Symbol c = compose_expand(a, b, 2).truncated();
    double worst = 0.0;
    for (long k = g->M / 4; k <= 3L * g->M / 4; ++k) {
      Spectrum mode{g, Eigen::MatrixXcd::Zero(g->total(), 1)};
      mode.values(k, 0) = 1.0;
      GFunction f = inv_fourier_G(mode);
      GFunction u = apply_op(a, apply_op(b, f));
      GFunction v = apply_op(c, f);
      worst = std::max(worst,
                       l2_norm(GFunction{g, u.values - v.values}) / std::max(l2_norm(u), 1e-300));
    }
    rep.measured["halfband_rel"].push_back(worst);
    rep.verdict = worst <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "compose_expansion_exact", rep);
    out.push_back({"core/compose_expansion_exact", worst <= rep.tolerance,
                   "two-term composition of derivative and multiplication symbols, worst rel " +
                       fmt17(worst)});
  }

  // parametrix residual shrinks with expansion length, both sides comparable
  {
    GridPtr g = make_grid(2.0 * M_PI, 512, 1);
    Symbol a = make_catalog_symbol("helmholtz_sine");
    std::vector<double> xi0 = {16.0};
    std::vector<double> residuals;
    double side_ratio = 0.0;
    for (int N = 1; N <= 3; ++N) {
      Expansion E = parametrix(a, N, 1.0);
      ParametrixSideCheck sides = parametrix_two_sided(a, E, g, xi0);
      residuals.push_back(sides.ab[0]);
      if (N == 3) side_ratio = sides.max_ratio;
    }
    bool monotone = residuals[0] > residuals[1] && residuals[1] > residuals[2];
    bool sides_ok = side_ratio <= 10.0;
    std::vector<double> ns = {1, 2, 3};
    write_curves_csv(dir + "/parametrix_residuals.csv", "N", ns, {{"residual", residuals}});
    ProbeReport rep;
    rep.probe = "parametrix_residual";
    rep.schedule = {{2.0 * M_PI, 512}};
    rep.measured["residual"] = residuals;
    rep.measured["side_ratio"] = {side_ratio};
    rep.tolerance = 10.0;
    rep.verdict = monotone && sides_ok ? "pass" : "fail";
    rep.note = "residuals at xi0 = 16 for expansion lengths 1..3";
    write_json_file(probe_report_to_json(rep), dir + "/parametrix_residual.json");
    out.push_back({"core/parametrix_residual", monotone && sides_ok,
                   monotone ? "residuals " + fmt17(residuals[0]) + " > " + fmt17(residuals[1]) +
                                  " > " + fmt17(residuals[2]) + ", side factor " +
                                  fmt17(side_ratio)
                            : "residual sequence not monotone"});
  }

  return out;
}

inline std::vector<ProbeOutcome> run_spectral_suite(const RunConfig& cfg, const std::string& dir) {
  std::vector<ProbeOutcome> out;
  std::vector<GridSched> sched = cfg.grids;

  // Calderon-Vaillancourt style boundedness, p = 2
  {
    std::vector<std::string> names =
        cfg.symbols.empty() ? std::vector<std::string>{"sine", "mod_osc", "gohberg(0.3)"}
                            : cfg.symbols;
    bool all_ok = true;
    std::string detail_str;
    for (const std::string& name : names) {
      Symbol s = make_catalog_symbol(name);
      ProbeReport rep = cv_boundedness_probe(s, sched, 2.0);
      detail::write_probe(dir, "cv_" + std::string(name == "gohberg(0.3)" ? "gohberg" : name), rep);
      bool ok = rep.verdict == "stable";
      all_ok = all_ok && ok;
      detail_str += name + "=" + rep.verdict + " ";
    }
    out.push_back({"spectral/cv_boundedness", all_ok, "operator norms across grids: " + detail_str});
  }

  // compact vs boundary-obstructed multipliers
  {
    ProbeReport r0 = compactness_probe(make_catalog_symbol("gohberg(0)"), sched);
    detail::write_probe(dir, "compact_gohberg0", r0);
    ProbeReport r3 = compactness_probe(make_catalog_symbol("gohberg(0.3)"), sched);
    detail::write_probe(dir, "compact_gohberg03", r3);
    bool ok = r0.verdict == "compact-evidence" && r3.verdict == "noncompact-evidence";
    out.push_back({"spectral/compactness", ok,
                   "gohberg(0) " + r0.verdict + ", gohberg(0.3) " + r3.verdict});
  }

  // winding numbers on the standard contour
  {
    struct Row {
      const char* name;
      long expect;
    };
    bool ok = true;
    std::string detail_str;
    for (Row row : {Row{"identity", 0}, Row{"oscillator", 1}, Row{"oscillator_adj", -1},
                    Row{"squared_ratio", 2}}) {
      IndexReport rep = winding_index(make_catalog_symbol(row.name), Contour{0, 0, 3}, 512);
      write_json_file(index_report_to_json(rep),
                      dir + "/index_" + std::string(row.name) + ".json");
      bool this_ok = rep.index == row.expect &&
                     rep.residual <= global_config().winding_residual;
      ok = ok && this_ok;
      detail_str += std::string(row.name) + "=" + std::to_string(rep.index) + " ";
    }
    out.push_back({"spectral/winding_index", ok, "indices: " + detail_str});
  }

  // lower-bound drift for nonnegative symbols
  {
    std::vector<GridSched> gsched = {{8.0, 64}, {8.0, 128}, {8.0, 256}};
    Symbol sq = symbol_from_t_form(1, 2, 1, 0,
                                   [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
                                     double v = 2.0 * M_PI * xi[0] * std::sin(t[0]);
                                     return cd(v * v, 0.0);
                                   },
                                   "sine_square");
    ProbeReport rep = garding_probe(sq, gsched, 0.0);
    detail::write_probe(dir, "garding_sine_square", rep);
    bool ok = rep.verdict == "bounded-below";
    out.push_back({"spectral/garding", ok, "lower-bound estimate " + rep.verdict});
  }

  // near-zero singular triples of the annihilation operator
  {
    GridPtr g = make_grid(8.0, 256, 1);
    OperatorMatrix A = materialize_matrix(make_catalog_symbol("oscillator"), g);
    KernelReport rep = fredholm_kernel_probe(A);
    write_json_file(kernel_report_to_json(rep), dir + "/kernel_oscillator.json");
    bool ok = rep.conclusive && rep.k_plus == 1 && rep.k_minus == 0;
    out.push_back({"spectral/kernel_probe", ok,
                   "(k+, k-) = (" + std::to_string(rep.k_plus) + ", " +
                       std::to_string(rep.k_minus) + ")"});
  }

  return out;
}

inline std::vector<ProbeOutcome> run_multipliers_suite(const RunConfig& cfg,
                                                       const std::string& dir) {
  std::vector<ProbeOutcome> out;

  // the Cauchy operator squares to the identity
  {
    GridPtr g = make_grid(8.0, 256, 1);
    std::mt19937_64 rng(detail::probe_seed(cfg, 20));
    GFunction f = random_decaying(g, rng);
    GFunction ss = hilbert_G(hilbert_G(f));
    double rel = l2_norm(GFunction{g, ss.values - f.values}) / l2_norm(f);
    ProbeReport rep;
    rep.probe = "cauchy_involution";
    rep.schedule = {{8.0, 256}};
    rep.measured["rel"] = {rel};
    rep.tolerance = 1e-10;
    rep.verdict = rel <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "cauchy_involution", rep);
    out.push_back({"multipliers/cauchy_involution", rel <= rep.tolerance,
                   "S(S(f)) vs f rel " + fmt17(rel)});
  }

  // frequency path vs kernel quadrature path
  {
    GridPtr g = make_grid(16.0, 8192, 1);
    GFunction f = hermite_decay_probe(g, 4);
    GFunction a = hilbert_G(f, 0, "fourier");
    GFunction b = hilbert_G(f, 0, "kernel");
    double rel = l2_norm(GFunction{g, a.values - b.values}) / l2_norm(a);
    ProbeReport rep;
    rep.probe = "cauchy_dual_path";
    rep.schedule = {{16.0, 8192}};
    rep.measured["rel_l2"] = {rel};
    rep.tolerance = 2e-3;
    rep.verdict = rel <= rep.tolerance ? "pass" : "fail";
    rep.note = "probe spectrum vanishes to 4th order at xi = 0";
    detail::write_probe(dir, "cauchy_dual_path", rep);
    out.push_back({"multipliers/cauchy_dual_path", rel <= rep.tolerance,
                   "multiplier vs principal-value quadrature rel " + fmt17(rel)});
  }

  // random elliptic piecewise-constant inverses
  {
    GridPtr g = make_grid(8.0, 256, 1);
    std::mt19937_64 rng(detail::probe_seed(cfg, 21));
    GFunction f = random_decaying(g, rng);
    auto uni = [&rng](double lo, double hi) {
      return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      int nb = 1 + static_cast<int>(uni(0, 1) * 4);
      std::vector<double> breaks;
      double b = uni(-6, -2);
      for (int i = 0; i < nb; ++i) {
        breaks.push_back(b);
        b += uni(0.5, 3.0);
      }
      std::vector<cd> vals;
      for (int i = 0; i <= nb; ++i) vals.push_back(std::polar(uni(0.3, 2.0), uni(-3.0, 3.0)));
      PCSymbol1D a = PCSymbol1D::scalar(breaks, vals);
      FredholmVerdict v = pc_fredholm(a);
      if (!v.elliptic) {
        worst = 1.0;
        break;
      }
      GFunction round = conv_op(*v.inverse, conv_op(a, f));
      worst = std::max(worst, l2_norm(GFunction{g, round.values - f.values}) / l2_norm(f));
    }
    ProbeReport rep;
    rep.probe = "pc_inverse";
    rep.schedule = {{8.0, 256}};
    rep.measured["worst_rel"] = {worst};
    rep.tolerance = 1e-10;
    rep.verdict = worst <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "pc_inverse", rep);
    out.push_back({"multipliers/pc_inverse", worst <= rep.tolerance,
                   "20 random elliptic inverses, worst rel " + fmt17(worst)});
  }

  // a vanishing one-sided limit destroys the Fredholm property
  {
    PCSymbol1D zed = PCSymbol1D::scalar({-1.0, 1.0}, {cd(1, 0), cd(0, 0), cd(2, 0)});
    FredholmVerdict v = pc_fredholm(zed);
    write_json_file(fredholm_to_json(v), dir + "/fredholm_zero_limit.json");
    out.push_back({"multipliers/fredholm_zero_limit", !v.elliptic, v.note});
  }

  // derivative-integrability certificate
  {
    GridPtr g = make_grid(8.0, 256, 1);
    Symbol gauss_mod = symbol_from_t_form(
        1, 0, 1, 0,
        [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
          return std::exp(-t[0] * t[0]) * std::exp(cd(0.0, std::sin(xi[0])));
        },
        "gauss_mod");
    CondBReport finite_rep = condition_B_certificate(gauss_mod, 1, g);
    write_json_file(condb_report_to_json(finite_rep), dir + "/condb_gauss.json");
    Symbol sine_mod = symbol_from_t_form(
        1, 0, 1, 0,
        [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
          return std::sin(t[0]) * std::exp(cd(0.0, std::sin(xi[0])));
        },
        "sine_mod");
    CondBReport infinite_rep = condition_B_certificate(sine_mod, 1, g);
    write_json_file(condb_report_to_json(infinite_rep), dir + "/condb_sine.json");
    bool ok = finite_rep.finite && !infinite_rep.finite;
    out.push_back({"multipliers/condition_B", ok,
                   "localized symbol finite, non-decaying symbol divergent"});
  }

  return out;
}

inline std::vector<ProbeOutcome> run_sobolev_suite(const RunConfig& cfg, const std::string& dir) {
  std::vector<ProbeOutcome> out;
  GridPtr g = make_grid(8.0, 256, 1);
  std::mt19937_64 rng(detail::probe_seed(cfg, 30));
  GFunction f = random_decaying(g, rng);

  // smoothing-scale group law
  {
    GFunction rt = bessel_potential(bessel_potential(f, 2.0), -2.0);
    double rel = l2_norm(GFunction{g, rt.values - f.values}) / l2_norm(f);
    ProbeReport rep;
    rep.probe = "bessel_group_law";
    rep.schedule = {{8.0, 256}};
    rep.measured["rel"] = {rel};
    rep.tolerance = 1e-9;
    rep.verdict = rel <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "bessel_group_law", rep);
    out.push_back({"sobolev/bessel_group_law", rel <= rep.tolerance,
                   "(1-Lap)^{1} then (1-Lap)^{-1} vs identity rel " + fmt17(rel)});
  }

  // norm lifting under the smoothing scale
  {
    double lhs = hs_norm_op(bessel_potential(f, 1.5), 0.5);
    double rhs = hs_norm_op(f, 2.0);
    double rel = std::abs(lhs / rhs - 1.0);
    ProbeReport rep;
    rep.probe = "norm_lifting";
    rep.schedule = {{8.0, 256}};
    rep.measured["rel"] = {rel};
    rep.tolerance = 1e-6;
    rep.verdict = rel <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "norm_lifting", rep);
    out.push_back({"sobolev/norm_lifting", rel <= rep.tolerance,
                   "order shift by 1.5 vs direct order-2 norm, rel " + fmt17(rel)});
  }

  // order zero coincides with the plain L2 norm
  {
    double rel = std::abs(hs_norm(f, 0.0) / l2_norm(f) - 1.0);
    ProbeReport rep;
    rep.probe = "h0_is_l2";
    rep.schedule = {{8.0, 256}};
    rep.measured["rel"] = {rel};
    rep.tolerance = 1e-8;
    rep.verdict = rel <= rep.tolerance ? "pass" : "fail";
    detail::write_probe(dir, "h0_is_l2", rep);
    out.push_back({"sobolev/h0_is_l2", rel <= rep.tolerance, "norm ratio vs 1, rel " + fmt17(rel)});
  }

  // fractional vs integer norms stay within a fixed bracket
  {
    std::vector<GridPtr> sched = {make_grid(32.0, 256, 1), make_grid(32.0, 512, 1)};
    bool ok = true;
    for (int m = 0; m <= 2; ++m) {
      NormEquivReport rep = norm_equivalence_probe(
          [](GridPtr gg) { return gaussian_family(gg, 20); }, sched, m);
      write_json_file(norm_equiv_to_json(rep), dir + "/norm_equiv_m" + std::to_string(m) + ".json");
      ok = ok && rep.pass;
    }
    out.push_back({"sobolev/norm_equivalence", ok, "Gaussian family, orders 0..2"});
  }

  return out;
}

// ---------------------------------------------------------------------------
// Commands.

inline int run_command(RunConfig cfg) {
  validate_run_config(cfg);
  for (const auto& kv : cfg.tol_overrides) {
    try {
      global_config().by_name(kv.first) = kv.second;
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what());
    }
  }
  bool all = false;
  for (const std::string& s : cfg.suites) all = all || s == "all";
  std::vector<std::string> suites =
      all ? std::vector<std::string>{"core", "spectral", "multipliers", "sobolev"} : cfg.suites;

  std::filesystem::create_directories(cfg.out_dir);
  std::vector<ProbeOutcome> outcomes;
  for (const std::string& suite : suites) {
    std::string dir = cfg.out_dir + "/" + suite;
    std::filesystem::create_directories(dir);
    std::vector<ProbeOutcome> got;
    if (suite == "core") got = run_core_suite(cfg, dir);
    if (suite == "spectral") got = run_spectral_suite(cfg, dir);
    if (suite == "multipliers") got = run_multipliers_suite(cfg, dir);
    if (suite == "sobolev") got = run_sobolev_suite(cfg, dir);
    outcomes.insert(outcomes.end(), got.begin(), got.end());
  }

  ordered_json summary;
  summary["ledger"] = kLedgerVersion;
  summary["seed"] = cfg.seed;
  ordered_json grids = ordered_json::array();
  for (const GridSched& gs : cfg.grids) grids.push_back({{"T", gs.T}, {"M", gs.M}});
  summary["grids"] = grids;
  summary["suites"] = suites;
  ordered_json probes = ordered_json::array();
  int failures = 0;
  for (const ProbeOutcome& o : outcomes) {
    probes.push_back({{"probe", o.name}, {"pass", o.pass}, {"detail", o.detail}});
    if (!o.pass) ++failures;
  }
  summary["probes"] = probes;
  summary["failures"] = failures;
  write_json_file(summary, cfg.out_dir + "/summary.json");

  for (const ProbeOutcome& o : outcomes)
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str(), o.detail.c_str());
  if (failures > 0) {
    for (const ProbeOutcome& o : outcomes)
      if (!o.pass) std::printf("invariant failed: %s\n", o.name.c_str());
    return 1;
  }
  return 0;
}

inline int index_command(const std::string& symbol_name, double t0, double xi0, double radius,
                         long samples, const std::string& out_path) {
  Symbol s = make_catalog_symbol(symbol_name);
  IndexReport rep = winding_index(s, Contour{t0, xi0, radius}, samples);
  ordered_json j = index_report_to_json(rep);
  std::printf("%s\n", j.dump(2).c_str());
  if (!out_path.empty()) write_json_file(j, out_path);
  if (rep.residual > global_config().winding_residual) {
    std::printf("invariant failed: winding residual %s above %s\n", fmt17(rep.residual).c_str(),
                fmt17(global_config().winding_residual).c_str());
    return 1;
  }
  return 0;
}

inline int catalog_command() {
  ordered_json j;
  j["ledger"] = kLedgerVersion;
  ordered_json syms = ordered_json::array();
  for (const CatalogEntry& e : catalog_entries()) {
    ordered_json row;
    row["name"] = e.name;
    row["params"] = e.params;
    row["order"] = e.order;
    row["rho"] = e.rho;
    row["delta"] = e.delta;
    row["nu"] = e.nu;
    row["summary"] = e.summary;
    syms.push_back(row);
  }
  j["symbols"] = syms;
  j["suites"] = known_suites();
  j["probes"] = {"transform_roundtrip", "plancherel_constant", "quantize_dual_path",
                 "compose_expansion_exact", "parametrix_residual", "cv_boundedness",
                 "compactness", "winding_index", "garding", "kernel_probe",
                 "cauchy_involution", "cauchy_dual_path", "pc_inverse", "fredholm_zero_limit",
                 "condition_B", "bessel_group_law", "norm_lifting", "h0_is_l2",
                 "norm_equivalence"};
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

}  // namespace psido
