// Acceptance gate: every shipping contract below prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero iff any of them failed.
#include <psido/psido.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unistd.h>

using namespace psido;
using cd = std::complex<double>;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!ok) ++g_failures;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Radius 0.95 keeps the law well conditioned in the x chart: compositions of
// radius-r points reach 2r/(1+r^2), where rounding is amplified by 1/(1-s^2).
GPoint rand_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return GPoint(v);
}

// ---- 1: group axioms and the chart homomorphism ---------------------------

void criterion_1() {
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 1000; ++trial) {
      GPoint a = rand_point(n, rng), b = rand_point(n, rng), c = rand_point(n, rng);
      worst = std::max(worst, (gop_add(gop_add(a, b), c).coords() -
                               gop_add(a, gop_add(b, c)).coords()).cwiseAbs().maxCoeff());
      worst = std::max(worst,
                       (gop_add(a, gop_identity(n)).coords() - a.coords()).cwiseAbs().maxCoeff());
      worst = std::max(worst, gop_add(a, gop_inverse(a)).coords().cwiseAbs().maxCoeff());
      Eigen::VectorXd homo =
          map_t(gop_add(a, b)).coords() - map_t(a).coords() - map_t(b).coords();
      worst = std::max(worst, homo.cwiseAbs().maxCoeff());
      worst = std::max(worst, (map_x(map_t(a)).coords() - a.coords()).cwiseAbs().maxCoeff());
    }
  }
  report(1, worst <= 1e-12, "group axioms + chart homomorphism, worst dev " + num(worst));
}

// ---- 2: derivative field against closed-form derivatives ------------------

void criterion_2() {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  using Fn = std::function<double(double)>;
  struct Pair {
    Fn f, df;
  };
  std::vector<Pair> pairs = {
      {[](double t) { return std::exp(-t * t / 2); },
       [](double t) { return -t * std::exp(-t * t / 2); }},
      {[](double t) { return std::exp(-t * t); },
       [](double t) { return -2 * t * std::exp(-t * t); }},
      {[](double t) { return t * std::exp(-t * t / 2); },
       [](double t) { return (1 - t * t) * std::exp(-t * t / 2); }},
      {[](double t) { return std::sin(t) * std::exp(-t * t / 2); },
       [](double t) { return (std::cos(t) - t * std::sin(t)) * std::exp(-t * t / 2); }},
      {[](double t) { return std::cos(2 * t) * std::exp(-t * t / 2); },
       [](double t) { return (-2 * std::sin(2 * t) - t * std::cos(2 * t)) * std::exp(-t * t / 2); }},
      {[](double t) { return t * t * std::exp(-t * t); },
       [](double t) { return (2 * t - 2 * t * t * t) * std::exp(-t * t); }},
      {[](double t) { return (t * t * t - t) * std::exp(-t * t / 2); },
       [](double t) { return (3 * t * t - 1 - t * (t * t * t - t)) * std::exp(-t * t / 2); }},
      {[](double t) { return std::sin(3 * t) * std::exp(-t * t / 2); },
       [](double t) { return (3 * std::cos(3 * t) - t * std::sin(3 * t)) * std::exp(-t * t / 2); }},
      {[](double t) { return std::cosh(t) * std::exp(-t * t); },
       [](double t) { return (std::sinh(t) - 2 * t * std::cosh(t)) * std::exp(-t * t); }},
      {[](double t) { return std::exp(-(t - 1) * (t - 1) / 2); },
       [](double t) { return -(t - 1) * std::exp(-(t - 1) * (t - 1) / 2); }},
  };
  double worst = 0.0;
  for (const Pair& p : pairs) {
    GFunction f = sample_t1(g, [&](double t) { return cd(p.f(t), 0.0); });
    GFunction want = sample_t1(g, [&](double t) { return cd(p.df(t), 0.0); });
    worst = std::max(worst, max_abs(dfield1(f, 1).values - want.values));
  }
  report(2, worst <= 1e-6,
         "derivative field vs closed forms, 10 profiles, sup dev " + num(worst));
}

// ---- 3: transform round trip and the Plancherel constants ------------------

void criterion_3() {
  edge_warning_count() = 1;
  std::mt19937_64 rng(7);
  double worst_rt = 0.0, worst_pl = 0.0;
  for (long M : {128L, 256L, 512L}) {
    GridPtr g = make_grid(8.0, M);
    GFunction f = random_decaying(g, rng);
    worst_rt = std::max(worst_rt, max_abs(inv_fourier_G(fourier_G(f)).values - f.values));
    worst_pl = std::max(worst_pl, std::abs(plancherel_constant(g) - 1.0));
  }
  double h1 = plancherel_constant_halfscale(make_grid(8.0, 128));
  double h2 = plancherel_constant_halfscale(make_grid(4.0, 32, 2), 5);
  bool ok = worst_rt <= 1e-8 && worst_pl <= 1e-6 && std::abs(h1 - 2.0) <= 1e-6 &&
            std::abs(h2 - 4.0) <= 1e-6 && std::abs(h1 - M_PI) > 0.1 &&
            std::abs(h2 - M_PI * M_PI) > 0.1;
  report(3, ok,
         "round trip " + num(worst_rt) + ", unit constant dev " + num(worst_pl) +
             ", half-scale constants " + num(h1) + " / " + num(h2) + " (powers of two)");
}

// ---- 4: the two quantization paths agree across the catalog ----------------

void criterion_4() {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  // Contour-only symbols (undefined at the origin node) are excluded.
  std::vector<std::string> names = {
      "identity",    "dfield",      "bessel(1)",  "bessel(-1)",
      "oscillator",  "oscillator_adj", "gohberg(0)", "gohberg(0.3)",
      "shubin_annihilation", "sine", "mod_osc",    "helmholtz_sine",
      "bessel_sine(1)", "poly:sin(t);1+t^2"};
  double worst = 0.0;
  std::hash<std::string> hs;
  for (const std::string& nm : names) {
    Symbol s = make_catalog_symbol(nm);
    for (int trial = 0; trial < 20; ++trial) {
      std::mt19937_64 rng(1000003ULL * 2026 + 89ULL * trial + hs(nm) % 1000);
      GFunction f = random_decaying(g, rng);
      GFunction u = apply_op(s, f), v = apply_op_pullback(s, f);
      worst = std::max(worst, max_abs(u.values - v.values) / std::max(1.0, max_abs(u.values)));
    }
  }
  report(4, worst <= 1e-7,
         "state-side vs chart-side application, 14 symbols x 20 seeds, worst " + num(worst));
}

// ---- 5: expansion exactness and remainder decay rates ----------------------

void criterion_5() {
  edge_warning_count() = 1;
  GridPtr g = make_grid(2.0 * M_PI, 128);
  auto mode_worst = [&](const Symbol& a, const Symbol& b, const Symbol& c, bool adj) {
    double worst = 0.0;
    for (long k = g->M / 4; k <= 3 * g->M / 4; ++k) {
      GFunction f{g, Eigen::MatrixXcd(g->total(), 1)};
      for (long j = 0; j < g->total(); ++j)
        f.values(j, 0) = std::polar(1.0, 2.0 * M_PI * g->t_axis[j] * g->xi_axis[k]);
      GFunction u = adj ? apply_op_adjoint(a, f) : apply_op(a, apply_op(b, f));
      GFunction v = apply_op(c, f);
      worst = std::max(worst, l2_norm(GFunction{g, (u.values - v.values).eval()}) / l2_norm(f));
    }
    return worst;
  };
  Symbol d = sym_dfield(), sn = sym_sine();
  double w_comp = mode_worst(d, sn, compose_expand(d, sn, 2).truncated(), false);
  Symbol p = make_catalog_symbol("poly:0;sin(t)");
  double w_adj = mode_worst(p, p, adjoint_expand(p, 2).truncated(), true);

  GridPtr gf = make_grid(2.0 * M_PI, 512);
  Symbol b1 = sym_bessel(1.0);
  bool slopes_ok = true;
  double worst_slack = -1e9;
  for (int N = 1; N <= 2; ++N) {
    Expansion E = compose_expand(b1, sn, N);
    ResidualFit fit = residual_probe_compose(b1, sn, E, gf, {6.0, 10.0, 16.0});
    slopes_ok = slopes_ok && fit.within_contract && fit.slope <= fit.bound;
    worst_slack = std::max(worst_slack, fit.slope - fit.bound);
  }
  Symbol bs = sym_bessel_sine(1.0);
  for (int N = 1; N <= 2; ++N) {
    Expansion E = adjoint_expand(bs, N);
    ResidualFit fit = residual_probe_adjoint(bs, E, gf, {6.0, 10.0, 16.0});
    slopes_ok = slopes_ok && fit.within_contract && fit.slope <= fit.bound;
    worst_slack = std::max(worst_slack, fit.slope - fit.bound);
  }
  bool ok = w_comp <= 1e-7 && w_adj <= 1e-7 && slopes_ok;
  report(5, ok,
         "polynomial compose/adjoint exact to " + num(std::max(w_comp, w_adj)) +
             ", remainder slopes within contract (worst slack " + num(worst_slack) + ")");
}

// ---- 6: parametrix residuals shrink with depth on both sides ---------------

void criterion_6() {
  edge_warning_count() = 1;
  GridPtr g = make_grid(2.0 * M_PI, 512);
  Symbol a = sym_helmholtz_sine();
  double prev = std::numeric_limits<double>::infinity(), ratio_worst = 0.0;
  bool monotone = true;
  std::string seq;
  for (int N = 1; N <= 3; ++N) {
    Expansion E = parametrix(a, N, 1.0);
    ParametrixSideCheck sc = parametrix_two_sided(a, E, g, {16.0});
    monotone = monotone && sc.ab[0] < prev && sc.ba[0] < prev;
    ratio_worst = std::max(ratio_worst, sc.max_ratio);
    prev = sc.ab[0];
    seq += (N > 1 ? " -> " : "") + num(sc.ab[0]);
  }
  report(6, monotone && ratio_worst <= 10.0,
         "two-sided parametrix residuals " + seq + ", side ratio <= " + num(ratio_worst));
}

// ---- 7: norm stability for order zero, growth for positive order -----------

void criterion_7() {
  edge_warning_count() = 1;
  double drift = 0.0;
  for (const char* nm : {"sine", "mod_osc", "gohberg(0.3)"}) {
    Symbol s = make_catalog_symbol(nm);
    double prev = 0.0;
    for (long M : {128L, 256L, 512L}) {
      double v = op_norm_L2(materialize_matrix(s, make_grid(8.0, M)));
      if (prev > 0.0) drift = std::max(drift, std::abs(v - prev) / prev);
      prev = v;
    }
  }
  Symbol up = sym_bessel(0.5);
  double v128 = op_norm_L2(materialize_matrix(up, make_grid(8.0, 128)));
  double v512 = op_norm_L2(materialize_matrix(up, make_grid(8.0, 512)));
  double growth = v512 / v128 - 1.0;
  report(7, drift <= 0.10 && growth >= 0.50,
         "order-zero norm drift " + num(drift) + " (<= 10%), order-1/2 growth " + num(growth) +
             " (>= 50%)");
}

// ---- 8: tail singular values separate compact from noncompact --------------

void criterion_8() {
  edge_warning_count() = 1;
  std::vector<GridSched> sched = {{8.0, 128}, {8.0, 256}, {8.0, 512}};
  ProbeReport rc = compactness_probe(sym_gohberg(0.0), sched);
  ProbeReport rn = compactness_probe(sym_gohberg(0.3), sched);
  ProbeReport ri = compactness_probe(sym_identity(), sched);
  bool ok = rc.verdict == "compact-evidence" && rn.verdict == "noncompact-evidence" &&
            ri.verdict == "noncompact-evidence";
  double tail_floor = 1e9;
  for (double v : rn.measured.at("sigma_65")) tail_floor = std::min(tail_floor, v);
  ok = ok && tail_floor >= 0.9 * 0.3;
  for (const char* key : {"sigma_4", "sigma_16", "sigma_64", "sigma_65"})
    for (double v : ri.measured.at(key)) ok = ok && std::abs(v - 1.0) <= 1e-10;
  report(8, ok,
         "verdicts compact/noncompact/noncompact, tail floor " + num(tail_floor) +
             ", unitary tail exactly 1");
}

// ---- 9: winding numbers land on the expected integers ----------------------

void criterion_9() {
  Contour c{0.0, 0.0, 3.0};
  struct Row {
    const char* nm;
    long want;
  } rows[] = {{"identity", 0},
              {"oscillator", 1},
              {"oscillator_adj", -1},
              {"squared_ratio", 2},
              {"squared_ratio_conj", -2}};
  bool ok = true;
  double worst_res = 0.0;
  for (const Row& r : rows) {
    IndexReport rep = winding_index(make_catalog_symbol(r.nm), c);
    ok = ok && rep.index == r.want;
    worst_res = std::max(worst_res, rep.residual);
  }
  ok = ok && worst_res <= 1e-6;
  report(9, ok, "indices {0, +1, -1, +2, -2}, worst residual " + num(worst_res));
}

// ---- 10: sign multiplier and piecewise Fredholm theory ---------------------

void criterion_10() {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  std::mt19937_64 rng(4);
  GFunction f = random_decaying(g, rng);
  double invol = max_abs(hilbert_G(hilbert_G(f)).values - f.values);

  GridPtr gk = make_grid(16.0, 16384);
  GFunction hp = hermite_decay_probe(gk, 4);
  GFunction a = hilbert_G(hp), b = hilbert_G(hp, 0, "kernel");
  double dual = max_abs(a.values - b.values) / max_abs(a.values);

  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst_inv = 0.0;
  int inverted = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int nb = 1 + int(std::abs(U(rng)) * 4);
    std::vector<double> brk(nb);
    for (int i = 0; i < nb; ++i) brk[i] = -3.0 + 6.0 * (i + U(rng) * 0.3 + 0.5) / nb;
    std::sort(brk.begin(), brk.end());
    std::vector<cd> vals(nb + 1);
    for (auto& z : vals) z = std::polar(0.5 + std::abs(U(rng)) * 2.0, U(rng) * M_PI);
    FredholmVerdict fv = pc_fredholm(PCSymbol1D::scalar(brk, vals));
    if (!fv.elliptic || !fv.inverse) continue;
    PCSymbol1D pc = PCSymbol1D::scalar(brk, vals);
    GFunction r = conv_op(*fv.inverse, conv_op(pc, f));
    worst_inv = std::max(worst_inv, max_abs(r.values - f.values));
    ++inverted;
  }
  FredholmVerdict vz =
      pc_fredholm(PCSymbol1D::scalar({0.0, 1.0}, {cd(1, 0), cd(0, 0), cd(2, 0)}));
  bool ok = invol <= 1e-10 && dual <= 2e-3 && inverted == 100 && worst_inv <= 1e-10 &&
            !vz.elliptic;
  report(10, ok,
         "involution " + num(invol) + ", dual-path dev " + num(dual) + ", " +
             std::to_string(inverted) + "/100 inverses to " + num(worst_inv) +
             ", vanishing limit rejected");
}

// ---- 11: Sobolev norms anchor, lift, and stay equivalent -------------------

void criterion_11() {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  std::mt19937_64 rng(17);
  GFunction f = random_decaying(g, rng);
  double anchor = std::abs(hs_norm(f, 0.0) / l2_norm(f) - 1.0);
  double lift = std::abs(hs_norm_op(bessel_potential(f, 1.5), 0.5) / hs_norm_op(f, 2.0) - 1.0);

  std::vector<GridPtr> grids = {make_grid(32.0, 256), make_grid(32.0, 512)};
  auto family = [](GridPtr gp) { return gaussian_family(gp); };
  bool equiv_ok = true;
  double lo = 1e9, hi = 0.0;
  for (int m = 1; m <= 2; ++m) {
    NormEquivReport r = norm_equivalence_probe(family, grids, m);
    equiv_ok = equiv_ok && r.pass;
    lo = std::min(lo, r.ratio_min.back());
    hi = std::max(hi, r.ratio_max.back());
  }
  equiv_ok = equiv_ok && lo >= 0.1 && hi <= 10.0;
  bool ok = anchor <= 1e-8 && lift <= 1e-6 && equiv_ok;
  report(11, ok,
         "zero-order anchor " + num(anchor) + ", lifting dev " + num(lift) +
             ", integer/fractional ratios in [" + num(lo) + ", " + num(hi) + "]");
}

// ---- 12: the CLI is deterministic under a fixed seed -----------------------

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) {
      std::ifstream in(e.path(), std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      out[fs::relative(e.path(), root).string()] = ss.str();
    }
  return out;
}

void criterion_12() {
  fs::path base = fs::temp_directory_path() / ("psido_accept_" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base);
  fs::path d1 = base / "a", d2 = base / "b";
  std::string cli = PSIDO_CLI_PATH;
  auto run = [&](const fs::path& out) {
    std::string cmd = cli + " run --suite all --seed 2026 --out " + out.string() + " > " +
                      (out.string() + ".log") + " 2>&1";
    int rc = std::system(cmd.c_str());
    return (rc >= 256) ? (rc >> 8) : rc;
  };
  int rc1 = run(d1), rc2 = run(d2);
  bool same = false;
  size_t files = 0;
  if (rc1 == 0 && rc2 == 0) {
    auto t1 = tree_bytes(d1), t2 = tree_bytes(d2);
    files = t1.size();
    same = !t1.empty() && t1 == t2;
  }
  report(12, rc1 == 0 && rc2 == 0 && same,
         "two seeded runs, exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2) +
             ", " + std::to_string(files) + " artifact files byte-identical");
  fs::remove_all(base);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
