#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <psido/sobolev.hpp>

#include <random>

using namespace psido;
using cd = std::complex<double>;

TEST_CASE("smoothing powers compose and invert") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  std::mt19937_64 rng(17);
  GFunction f = random_decaying(g, rng);
  GFunction rt = bessel_potential(bessel_potential(f, 2.0), -2.0);
  CHECK(max_abs(rt.values - f.values) <= 1e-9);
  GFunction ab = bessel_potential(bessel_potential(f, 1.0), 1.0);
  CHECK(max_abs(ab.values - bessel_potential(f, 2.0).values) <= 1e-9);
  CHECK(max_abs(bessel_potential(f, 0.0).values - f.values) <= 1e-12);
  CHECK_THROWS_AS(bessel_potential(f, 17.0), std::invalid_argument);
}

TEST_CASE("second smoothing power of a gaussian has the closed form") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  GFunction gau = sample_t1(g, [](double t) { return cd(std::exp(-M_PI * t * t), 0); });
  GFunction b2 = bessel_potential(gau, 2.0);
  GFunction want = sample_t1(g, [](double t) {
    return cd((1 + 2 * M_PI - 4 * M_PI * M_PI * t * t) * std::exp(-M_PI * t * t), 0);
  });
  CHECK(max_abs(b2.values - want.values) <= 1e-6);
}

TEST_CASE("fractional norms anchor at the L2 norm and grow with the exponent") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  std::mt19937_64 rng(17);
  GFunction f = random_decaying(g, rng);
  CHECK(std::abs(hs_norm(f, 0.0) - l2_norm(f)) <= 1e-8 * l2_norm(f));
  CHECK(hs_norm(f, 0.5) < hs_norm(f, 1.0));
  CHECK(hs_norm(f, 1.0) < hs_norm(f, 2.0));

  GFunction gau = sample_t1(g, [](double t) { return cd(std::exp(-M_PI * t * t), 0); });
  double want = std::sqrt(std::sqrt(0.5) * (1 + 1 / (4 * M_PI)));
  CHECK(hs_norm(gau, 1.0) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("the index-lifting identity holds in the operator weight") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  std::mt19937_64 rng(17);
  GFunction f = random_decaying(g, rng);
  double lifted = hs_norm_op(bessel_potential(f, 1.5), 0.5);
  CHECK(std::abs(lifted / hs_norm_op(f, 2.0) - 1.0) <= 1e-6);
}

TEST_CASE("integer norms match an independent fine quadrature") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  GFunction sg = sample_t1(g, [](double t) { return cd(std::sin(t) * std::exp(-t * t), 0); });
  double w12 = wmp_norm(sg, 1, 2.0);
  long NF = 1 << 16;
  double Tq = 12.0, hq = 2 * Tq / NF, acc = 0.0;
  for (long i = 0; i < NF; ++i) {
    double t = -Tq + (i + 0.5) * hq;
    double v = std::sin(t) * std::exp(-t * t);
    double d = (std::cos(t) - 2 * t * std::sin(t)) * std::exp(-t * t);
    acc += (v * v + d * d) * hq;
  }
  CHECK(w12 == doctest::Approx(std::sqrt(acc)).epsilon(1e-6));

  GFunction sc{g, (2.0 * sg.values).eval()};
  CHECK(std::abs(wmp_norm(sc, 1, 2.0) - 2 * w12) <= 1e-9);
  CHECK(std::abs(wmp_norm(sg, 0, 2.0) - lp_norm(sg, 2.0)) <= 1e-10);
  CHECK_THROWS_AS(wmp_norm(sg, 5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(wmp_norm(sg, 1, 1.0), std::invalid_argument);
}

TEST_CASE("space descriptors validate their parameters") {
  SobolevSpec ok{1.5, 2.0, "bessel"};
  ok.validate();
  SobolevSpec wbad{1.5, 2.0, "integer-W"};
  CHECK_THROWS_AS(wbad.validate(), std::invalid_argument);
  SobolevSpec pbad{1.0, 1.0, "bessel"};
  CHECK_THROWS_AS(pbad.validate(), std::invalid_argument);
  SobolevSpec fbad{1.0, 2.0, "holder"};
  CHECK_THROWS_AS(fbad.validate(), std::invalid_argument);
}

TEST_CASE("fractional and integer norms bracket each other on a smooth family") {
  edge_warning_count() = 1;
  std::vector<GridPtr> grids = {make_grid(32.0, 256), make_grid(32.0, 512)};
  auto family = [](GridPtr gp) { return gaussian_family(gp); };
  for (int m = 0; m <= 1; ++m) {
    NormEquivReport r = norm_equivalence_probe(family, grids, m);
    CHECK(r.pass);
    // At order <= 1 the two weights coincide node by node.
    CHECK(std::abs(r.ratio_min.back() - 1.0) <= 1e-10);
    CHECK(std::abs(r.ratio_max.back() - 1.0) <= 1e-10);
  }
  NormEquivReport r2 = norm_equivalence_probe(family, grids, 2);
  CHECK(r2.pass);
  CHECK(r2.stable);
  CHECK(r2.ratio_min.back() == doctest::Approx(1.014996151).epsilon(1e-4));
  CHECK(r2.ratio_max.back() == doctest::Approx(1.105602136).epsilon(1e-4));
  CHECK(r2.ratio_min.back() >= 0.1);
  CHECK(r2.ratio_max.back() <= 10.0);
}

TEST_CASE("the equivalence probe rejects degenerate input") {
  auto family = [](GridPtr gp) { return gaussian_family(gp); };
  CHECK_THROWS_AS(norm_equivalence_probe(family, {}, 1), std::invalid_argument);
  std::vector<GridPtr> grids = {make_grid(32.0, 256)};
  CHECK_THROWS_AS(norm_equivalence_probe(family, grids, 5), std::invalid_argument);
  auto tiny = [](GridPtr gp) { return gaussian_family(gp, 3); };
  CHECK_THROWS_AS(norm_equivalence_probe(tiny, grids, 1), std::invalid_argument);
}
