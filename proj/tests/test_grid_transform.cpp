#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <psido/transform.hpp>

#include <cmath>
#include <random>

using namespace psido;
using cd = std::complex<double>;

TEST_CASE("grid arithmetic ties the two lattices together") {
  for (long M : {8L, 128L, 512L}) {
    GridPtr g = make_grid(8.0, M);
    CHECK(g->dt * g->dxi * double(g->M) == 1.0);
    CHECK(g->nyquist() == doctest::Approx(double(M) / 32.0).epsilon(1e-15));
    CHECK(g->t_axis.size() == M);
    CHECK(g->t_axis[0] == -8.0);
    CHECK(g->t_axis[M - 1] == doctest::Approx(8.0 - g->dt).epsilon(1e-15));
    CHECK(g->xi_axis[M / 2] == 0.0);
    CHECK(g->cell_t() == doctest::Approx(g->dt).epsilon(1e-15));
    for (long j : {0L, M / 3, M - 1})
      CHECK(g->x_axis[j] == doctest::Approx(-std::tanh(g->t_axis[j])).epsilon(1e-14));
  }
  GridPtr g2 = make_grid(4.0, 16, 2);
  CHECK(g2->total() == 16 * 16);
  CHECK(g2->cell_t() == doctest::Approx(g2->dt * g2->dt).epsilon(1e-15));
  CHECK(g2->cell_xi() == doctest::Approx(g2->dxi * g2->dxi).epsilon(1e-15));
}

TEST_CASE("grid construction validates its arguments") {
  CHECK_THROWS_AS(make_grid(0.0, 128), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(-2.0, 128), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8.0, 128, 3), std::invalid_argument);
}

TEST_CASE("analysis followed by synthesis returns the input") {
  edge_warning_count() = 1;
  std::mt19937_64 rng(2026);
  for (long M : {128L, 256L, 512L}) {
    GridPtr g = make_grid(8.0, M);
    GFunction f = random_decaying(g, rng);
    GFunction back = inv_fourier_G(fourier_G(f));
    CHECK(max_abs(back.values - f.values) <= 1e-8);
  }
  GridPtr g2 = make_grid(4.0, 32, 2);
  GFunction f2 = random_decaying(g2, rng);
  GFunction back2 = inv_fourier_G(fourier_G(f2));
  CHECK(max_abs(back2.values - f2.values) <= 1e-8);
}

TEST_CASE("Plancherel constant is 1 and the half-scale variant is 2^n") {
  edge_warning_count() = 1;
  for (long M : {128L, 256L, 512L}) {
    GridPtr g = make_grid(8.0, M);
    CHECK(std::abs(plancherel_constant(g) - 1.0) <= 1e-6);
  }
  GridPtr g = make_grid(8.0, 128);
  double c1 = plancherel_constant_halfscale(g);
  CHECK(std::abs(c1 - 2.0) <= 1e-6);
  GridPtr g2 = make_grid(4.0, 32, 2);
  double c2 = plancherel_constant_halfscale(g2, 5);
  CHECK(std::abs(c2 - 4.0) <= 1e-6);
  // The constants are powers of two, nowhere near pi^n.
  CHECK(std::abs(c1 - M_PI) > 0.5);
  CHECK(std::abs(c2 - M_PI * M_PI) > 0.5);
}

TEST_CASE("inner products survive the transform") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  std::mt19937_64 rng(5);
  GFunction f = random_decaying(g, rng), h = random_decaying(g, rng);
  Spectrum F = fourier_G(f), H = fourier_G(h);
  cd side_t = (f.values.adjoint() * h.values)(0, 0) * g->cell_t();
  cd side_xi = (F.values.adjoint() * H.values)(0, 0) * g->cell_xi();
  CHECK(std::abs(side_t - side_xi) <= 1e-10 * std::abs(side_t));
}

TEST_CASE("a pure mode concentrates on a single frequency node") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  long k0 = 80;
  double xi0 = g->xi_axis[k0];
  GFunction f = sample_t1(g, [&](double t) { return std::exp(cd(0.0, 2.0 * M_PI * xi0 * t)); });
  Spectrum F = fourier_G(f);
  CHECK(std::abs(F.values(k0, 0) - cd(16.0, 0.0)) <= 1e-9);
  double offmax = 0.0;
  for (long k = 0; k < g->M; ++k)
    if (k != k0) offmax = std::max(offmax, std::abs(F.values(k, 0)));
  CHECK(offmax <= 1e-10);
}

TEST_CASE("the flat derivative field matches closed-form derivatives") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 256);
  struct Pair {
    std::function<cd(double)> f, df;
  };
  // Derivative here means the vector field (1 - x^2) d/dx pushed to the chart,
  // i.e. d/dt of the chart-side profile.
  std::vector<Pair> pairs = {
      {[](double t) { return cd(std::exp(-t * t / 2), 0); },
       [](double t) { return cd(-t * std::exp(-t * t / 2), 0); }},
      {[](double t) { return cd(t * std::exp(-t * t / 2), 0); },
       [](double t) { return cd((1 - t * t) * std::exp(-t * t / 2), 0); }},
      {[](double t) { return cd(std::sin(t) * std::exp(-t * t / 2), 0); },
       [](double t) { return cd((std::cos(t) - t * std::sin(t)) * std::exp(-t * t / 2), 0); }},
      {[](double t) { return cd(std::cosh(t) * std::exp(-t * t), 0); },
       [](double t) { return cd((std::sinh(t) - 2 * t * std::cosh(t)) * std::exp(-t * t), 0); }},
  };
  for (const Pair& p : pairs) {
    GFunction f = sample_t1(g, p.f);
    GFunction want = sample_t1(g, p.df);
    GFunction got = dfield1(f, 1);
    CHECK(max_abs(got.values - want.values) <= 1e-6);
    CHECK(max_abs(dfield(f, {1}).values - got.values) == 0.0);
  }
  // Second order.
  GFunction f = sample_t1(g, [](double t) { return cd(std::exp(-t * t / 2), 0); });
  GFunction want =
      sample_t1(g, [](double t) { return cd((t * t - 1) * std::exp(-t * t / 2), 0); });
  CHECK(max_abs(dfield1(f, 2).values - want.values) <= 1e-9);
}

TEST_CASE("derivative field acts per axis on a 2-D grid") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(5.0, 32, 2);
  GFunction f = sample_t(g, [](const Eigen::VectorXd& t) {
    return cd(std::exp(-t[0] * t[0] - t[1] * t[1]), 0);
  });
  GFunction want = sample_t(g, [](const Eigen::VectorXd& t) {
    return cd(-2.0 * t[0] * std::exp(-t[0] * t[0] - t[1] * t[1]), 0);
  });
  CHECK(max_abs(dfield(f, {1, 0}).values - want.values) <= 1e-6);
  CHECK_THROWS_AS(dfield(f, {1}), std::invalid_argument);
  CHECK_THROWS_AS(dfield(f, {-1, 0}), std::invalid_argument);
}

TEST_CASE("norm helpers agree with each other") {
  GridPtr g = make_grid(8.0, 128);
  GFunction f = sample_t1(g, [](double t) { return cd(std::exp(-t * t), 0); });
  CHECK(lp_norm(f, 2.0) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
  GFunction doubled{g, (2.0 * f.values).eval()};
  CHECK(l2_norm(doubled) == doctest::Approx(2.0 * l2_norm(f)).epsilon(1e-12));
  CHECK(max_abs(f.values) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("edge decay check and its one-shot warning") {
  GridPtr g = make_grid(8.0, 128);
  GFunction good = sample_t1(g, [](double t) { return cd(std::exp(-t * t), 0); });
  GFunction bad = sample_t1(g, [](double) { return cd(1.0, 0); });
  CHECK(edge_decay_ok(good));
  CHECK_FALSE(edge_decay_ok(bad));
  edge_warning_count() = 0;
  fourier_G(bad);
  CHECK(edge_warning_count() == 1);
  fourier_G(bad);
  CHECK(edge_warning_count() == 2);
  edge_warning_count() = 1;
}

TEST_CASE("non-finite samples are rejected with context") {
  GridPtr g = make_grid(8.0, 128);
  GFunction f = sample_t1(g, [](double t) { return cd(std::exp(-t * t), 0); });
  f.values(3, 0) = cd(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(fourier_G(f), std::invalid_argument);
  CHECK_THROWS_AS(require_finite(f.values, "probe"), std::invalid_argument);
}
