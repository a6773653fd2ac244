#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <psido/catalog.hpp>
#include <psido/quantize.hpp>

#include <random>

using namespace psido;
using cd = std::complex<double>;

namespace {

double inner_haar(const GFunction& f, const GFunction& g) {
  return ((f.values.adjoint() * g.values)(0, 0) * f.grid->cell_t()).real();
}

}  // namespace

TEST_CASE("the identity symbol quantizes to the identity operator") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  std::mt19937_64 rng(2026);
  GFunction f = random_decaying(g, rng);
  GFunction u = apply_op(sym_identity(), f);
  CHECK(max_abs(u.values - f.values) <= 1e-10);
}

TEST_CASE("a frequency-free symbol quantizes to pointwise multiplication") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  std::mt19937_64 rng(3);
  GFunction f = random_decaying(g, rng);
  GFunction u = apply_op(sym_sine(), f);
  Eigen::MatrixXcd want = f.values;
  for (long j = 0; j < g->total(); ++j) want(j, 0) *= std::sin(g->t_axis[j]);
  CHECK(max_abs(u.values - want) <= 1e-8);
}

TEST_CASE("the derivative symbol reproduces the spectral derivative") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  std::mt19937_64 rng(5);
  GFunction f = random_decaying(g, rng);
  GFunction via_symbol = apply_op(sym_dfield(), f);
  GFunction via_transform = dfield1(f, 1);
  CHECK(max_abs(via_symbol.values - via_transform.values) <= 1e-12);
}

TEST_CASE("state-side application agrees with the chart-side path") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  std::mt19937_64 rng(7);
  GFunction f = random_decaying(g, rng);
  double worst = 0.0;
  for (const char* nm : {"identity", "sine", "dfield", "bessel(1)", "gohberg(0.3)"}) {
    Symbol s = make_catalog_symbol(nm);
    GFunction u = apply_op(s, f), v = apply_op_pullback(s, f);
    worst = std::max(worst, max_abs(u.values - v.values) / std::max(1.0, max_abs(u.values)));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("the adjoint operator satisfies the inner-product identity") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  std::mt19937_64 rng(11);
  GFunction f = random_decaying(g, rng), h = random_decaying(g, rng);
  Symbol osc = sym_oscillator();
  double ip1 = inner_haar(apply_op(osc, f), h);
  double ip2 = inner_haar(f, apply_op_adjoint(osc, h));
  CHECK(std::abs(ip1 - ip2) <= 1e-8 * (1.0 + std::abs(ip1)));
}

TEST_CASE("quantization is linear in the function argument") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  std::mt19937_64 rng(13);
  GFunction f = random_decaying(g, rng), h = random_decaying(g, rng);
  Symbol osc = sym_oscillator();
  GFunction lin{g, (f.values + cd(0.3, -0.2) * h.values).eval()};
  Eigen::MatrixXcd sum = apply_op(osc, f).values + cd(0.3, -0.2) * apply_op(osc, h).values;
  CHECK(max_abs(apply_op(osc, lin).values - sum) <= 1e-10);
}

TEST_CASE("materialized matrices match their operators") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  std::mt19937_64 rng(17);
  GFunction f = random_decaying(g, rng);

  OperatorMatrix I = materialize_matrix(sym_identity(), g);
  CHECK(max_abs(I.A - Eigen::MatrixXcd::Identity(g->total(), g->total())) <= 1e-8);

  OperatorMatrix S = materialize_matrix(sym_sine(), g);
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(g->total(), g->total());
  for (long j = 0; j < g->total(); ++j) D(j, j) = std::sin(g->t_axis[j]);
  CHECK(max_abs(S.A - D) <= 1e-8);

  // The derivative field is formally skew-adjoint; its matrix should be too.
  OperatorMatrix Dm = materialize_matrix(sym_dfield(), g);
  CHECK(max_abs((Dm.A + Dm.A.adjoint()).eval()) <= 1e-8);
  CHECK(max_abs(Dm.apply(f).values - apply_op(sym_dfield(), f).values) <= 1e-8);
}

TEST_CASE("materialization refuses grids past the size cap") {
  CHECK_THROWS_AS(materialize_matrix(sym_identity(), make_grid(8.0, 16384)),
                  std::invalid_argument);
}

TEST_CASE("frequency-only symbols route through the convolution path unchanged") {
  edge_warning_count() = 1;
  GridPtr g = make_grid(8.0, 128);
  std::mt19937_64 rng(19);
  GFunction f = random_decaying(g, rng);
  Symbol b1 = sym_bessel(1.0);
  GFunction cv =
      conv_apply([&b1](const Eigen::VectorXd& xi) { return b1.value_m(xi, xi); }, 1, f);
  GFunction qv = apply_op(b1, f);
  CHECK(max_abs(cv.values - qv.values) == 0.0);
}
