#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <psido/catalog.hpp>

#include <random>

using namespace psido;
using cd = std::complex<double>;

namespace {

const ClassConstant& find_constant(const SymbolClassReport& rep, const MIdx& a, const MIdx& b) {
  for (const ClassConstant& c : rep.constants)
    if (c.alpha == a && c.beta == b) return c;
  throw std::runtime_error("constant not found");
}

}  // namespace

TEST_CASE("multi-index helpers enumerate orders") {
  CHECK(midx_total({2, 3}) == 5);
  auto idx = multi_indices_of_order(2, 3);
  CHECK(idx.size() == 4);
  for (const MIdx& a : idx) CHECK(midx_total(a) == 3);
  CHECK(multi_indices_of_order(1, 0) == std::vector<MIdx>{{0}});
}

TEST_CASE("spectral norm of a matrix is its largest singular value") {
  Eigen::MatrixXcd m(2, 2);
  m << cd(3, 0), cd(0, 0), cd(4, 0), cd(0, 0);
  CHECK(spec_norm(m) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(spec_norm(Eigen::MatrixXcd::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("difference steps widen with the derivative order") {
  CHECK(fd_step_for_order(0, 1e-4) == 1e-4);
  CHECK(fd_step_for_order(2, 1e-4) == 1e-4);
  CHECK(fd_step_for_order(3, 1e-4) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(fd_step_for_order(4, 1e-4) == doctest::Approx(3e-3).epsilon(1e-12));
  CHECK(fd_step_for_order(6, 1e-4) == doctest::Approx(1e-2).epsilon(1e-12));
}

TEST_CASE("evaluation through the chart matches the native form") {
  Symbol s = sym_bessel(1);
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> ut(-3.0, 3.0), uxi(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd t(1), xi(1);
    t[0] = ut(rng);
    xi[0] = uxi(rng);
    GPoint x = map_x(RPoint(t));
    CHECK(std::abs(s.eval_x(x, xi) - s.value(t, xi)) <= 1e-12);
  }
}

TEST_CASE("closed-form derivatives agree with finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(-3.0, 3.0), uxi(-5.0, 5.0);
  for (Symbol s : {sym_bessel(1), sym_sine()}) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd t(1), xi(1);
      t[0] = ut(rng);
      xi[0] = uxi(rng);
      for (int a = 0; a <= 2; ++a)
        for (int b = 0; a + b <= 2; ++b) {
          cd closed = s.d({a}, {b}, t, xi);
          cd fd = s.d_fd({a}, {b}, t, xi);
          worst = std::max(worst, std::abs(closed - fd) / (1.0 + std::abs(closed)));
        }
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("the flat vector field differentiates a chart-side product form") {
  Symbol s = symbol_from_t_form(1, 0, 1.0, 0.0,
                                [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
                                  return std::sin(t[0]) * std::exp(cd(0.0, xi[0]));
                                },
                                "sine_phase");
  Eigen::VectorXd t(1);
  t[0] = 0.5;
  for (double xiv : {-2.0, 0.0, 1.5}) {
    Eigen::VectorXd xi(1);
    xi[0] = xiv;
    cd want = std::cos(0.5) * std::exp(cd(0.0, xiv));
    CHECK(std::abs(s.d({0}, {1}, t, xi) - want) <= 1e-6);
  }
}

TEST_CASE("class constants of the identity symbol collapse to one") {
  SymbolClassReport rep = estimate_class(sym_identity(), 2);
  CHECK(rep.bounded);
  for (const ClassConstant& c : rep.constants) {
    CHECK(c.bounded);
    double top = c.sup_per_box.back();
    if (midx_total(c.alpha) == 0 && midx_total(c.beta) == 0)
      CHECK(top == 1.0);
    else
      CHECK(top <= 1e-5);
  }
}

TEST_CASE("first-order model symbol saturates its class constants") {
  Symbol d = sym_dfield();
  ProbeBox wide{{4, 8, 16, 64}, 9};
  SymbolClassReport rep = estimate_class(d, 1, wide);
  CHECK(rep.bounded);
  double c00 = find_constant(rep, {0}, {0}).sup_per_box.back();
  double c10 = find_constant(rep, {1}, {0}).sup_per_box.back();
  CHECK(std::abs(c00 - 2.0 * M_PI) <= 0.02 * 2.0 * M_PI);
  CHECK(std::abs(c10 - 2.0 * M_PI) <= 1e-9);
  // Sups over nested boxes only grow.
  for (const ClassConstant& c : rep.constants)
    for (size_t i = 1; i < c.sup_per_box.size(); ++i)
      CHECK(c.sup_per_box[i] >= c.sup_per_box[i - 1] - 1e-9);
  CHECK(estimate_class(d, 1).bounded);
}

TEST_CASE("class membership verdicts separate members from impostors") {
  CHECK(estimate_class(sym_bessel_sine(1), 3).bounded);
  CHECK(estimate_class(sym_sine(), 3).bounded);
  CHECK(estimate_class(sym_gohberg(0.3), 2).bounded);
  // Linear growth in the state variable is not uniform over the group.
  CHECK_FALSE(estimate_class(sym_oscillator(), 1).bounded);
  // Declaring the wrong order fails even for a bona fide symbol.
  Symbol wrong = symbol_from_t_form(1, 0, 1.0, 0.0,
                                    [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
                                      return cd(0.0, 2.0 * M_PI * xi[0]);
                                    },
                                    "first_order_declared_zero");
  CHECK_FALSE(estimate_class(wrong, 1).bounded);
}

TEST_CASE("weighted estimates admit growth in the state variable") {
  CHECK(estimate_shubin(sym_shubin_annihilation(), 2).bounded);
  Symbol tcoord = symbol_from_t_form(1, 0, 1.0, 0.0,
                                     [](const Eigen::VectorXd& t, const Eigen::VectorXd&) {
                                       return cd(t[0], 0.0);
                                     },
                                     "state_coordinate");
  CHECK_FALSE(estimate_shubin(tcoord, 1).bounded);
}

TEST_CASE("ellipticity constant matches an independent lattice minimum") {
  Symbol b2 = sym_bessel(2);
  EllipticityReport rep = check_elliptic(b2, 0.0);
  CHECK(rep.elliptic);
  // Same probe lattice, scanned directly.
  ProbeBox box{};
  double lattice_min = std::numeric_limits<double>::infinity();
  for (double L : box.Ls) {
    for (int i = 0; i < box.points_per_axis; ++i)
      for (int j = 0; j < box.points_per_axis; ++j) {
        double tv = -L + 2.0 * L * i / (box.points_per_axis - 1);
        double xv = -L + 2.0 * L * j / (box.points_per_axis - 1);
        Eigen::VectorXd t(1), xi(1);
        t[0] = tv;
        xi[0] = xv;
        double ratio = std::abs(b2.value(t, xi)) / std::pow(1.0 + std::abs(xv), 2.0);
        lattice_min = std::min(lattice_min, ratio);
      }
  }
  CHECK(std::abs(rep.C - lattice_min) <= 0.02 * lattice_min);
}

TEST_CASE("ellipticity respects the frequency cutoff and rejects the zero symbol") {
  Symbol lin = symbol_from_t_form(1, 1, 1.0, 0.0,
                                  [](const Eigen::VectorXd&, const Eigen::VectorXd& xi) {
                                    return cd(xi[0], 0.0);
                                  },
                                  "frequency_coordinate");
  EllipticityReport rep = check_elliptic(lin, 1.0);
  CHECK(rep.elliptic);
  CHECK(rep.C == doctest::Approx(0.5).epsilon(1e-9));
  Symbol zero = symbol_from_t_form(1, 0, 1.0, 0.0,
                                   [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
                                     return cd(0.0, 0.0);
                                   },
                                   "zero");
  CHECK_FALSE(check_elliptic(zero, 0.0).elliptic);
}

TEST_CASE("radial limit estimates recover the far-field modulus") {
  CHECK(decay_limit_d(sym_identity()).d_est == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(decay_limit_d(sym_gohberg(0.0)).d_est <= 1e-8);
  CHECK(decay_limit_d(sym_gohberg(0.3)).d_est == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("builders record their declared metadata") {
  Symbol s = sym_bessel_sine(1);
  CHECK(s.n == 1);
  CHECK(s.rho == 1.0);
  CHECK(s.delta == 0.0);
  CHECK_FALSE(s.name.empty());
  Symbol u = make_catalog_symbol("gohberg(0.3)");
  CHECK(u.order == 0);
  CHECK_THROWS_AS(make_catalog_symbol("no_such_symbol"), std::invalid_argument);
}
