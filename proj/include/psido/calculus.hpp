#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "psido/quantize.hpp"
#include "psido/symbol.hpp"

namespace psido {

// Highest derivative order any expansion will request from an oracle chain.
inline constexpr int kMaxExpansionDeriv = 6;

inline cd pow_2pi_i(int k) {
  double mag = std::pow(2.0 * M_PI, k);
  switch (((k % 4) + 4) % 4) {
    case 0: return cd(mag, 0);
    case 1: return cd(0, mag);
    case 2: return cd(-mag, 0);
    default: return cd(0, -mag);
  }
}

// (2 pi i)^{-|alpha|} / alpha!
inline cd expansion_coeff(const MIdx& alpha) {
  return 1.0 / (pow_2pi_i(midx_total(alpha)) * midx_factorial(alpha));
}

struct Expansion {
  std::vector<Symbol> terms;  // term k groups all |alpha| = k contributions
  std::vector<double> declared_orders;
  double rho = 1.0, delta = 0.0;
  std::string source;

  int size() const { return static_cast<int>(terms.size()); }

  // Single symbol summing every term; used for quantized residual checks.
  Symbol truncated() const {
    if (terms.empty()) throw std::invalid_argument("Expansion: no terms");
    std::vector<Symbol> ts = terms;
    Symbol s = symbol_matrix_from_t_form(
        ts[0].n, ts[0].nu, declared_orders[0], rho, delta,
        [ts](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
          Eigen::MatrixXcd acc = ts[0].value_m(t, xi);
          for (size_t k = 1; k < ts.size(); ++k) acc += ts[k].value_m(t, xi);
          return acc;
        },
        source + ":sum");
    if (ts[0].nu == 1) {
      s.nu = 1;
      s.tf = [ts](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        cd acc = ts[0].value(t, xi);
        for (size_t k = 1; k < ts.size(); ++k) acc += ts[k].value(t, xi);
        return acc;
      };
    }
    s.fd_base = 1e-2;
    return s;
  }
};

namespace detail {

inline void warn_class_range(const Symbol& s, const char* who) {
  if (!(0.0 <= s.delta && s.delta < s.rho && s.rho <= 1.0))
    std::cerr << who << ": symbol '" << s.name << "' has (rho, delta) = (" << s.rho << ", "
              << s.delta << ") outside 0 <= delta < rho <= 1; computing anyway\n";
}

inline void check_deriv_depth(int k, const Symbol& s, const char* who) {
  if (k > kMaxExpansionDeriv && k > s.deriv_depth) {
    std::ostringstream os;
    os << who << ": derivative order |alpha| = " << k << " exceeds supported depth "
       << kMaxExpansionDeriv << " for symbol '" << s.name << "'";
    throw std::runtime_error(os.str());
  }
}

inline Symbol make_term(const Symbol& model, double order, double rho, double delta,
                        std::string name, Symbol::MatrixFn fn) {
  Symbol s = symbol_matrix_from_t_form(model.n, model.nu, order, rho, delta, std::move(fn),
                                       std::move(name));
  if (model.nu == 1) {
    s.nu = 1;
    auto m = s.tfm;
    s.tf = [m](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) { return m(t, xi)(0, 0); };
  }
  s.fd_base = 1e-2;
  return s;
}

}  // namespace detail

// Term k of the composition expansion:
//   sum_{|alpha| = k} (2 pi i)^{-|alpha|}/alpha! (d_xi^alpha a)(D_x^alpha b),
// matrix products taken in the written order.
inline Expansion compose_expand(const Symbol& a, const Symbol& b, int N) {
  if (a.n != b.n || a.nu != b.nu)
    throw std::invalid_argument("compose_expand: symbol shape mismatch");
  if (N < 1) throw std::invalid_argument("compose_expand: N must be >= 1");
  detail::warn_class_range(a, "compose_expand");
  detail::warn_class_range(b, "compose_expand");
  detail::check_deriv_depth(N - 1, a, "compose_expand");

  Expansion E;
  E.rho = std::min(a.rho, b.rho);
  E.delta = std::max(a.delta, b.delta);
  E.source = "compose(" + a.name + "," + b.name + ")";
  double m = a.order + b.order;
  MIdx zero(a.n, 0);
  for (int k = 0; k < N; ++k) {
    auto alphas = multi_indices_of_order(a.n, k);
    auto fn = [a, b, alphas, zero](const Eigen::VectorXd& t,
                                   const Eigen::VectorXd& xi) -> Eigen::MatrixXcd {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(a.nu, a.nu);
      for (const MIdx& al : alphas)
        acc += expansion_coeff(al) * (a.d_m(al, zero, t, xi) * b.d_m(zero, al, t, xi));
      return acc;
    };
    E.terms.push_back(detail::make_term(a, m - (E.rho - E.delta) * k, E.rho, E.delta,
                                        E.source + "[" + std::to_string(k) + "]", fn));
    E.declared_orders.push_back(m - (E.rho - E.delta) * k);
  }
  return E;
}

// Term k of the adjoint expansion:
//   sum_{|alpha| = k} (2 pi i)^{-|alpha|}/alpha! d_xi^alpha D_x^alpha a^H.
inline Expansion adjoint_expand(const Symbol& a, int N) {
  if (N < 1) throw std::invalid_argument("adjoint_expand: N must be >= 1");
  detail::warn_class_range(a, "adjoint_expand");
  detail::check_deriv_depth(N - 1, a, "adjoint_expand");

  Expansion E;
  E.rho = a.rho;
  E.delta = a.delta;
  E.source = "adjoint(" + a.name + ")";
  for (int k = 0; k < N; ++k) {
    auto alphas = multi_indices_of_order(a.n, k);
    auto fn = [a, alphas](const Eigen::VectorXd& t,
                          const Eigen::VectorXd& xi) -> Eigen::MatrixXcd {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(a.nu, a.nu);
      for (const MIdx& al : alphas)
        acc += expansion_coeff(al) * a.d_m(al, al, t, xi).adjoint();
      return acc;
    };
    E.terms.push_back(detail::make_term(a, a.order - (E.rho - E.delta) * k, E.rho, E.delta,
                                        E.source + "[" + std::to_string(k) + "]", fn));
    E.declared_orders.push_back(a.order - (E.rho - E.delta) * k);
  }
  return E;
}

// C^inf step: 0 on (-inf, 0], 1 on [1, inf).
inline double smooth_step01(double u) {
  auto phi = [](double v) { return v > 0.0 ? std::exp(-1.0 / v) : 0.0; };
  double p = phi(u), q = phi(1.0 - u);
  return p + q == 0.0 ? 0.0 : p / (p + q);
}

// Low-frequency cutoff: 0 for |xi| <= R+1, 1 for |xi| >= 2(R+1).
inline double lowfreq_cutoff(double xinorm, double R) {
  return smooth_step01(xinorm / (R + 1.0) - 1.0);
}

// Left-composition parametrix terms: with tau_0 = chi a^{-1},
//   tau_k = -tau_0 sum_{j<k} sum_{|gamma|=k-j}
//             (2 pi i)^{-|gamma|}/gamma! (d_xi^gamma a)(D_x^gamma tau_j),
// so Op(a) Op(sum tau_k) - I carries only terms beyond order -(rho-delta)N.
inline Expansion parametrix(const Symbol& a, int N, double R) {
  if (N < 1) throw std::invalid_argument("parametrix: N must be >= 1");
  detail::check_deriv_depth(N - 1, a, "parametrix");
  EllipticityReport er = check_elliptic(a, R);
  if (!er.elliptic) {
    std::ostringstream os;
    os << "parametrix: symbol '" << a.name << "' failed the ellipticity probe at R = " << R
       << " (inf quotient " << er.C << " at t = [" << er.witness_t.transpose() << "], xi = ["
       << er.witness_xi.transpose() << "])";
    throw std::runtime_error(os.str());
  }

  Expansion E;
  E.rho = a.rho;
  E.delta = a.delta;
  E.source = "parametrix(" + a.name + ")";
  MIdx zero(a.n, 0);

  auto inv0 = [a, R](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) -> Eigen::MatrixXcd {
    double chi = lowfreq_cutoff(xi.norm(), R);
    if (chi == 0.0) return Eigen::MatrixXcd::Zero(a.nu, a.nu);
    Eigen::MatrixXcd v = a.value_m(t, xi);
    if (a.nu == 1) return (chi / v(0, 0)) * Eigen::MatrixXcd::Identity(1, 1);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    double smin = svd.singularValues().minCoeff(), smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > global_config().cond_guard)
      throw std::runtime_error("parametrix: symbol inverse exceeds the condition guard");
    return chi * v.inverse();
  };

  std::vector<Symbol> taus;
  taus.push_back(detail::make_term(a, -a.order, E.rho, E.delta, E.source + "[0]", inv0));
  for (int k = 1; k < N; ++k) {
    std::vector<Symbol> prev = taus;
    auto fn = [a, prev, inv0, k, zero](const Eigen::VectorXd& t,
                                       const Eigen::VectorXd& xi) -> Eigen::MatrixXcd {
      Eigen::MatrixXcd t0 = inv0(t, xi);
      if (t0.isZero(0.0)) return Eigen::MatrixXcd::Zero(a.nu, a.nu);
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(a.nu, a.nu);
      for (int j = 0; j < k; ++j)
        for (const MIdx& ga : multi_indices_of_order(a.n, k - j))
          acc += expansion_coeff(ga) * (a.d_m(ga, zero, t, xi) * prev[j].d_m(zero, ga, t, xi));
      return -t0 * acc;
    };
    taus.push_back(detail::make_term(a, -a.order - (E.rho - E.delta) * k, E.rho, E.delta,
                                     E.source + "[" + std::to_string(k) + "]", fn));
  }
  E.terms = std::move(taus);
  for (int k = 0; k < N; ++k) E.declared_orders.push_back(-a.order - (E.rho - E.delta) * k);
  return E;
}

// Per-term class membership evidence at the declared orders.
inline std::vector<SymbolClassReport> expansion_class_evidence(const Expansion& E, int K = 2) {
  std::vector<SymbolClassReport> out;
  for (const Symbol& t : E.terms) out.push_back(estimate_class(t, K));
  return out;
}

// ---------------------------------------------------------------------------
// Residual-order probes.

// Wave packet e^{2 pi i t xi0} phi(t) with a fixed Gaussian envelope; its
// spectrum sits at xi0 with width well under 1, so the packet norm of a
// residual operator reads off the symbol size near |xi| = xi0.
inline GFunction modulated_packet(const GridPtr& g, double xi0, int nu = 1) {
  GFunction f;
  f.grid = g;
  f.values.resize(g->total(), nu);
  for (long j = 0; j < g->total(); ++j) {
    Eigen::VectorXd t = g->t_node(j);
    double phase = 0.0, env = 0.0;
    for (int a = 0; a < g->n; ++a) {
      phase += 2.0 * M_PI * t[a] * xi0;
      env += t[a] * t[a];
    }
    cd v = std::polar(std::exp(-M_PI * env / 4.0), phase);
    for (int c = 0; c < nu; ++c) f.values(j, c) = v;
  }
  return f;
}

struct ResidualFit {
  std::vector<double> xi0, norms;  // relative packet residuals
  double slope = 0.0;              // -inf sentinel when every residual is at the floor
  bool sentinel = false;
  double bound = 0.0;  // contract: m_total - (rho-delta) N + 0.5
  bool within_contract = false;
};

using OpFn = std::function<GFunction(const GFunction&)>;

inline ResidualFit residual_order_probe(const OpFn& R, const GridPtr& g,
                                        const std::vector<double>& xi0, double m_total,
                                        double rho_minus_delta, int N, int nu = 1) {
  double floor = global_config().residual_floor;
  ResidualFit fit;
  fit.bound = m_total - rho_minus_delta * N + 0.5;
  for (double x0 : xi0) {
    if (x0 >= g->nyquist())
      throw std::invalid_argument("residual_order_probe: xi0 beyond the grid Nyquist limit");
    GFunction f = modulated_packet(g, x0, nu);
    GFunction r = R(f);
    fit.xi0.push_back(x0);
    fit.norms.push_back(l2_norm(r) / l2_norm(f));
  }
  std::vector<double> lx, ly;
  for (size_t i = 0; i < fit.norms.size(); ++i) {
    if (fit.norms[i] > floor) {
      lx.push_back(std::log(1.0 + fit.xi0[i]));
      ly.push_back(std::log(fit.norms[i]));
    }
  }
  if (lx.empty()) {
    fit.sentinel = true;
    fit.slope = -std::numeric_limits<double>::infinity();
    fit.within_contract = true;
    return fit;
  }
  if (lx.size() < 3)
    throw std::runtime_error("residual_order_probe: fewer than 3 usable xi0 values");
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= lx.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  fit.slope = sxy / sxx;
  fit.within_contract = fit.slope <= fit.bound;
  return fit;
}

// R = Op(a) Op(b) - Op(c_N) applied through the shared quantization path.
inline ResidualFit residual_probe_compose(const Symbol& a, const Symbol& b, const Expansion& E,
                                          const GridPtr& g, const std::vector<double>& xi0) {
  Symbol c = E.truncated();
  OpFn R = [&a, &b, c](const GFunction& f) {
    GFunction r = apply_op(a, apply_op(b, f));
    r.values -= apply_op(c, f).values;
    return r;
  };
  return residual_order_probe(R, g, xi0, a.order + b.order, E.rho - E.delta, E.size(), a.nu);
}

// R = Op(a)^dagger - Op(a*_N).
inline ResidualFit residual_probe_adjoint(const Symbol& a, const Expansion& E, const GridPtr& g,
                                          const std::vector<double>& xi0) {
  Symbol c = E.truncated();
  OpFn R = [&a, c](const GFunction& f) {
    GFunction r = apply_op_adjoint(a, f);
    r.values -= apply_op(c, f).values;
    return r;
  };
  return residual_order_probe(R, g, xi0, a.order, E.rho - E.delta, E.size(), a.nu);
}

// R = Op(a) Op(B) - I (or Op(B) Op(a) - I on the other side); m_total = 0.
inline ResidualFit residual_probe_parametrix(const Symbol& a, const Expansion& E,
                                             const GridPtr& g, const std::vector<double>& xi0,
                                             bool left_side = false) {
  Symbol b = E.truncated();
  OpFn R = [&a, b, left_side](const GFunction& f) {
    GFunction r = left_side ? apply_op(b, apply_op(a, f)) : apply_op(a, apply_op(b, f));
    r.values -= f.values;
    return r;
  };
  return residual_order_probe(R, g, xi0, 0.0, E.rho - E.delta, E.size(), a.nu);
}

struct ParametrixSideCheck {
  std::vector<double> xi0, ab, ba;  // relative residuals per side
  double max_ratio = 0.0;           // worst |log-ratio| expressed as a factor
};

// Residuals of both Op(a)Op(B)-I and Op(B)Op(a)-I on the same packets.
inline ParametrixSideCheck parametrix_two_sided(const Symbol& a, const Expansion& E,
                                                const GridPtr& g,
                                                const std::vector<double>& xi0) {
  Symbol b = E.truncated();
  ParametrixSideCheck out;
  for (double x0 : xi0) {
    GFunction f = modulated_packet(g, x0, a.nu);
    double nf = l2_norm(f);
    GFunction rab = apply_op(a, apply_op(b, f));
    rab.values -= f.values;
    GFunction rba = apply_op(b, apply_op(a, f));
    rba.values -= f.values;
    out.xi0.push_back(x0);
    out.ab.push_back(l2_norm(rab) / nf);
    out.ba.push_back(l2_norm(rba) / nf);
    double hi = std::max(out.ab.back(), out.ba.back());
    double lo = std::min(out.ab.back(), out.ba.back());
    if (lo > 0) out.max_ratio = std::max(out.max_ratio, hi / lo);
  }
  return out;
}

}  // namespace psido
