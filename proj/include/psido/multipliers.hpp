#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "psido/quantize.hpp"
#include "psido/symbol.hpp"
#include "psido/transform.hpp"

namespace psido {

// ---------------------------------------------------------------------------
// Frequency multipliers (convolution operators).

// Multiplier application through the shared synthesis path; scalar oracle.
inline GFunction conv_op(const std::function<cd(const Eigen::VectorXd&)>& a,
                         const GFunction& f) {
  return conv_apply(
      [&a, nu = f.nu()](const Eigen::VectorXd& xi) {
        return (a(xi) * Eigen::MatrixXcd::Identity(nu, nu)).eval();
      },
      f.nu(), f);
}

inline GFunction conv_op_m(const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& a,
                           const GFunction& f) {
  return conv_apply(a, f.nu(), f);
}

// ---------------------------------------------------------------------------
// Piecewise-constant multipliers on the line.

// Constant value c_0 on (-inf, b_1), c_j on [b_j, b_{j+1}), c_N on [b_N, inf);
// sampling at a breakpoint takes the right interval.
struct PCSymbol1D {
  std::vector<double> breakpoints;
  std::vector<Eigen::MatrixXcd> values;  // breakpoints.size() + 1 square blocks

  int nu() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }

  void validate() const {
    if (values.size() != breakpoints.size() + 1)
      throw std::invalid_argument("PCSymbol1D: need exactly one more value than breakpoints");
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
      if (!(breakpoints[i] < breakpoints[i + 1]))
        throw std::invalid_argument("PCSymbol1D: breakpoints must be strictly increasing");
    for (const Eigen::MatrixXcd& v : values) {
      if (v.rows() != v.cols() || v.rows() != nu() || v.rows() < 1)
        throw std::invalid_argument("PCSymbol1D: values must be square blocks of equal size");
      if (!v.allFinite()) throw std::invalid_argument("PCSymbol1D: values must be finite");
    }
  }

  const Eigen::MatrixXcd& value(double xi) const {
    size_t idx = std::upper_bound(breakpoints.begin(), breakpoints.end(), xi) -
                 breakpoints.begin();
    return values[idx];
  }

  static PCSymbol1D scalar(std::vector<double> breaks, const std::vector<cd>& vals) {
    PCSymbol1D p;
    p.breakpoints = std::move(breaks);
    for (cd v : vals) p.values.push_back(Eigen::MatrixXcd::Constant(1, 1, v));
    p.validate();
    return p;
  }
};

inline GFunction conv_op(const PCSymbol1D& a, const GFunction& f) {
  a.validate();
  if (f.grid->n != 1) throw std::invalid_argument("conv_op: PC multipliers are 1-D");
  if (a.nu() != f.nu()) throw std::invalid_argument("conv_op: component mismatch");
  return conv_apply([&a](const Eigen::VectorXd& xi) { return a.value(xi[0]); }, f.nu(), f);
}

// JSON layout: {"breakpoints": [...], "values": [v, ...]} where v is [re, im]
// for scalars or a nu x nu row-major array of [re, im] pairs.
inline nlohmann::ordered_json pc_to_json(const PCSymbol1D& a) {
  a.validate();
  nlohmann::ordered_json j;
  j["breakpoints"] = a.breakpoints;
  nlohmann::ordered_json vals = nlohmann::ordered_json::array();
  for (const Eigen::MatrixXcd& v : a.values) {
    if (v.rows() == 1) {
      vals.push_back({v(0, 0).real(), v(0, 0).imag()});
    } else {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (long r = 0; r < v.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (long c = 0; c < v.cols(); ++c) row.push_back({v(r, c).real(), v(r, c).imag()});
        rows.push_back(row);
      }
      vals.push_back(rows);
    }
  }
  j["values"] = vals;
  return j;
}

inline PCSymbol1D pc_from_json(const nlohmann::json& j) {
  PCSymbol1D a;
  a.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  for (const auto& v : j.at("values")) {
    if (v.empty()) throw std::invalid_argument("PCSymbol1D: empty value entry");
    if (v[0].is_number()) {
      a.values.push_back(
          Eigen::MatrixXcd::Constant(1, 1, cd(v.at(0).get<double>(), v.at(1).get<double>())));
    } else {
      long nu_ = static_cast<long>(v.size());
      Eigen::MatrixXcd m(nu_, nu_);
      for (long r = 0; r < nu_; ++r) {
        if (static_cast<long>(v.at(r).size()) != nu_)
          throw std::invalid_argument("PCSymbol1D: matrix value entry is not square");
        for (long c = 0; c < nu_; ++c)
          m(r, c) = cd(v.at(r).at(c).at(0).get<double>(), v.at(r).at(c).at(1).get<double>());
      }
      a.values.push_back(m);
    }
  }
  a.validate();
  return a;
}

// ---------------------------------------------------------------------------
// Radial limits and the Fredholm verdict.

struct LimitEntry {
  double location;  // breakpoint, or +-infinity for the tails
  int side;         // -1 left, +1 right, 0 tail
  Eigen::MatrixXcd value;
};

using LimitSet = std::vector<LimitEntry>;

// Both lateral values at each breakpoint plus the two tail values: 2N + 2.
inline LimitSet pc_radial_limits(const PCSymbol1D& a) {
  a.validate();
  const double inf = std::numeric_limits<double>::infinity();
  LimitSet out;
  out.push_back({-inf, 0, a.values.front()});
  for (size_t i = 0; i < a.breakpoints.size(); ++i) {
    out.push_back({a.breakpoints[i], -1, a.values[i]});
    out.push_back({a.breakpoints[i], +1, a.values[i + 1]});
  }
  out.push_back({+inf, 0, a.values.back()});
  return out;
}

inline double limit_modulus(const Eigen::MatrixXcd& v) {
  if (v.rows() == 1) return std::abs(v(0, 0));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  return svd.singularValues().minCoeff();
}

struct FredholmVerdict {
  bool elliptic = false;
  double inf_modulus = 0.0;
  std::optional<PCSymbol1D> inverse;
  std::string note;
};

// Elliptic iff every radial-limit value is invertible; then the inverse
// multiplier has the reciprocal (matrix-inverse) values on the same intervals.
inline FredholmVerdict pc_fredholm(const PCSymbol1D& a) {
  FredholmVerdict v;
  v.inf_modulus = std::numeric_limits<double>::infinity();
  double worst_loc = 0.0;
  for (const LimitEntry& e : pc_radial_limits(a)) {
    double m = limit_modulus(e.value);
    if (m < v.inf_modulus) {
      v.inf_modulus = m;
      worst_loc = e.location;
    }
  }
  v.elliptic = v.inf_modulus > 1e-12;
  if (v.elliptic) {
    PCSymbol1D inv;
    inv.breakpoints = a.breakpoints;
    for (const Eigen::MatrixXcd& m : a.values)
      inv.values.push_back(m.rows() == 1
                               ? Eigen::MatrixXcd::Constant(1, 1, 1.0 / m(0, 0))
                               : Eigen::MatrixXcd(m.inverse()));
    v.inverse = std::move(inv);
    v.note = "Fredholm; inverse multiplier attached";
  } else {
    std::ostringstream os;
    os << "not Fredholm: radial limit modulus " << v.inf_modulus << " near xi = " << worst_loc;
    v.note = os.str();
  }
  return v;
}

// ---------------------------------------------------------------------------
// Cauchy singular operator.

// Frequency path: multiplier -sign(xi_k) along the chosen axis, with the
// xi = 0 node on the right interval so the operator squares to the identity
// on the whole grid, DC mode included.
// Kernel path (1-D): skip-the-diagonal principal-value quadrature
//   (1/(i pi)) sum_{l != j} f_l / (t_j - t_l) * dt,
// a first-order method; its defect against the frequency path scales like
// dt * |f'| plus window truncation of the output tail.
inline GFunction hilbert_G(const GFunction& f, int axis = 0,
                           const std::string& path = "fourier") {
  const TGrid& g = *f.grid;
  if (axis < 0 || axis >= g.n) throw std::invalid_argument("hilbert_G: axis out of range");
  if (path == "fourier") {
    return conv_op([axis](const Eigen::VectorXd& xi) {
      return cd(xi[axis] >= 0.0 ? -1.0 : 1.0, 0.0);
    }, f);
  }
  if (path != "kernel") throw std::invalid_argument("hilbert_G: path must be fourier|kernel");
  if (g.n != 1) throw std::invalid_argument("hilbert_G: kernel path is 1-D only");
  require_finite(f.values, "hilbert_G input");
  GFunction out{f.grid, Eigen::MatrixXcd::Zero(g.total(), f.nu())};
  const cd scale = 1.0 / (cd(0.0, 1.0) * M_PI);
  for (long j = 0; j < g.total(); ++j) {
    Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(f.nu());
    double tj = g.t_axis[j];
    for (long l = 0; l < g.total(); ++l) {
      if (l == j) continue;
      acc += f.values.row(l) / (tj - g.t_axis[l]);
    }
    out.values.row(j) = scale * acc * g.cell_t();
  }
  return out;
}

// Standard probe for the dual-path comparison: the k-th derivative of the
// wide Gaussian e^{-t^2/8} (Hermite recurrence, constant scale dropped).
// Its spectrum has a k-th order zero at xi = 0, which keeps the output free
// of the slowly decaying tail that the two discretizations truncate
// differently; k >= 3 or so is needed for window-converged agreement.
inline GFunction hermite_decay_probe(GridPtr g, int k = 4) {
  if (g->n != 1) throw std::invalid_argument("hermite_decay_probe: 1-D only");
  if (k < 0 || k > 8) throw std::invalid_argument("hermite_decay_probe: k must lie in 0..8");
  return sample_t1(g, [k](double t) {
    double z = t / (2.0 * std::sqrt(2.0));
    double h0 = 1.0, h1 = 2.0 * z;
    for (int i = 1; i < k; ++i) {
      double h2 = 2.0 * z * h1 - 2.0 * i * h0;
      h0 = h1;
      h1 = h2;
    }
    double hk = k == 0 ? h0 : h1;
    double sgn = (k % 2) ? -1.0 : 1.0;
    return cd(sgn * hk * std::exp(-z * z), 0.0);
  });
}

// ---------------------------------------------------------------------------
// p = 2 multiplier-boundedness certificate.

struct CondBTerm {
  std::vector<int> kappa;  // coordinate order
  MIdx gamma;              // t-derivative applied first
  int k = 0;               // number of integrated leading coordinates
  double value = 0.0;
  bool finite = true;
  std::vector<double> window_values;  // nested-window partial integrals
};

struct CondBReport {
  bool finite = true;
  double total = 0.0;  // sup over kappa of the per-kappa term sums
  std::vector<CondBTerm> terms;
  std::string note =
      "p = 2 certificate: multiplier norm realized as sup over the frequency grid; "
      "other p are not computable here";
};

namespace detail {

// sup over (a subsample of) the frequency grid of |d/dt^(gamma+extra) sigma|
// at the given t
inline double condb_sup_xi(const Symbol& s, const TGrid& g, const Eigen::VectorXd& t,
                           const MIdx& beta, long stride) {
  double sup = 0.0;
  MIdx zero(s.n, 0);
  for (long k = 0; k < g.total(); k += stride) {
    Eigen::MatrixXcd v = s.d_m(zero, beta, t, g.xi_node(k));
    sup = std::max(sup, spec_norm(v));
  }
  return sup;
}

}  // namespace detail

// Certificate of Marcinkiewicz type: for each coordinate order kappa, each
// t-derivative gamma with |gamma| <= m, and each depth k, integrates the
// mixed derivative over the k leading coordinates (others at 0) of the
// sup-over-frequency norm. Divergence is detected by non-decaying increments
// over nested windows; any divergent term makes the certificate infinite.
inline CondBReport condition_B_certificate(const Symbol& s, int m, GridPtr gp,
                                           std::vector<double> windows = {4, 8, 16, 32}) {
  if (s.n != gp->n) throw std::invalid_argument("condition_B_certificate: dimension mismatch");
  if (s.n > 2) throw std::invalid_argument("condition_B_certificate: n <= 2 only");
  if (m < 0) throw std::invalid_argument("condition_B_certificate: m must be >= 0");
  const TGrid& g = *gp;
  const double dy = s.n == 1 ? 0.25 : 0.5;
  const long stride = std::max(1L, g.total() / (s.n == 1 ? 129 : 1025));

  std::vector<std::vector<int>> kappas;
  if (s.n == 1) {
    kappas = {{0}};
  } else {
    kappas = {{0, 1}, {1, 0}};
  }

  CondBReport rep;
  std::vector<double> per_kappa(kappas.size(), 0.0);
  for (size_t ki = 0; ki < kappas.size(); ++ki) {
    const std::vector<int>& kap = kappas[ki];
    for (int order = 0; order <= m; ++order)
      for (const MIdx& gamma : multi_indices_of_order(s.n, order))
        for (int k = 0; k <= s.n; ++k) {
          CondBTerm term;
          term.kappa = kap;
          term.gamma = gamma;
          term.k = k;
          MIdx beta = gamma;
          for (int d = 0; d < k; ++d) beta[kap[d]] += 1;

          if (k == 0) {
            term.value = detail::condb_sup_xi(s, g, Eigen::VectorXd::Zero(s.n), beta, stride);
            term.window_values = {term.value};
          } else {
            // nested-window trapezoid in the k leading coordinates
            double prev_total = 0.0, prev_inc = -1.0;
            bool diverging = false;
            for (double W : windows) {
              long steps = static_cast<long>(std::llround(2.0 * W / dy));
              double total = 0.0;
              if (k == 1) {
                for (long i = 0; i <= steps; ++i) {
                  double w = (i == 0 || i == steps) ? 0.5 : 1.0;
                  Eigen::VectorXd t = Eigen::VectorXd::Zero(s.n);
                  t[kap[0]] = -W + i * dy;
                  total += w * detail::condb_sup_xi(s, g, t, beta, stride) * dy;
                }
              } else {
                for (long i = 0; i <= steps; ++i)
                  for (long i2 = 0; i2 <= steps; ++i2) {
                    double w = ((i == 0 || i == steps) ? 0.5 : 1.0) *
                               ((i2 == 0 || i2 == steps) ? 0.5 : 1.0);
                    Eigen::VectorXd t = Eigen::VectorXd::Zero(s.n);
                    t[kap[0]] = -W + i * dy;
                    t[kap[1]] = -W + i2 * dy;
                    total += w * detail::condb_sup_xi(s, g, t, beta, stride) * dy * dy;
                  }
              }
              double inc = total - prev_total;
              term.window_values.push_back(total);
              if (prev_inc >= 0.0 && inc > 1e-10 && inc >= 0.9 * prev_inc) diverging = true;
              prev_inc = inc;
              prev_total = total;
            }
            term.value = prev_total;
            // converged only if the final window added a negligible slice
            double last_inc = term.window_values.size() >= 2
                                  ? term.window_values.back() -
                                        term.window_values[term.window_values.size() - 2]
                                  : 0.0;
            term.finite = !diverging && last_inc <= 0.01 * std::max(term.value, 1e-12);
          }
          per_kappa[ki] += term.value;
          if (!term.finite) rep.finite = false;
          rep.terms.push_back(std::move(term));
        }
  }
  rep.total = *std::max_element(per_kappa.begin(), per_kappa.end());
  if (!rep.finite) rep.note += "; divergent mixed-derivative integral detected";
  return rep;
}

}  // namespace psido
