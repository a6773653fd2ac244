#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "psido/group.hpp"

namespace psido {

using cd = std::complex<double>;

// Uniform grid in the t chart, shared by all sampled objects.
//
//   t_j  = -T + j*dt,  dt  = 2T/M,   j = 0..M-1   (per axis)
//   xi_k = k/(2T),     dxi = 1/(2T), k = -M/2..M/2-1
//
// so dt*dxi*M = 1 exactly, which is what makes the discrete transform pair
// below exactly unitary in the Haar-weighted inner product. x nodes are the
// chart images -tanh(t_j); the Haar quadrature weight per node is dt^n.
struct TGrid {
  double T = 0;
  int M = 0;
  int n = 1;
  double dt = 0, dxi = 0;
  Eigen::ArrayXd t_axis, x_axis, xi_axis;

  long total() const {
    long v = 1;
    for (int a = 0; a < n; ++a) v *= M;
    return v;
  }
  double cell_t() const { return std::pow(dt, n); }
  double cell_xi() const { return std::pow(dxi, n); }
  double nyquist() const { return M / (4.0 * T); }

  // flattened index -> per-axis indices (row-major, axis 0 slowest)
  void unflatten(long j, int* idx) const {
    for (int a = n - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(j % M);
      j /= M;
    }
  }
  Eigen::VectorXd t_node(long j) const {
    int idx[2];
    unflatten(j, idx);
    Eigen::VectorXd v(n);
    for (int a = 0; a < n; ++a) v[a] = t_axis[idx[a]];
    return v;
  }
  Eigen::VectorXd x_node(long j) const {
    int idx[2];
    unflatten(j, idx);
    Eigen::VectorXd v(n);
    for (int a = 0; a < n; ++a) v[a] = x_axis[idx[a]];
    return v;
  }
  Eigen::VectorXd xi_node(long k) const {
    int idx[2];
    unflatten(k, idx);
    Eigen::VectorXd v(n);
    for (int a = 0; a < n; ++a) v[a] = xi_axis[idx[a]];
    return v;
  }
  bool is_edge_node(long j) const {
    int idx[2];
    unflatten(j, idx);
    for (int a = 0; a < n; ++a)
      if (idx[a] == 0 || idx[a] == M - 1) return true;
    return false;
  }
};

using GridPtr = std::shared_ptr<const TGrid>;

inline bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

inline GridPtr make_grid(double T, int M, int n = 1) {
  if (!(T > 0) || !std::isfinite(T))
    throw std::invalid_argument("grid: T must be positive and finite");
  if (!is_power_of_two(M) || M < 8)
    throw std::invalid_argument("grid: M must be a power of two >= 8");
  if (n != 1 && n != 2) throw std::invalid_argument("grid: n must be 1 or 2");
  auto g = std::make_shared<TGrid>();
  g->T = T;
  g->M = M;
  g->n = n;
  g->dt = 2.0 * T / M;
  g->dxi = 1.0 / (2.0 * T);
  g->t_axis.resize(M);
  g->x_axis.resize(M);
  g->xi_axis.resize(M);
  for (int j = 0; j < M; ++j) {
    g->t_axis[j] = -T + j * g->dt;
    g->x_axis[j] = map_x_scalar(g->t_axis[j]);
  }
  for (int k = 0; k < M; ++k) g->xi_axis[k] = (k - M / 2) * g->dxi;
  return g;
}

inline void require_same_grid(const TGrid& a, const TGrid& b) {
  if (a.T != b.T || a.M != b.M || a.n != b.n)
    throw std::invalid_argument("grid mismatch between operands");
}

// Function sampled on the grid's x nodes (equivalently its t nodes: the
// pullback is the identity on samples). values is total() x nu, one column
// per component of a C^nu-valued function.
struct GFunction {
  GridPtr grid;
  Eigen::MatrixXcd values;

  int nu() const { return static_cast<int>(values.cols()); }
};

// Frequency-side object on the same grid's xi nodes.
struct Spectrum {
  GridPtr grid;
  Eigen::MatrixXcd values;

  int nu() const { return static_cast<int>(values.cols()); }
};

// Sample a scalar function given in the t chart.
inline GFunction sample_t(GridPtr g, const std::function<cd(const Eigen::VectorXd&)>& f) {
  GFunction out{g, Eigen::MatrixXcd(g->total(), 1)};
  for (long j = 0; j < g->total(); ++j) out.values(j, 0) = f(g->t_node(j));
  return out;
}

// 1-D convenience overload.
inline GFunction sample_t1(GridPtr g, const std::function<cd(double)>& f) {
  if (g->n != 1) throw std::invalid_argument("sample_t1: grid is not 1-D");
  GFunction out{g, Eigen::MatrixXcd(g->M, 1)};
  for (int j = 0; j < g->M; ++j) out.values(j, 0) = f(g->t_axis[j]);
  return out;
}

inline GFunction sample_x1(GridPtr g, const std::function<cd(double)>& f) {
  if (g->n != 1) throw std::invalid_argument("sample_x1: grid is not 1-D");
  GFunction out{g, Eigen::MatrixXcd(g->M, 1)};
  for (int j = 0; j < g->M; ++j) out.values(j, 0) = f(g->x_axis[j]);
  return out;
}

// L^2(G) norm by the Haar rectangle rule.
inline double l2_norm(const GFunction& f) {
  return std::sqrt(f.values.array().abs2().sum() * f.grid->cell_t());
}

// L^p(G) norm, p >= 1.
inline double lp_norm(const GFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double acc = f.values.array().abs().pow(p).sum() * f.grid->cell_t();
  return std::pow(acc, 1.0 / p);
}

inline double l2_norm(const Spectrum& s) {
  return std::sqrt(s.values.array().abs2().sum() * s.grid->cell_xi());
}

inline double max_abs(const Eigen::MatrixXcd& v) {
  return v.size() ? v.array().abs().maxCoeff() : 0.0;
}

// Decay diagnostic: largest magnitude on boundary nodes relative to the
// global maximum must sit below edge_decay_rel for spectrally clean use.
inline bool edge_decay_ok(const GFunction& f,
                          double rel = global_config().edge_decay_rel) {
  double global = max_abs(f.values);
  if (global == 0.0) return true;
  double edge = 0.0;
  for (long j = 0; j < f.grid->total(); ++j)
    if (f.grid->is_edge_node(j))
      edge = std::max(edge, f.values.row(j).array().abs().maxCoeff());
  return edge <= rel * global;
}

}  // namespace psido
