#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "psido/parallel.hpp"
#include "psido/symbol.hpp"
#include "psido/transform.hpp"

namespace psido {

// Kohn-Nirenberg quantization on the grid:
//
//   (Op(sigma) f)(x_j) = sum_k e^{+2 pi i t_j . xi_k} sigma(x_j, xi_k) s(xi_k) dxi^n
//
// with s = F_G f. The symbol is evaluated through its x-form, i.e. the t-form
// at t(x_j); the pullback route below evaluates the t-form at t_j directly,
// which is the Euclidean quantization conjugated by the chart. The two agree
// up to chart roundtrip roundoff, and that agreement is the standing
// correctness check for this module.
inline GFunction apply_op(const Symbol& s, const GFunction& f) {
  const TGrid& g = *f.grid;
  if (s.n != g.n) throw std::invalid_argument("apply_op: symbol/grid dimension mismatch");
  if (s.nu != f.nu()) throw std::invalid_argument("apply_op: symbol/function component mismatch");
  require_finite(f.values, "apply_op");

  Transformer tr(f.grid);
  Spectrum spec = tr.analyze(f);

  std::vector<Eigen::VectorXd> xis(g.total());
  for (long k = 0; k < g.total(); ++k) xis[k] = g.xi_node(k);

  GFunction out{f.grid, Eigen::MatrixXcd(g.total(), f.nu())};
  parallel_for(g.total(), [&](long j) {
    Eigen::VectorXd tx = map_t(GPoint(g.x_node(j))).coords();
    Eigen::MatrixXcd V(g.total(), f.nu());
    if (s.nu == 1) {
      for (long k = 0; k < g.total(); ++k) V.row(k) = s.value(tx, xis[k]) * spec.values.row(k);
    } else {
      for (long k = 0; k < g.total(); ++k)
        V.row(k) = (s.value_m(tx, xis[k]) * spec.values.row(k).transpose()).transpose();
    }
    out.values.row(j) = tr.synth_row(j, V);
  });
  return out;
}

// Multiplier application: the frequency-side multiplication path. For an
// x-independent symbol this is bit-identical to apply_op because both funnel
// the multiplied spectrum through Transformer::synth_row.
inline GFunction conv_apply(const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& mult,
                            int nu, const GFunction& f) {
  if (nu != f.nu()) throw std::invalid_argument("conv_apply: component mismatch");
  const TGrid& g = *f.grid;
  Transformer tr(f.grid);
  Spectrum spec = tr.analyze(f);
  Eigen::MatrixXcd V(g.total(), f.nu());
  for (long k = 0; k < g.total(); ++k) {
    Eigen::VectorXd xi = g.xi_node(k);
    if (nu == 1)
      V.row(k) = mult(xi)(0, 0) * spec.values.row(k);
    else
      V.row(k) = (mult(xi) * spec.values.row(k).transpose()).transpose();
  }
  GFunction out{f.grid, Eigen::MatrixXcd(g.total(), f.nu())};
  parallel_for(g.total(), [&](long j) { out.values.row(j) = tr.synth_row(j, V); });
  return out;
}

// Euclidean quantization on the t grid (the chart-conjugated route). Kept as
// an organizationally independent implementation: kernels assembled as dense
// DFT matrices and applied by matrix products, with the symbol's t-form
// evaluated at the grid's own t nodes.
inline GFunction apply_op_pullback(const Symbol& s, const GFunction& f) {
  const TGrid& g = *f.grid;
  if (s.n != g.n) throw std::invalid_argument("apply_op_pullback: dimension mismatch");
  if (s.nu != f.nu()) throw std::invalid_argument("apply_op_pullback: component mismatch");
  require_finite(f.values, "apply_op_pullback");

  const long N = g.total();
  // forward kernel F(k,j) = e^{-2 pi i t_j.xi_k} dt^n, inverse I(j,k) = e^{+...} dxi^n
  Eigen::MatrixXcd F(N, N), I(N, N);
  for (long k = 0; k < N; ++k) {
    Eigen::VectorXd xi = g.xi_node(k);
    for (long j = 0; j < N; ++j) {
      double ph = 2.0 * M_PI * g.t_node(j).dot(xi);
      F(k, j) = std::exp(cd(0.0, -ph)) * g.cell_t();
      I(j, k) = std::exp(cd(0.0, ph)) * g.cell_xi();
    }
  }
  Eigen::MatrixXcd spec = F * f.values;
  GFunction out{f.grid, Eigen::MatrixXcd(N, f.nu())};
  if (s.nu == 1) {
    Eigen::MatrixXcd W(N, N);  // W(j,k) = I(j,k) * sigma(t_j, xi_k)
    for (long j = 0; j < N; ++j) {
      Eigen::VectorXd tj = g.t_node(j);
      for (long k = 0; k < N; ++k) W(j, k) = I(j, k) * s.value(tj, g.xi_node(k));
    }
    out.values = W * spec;
  } else {
    for (long j = 0; j < N; ++j) {
      Eigen::VectorXd tj = g.t_node(j);
      Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(f.nu());
      for (long k = 0; k < N; ++k)
        acc += I(j, k) * (s.value_m(tj, g.xi_node(k)) * spec.row(k).transpose()).transpose();
      out.values.row(j) = acc;
    }
  }
  return out;
}

// Adjoint action without materialization. In the uniform Haar-orthonormal
// sample coordinates the adjoint is the conjugate-transpose kernel:
//   g(xi_k)        = sum_l conj(ker(l,k)) sigma(x_l, xi_k)^H f(x_l) dt^n
//   (A^H f)(x_j)   = sum_k ker(j,k) g(xi_k) dxi^n
// and the second line reuses the shared synthesis path.
inline GFunction apply_op_adjoint(const Symbol& s, const GFunction& f) {
  const TGrid& g = *f.grid;
  if (s.n != g.n) throw std::invalid_argument("apply_op_adjoint: dimension mismatch");
  if (s.nu != f.nu()) throw std::invalid_argument("apply_op_adjoint: component mismatch");
  require_finite(f.values, "apply_op_adjoint");

  Transformer tr(f.grid);
  std::vector<Eigen::VectorXd> txs(g.total());
  for (long l = 0; l < g.total(); ++l) txs[l] = map_t(GPoint(g.x_node(l))).coords();

  Eigen::MatrixXcd G(g.total(), f.nu());
  parallel_for(g.total(), [&](long k) {
    Eigen::VectorXd xi = g.xi_node(k);
    Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(f.nu());
    if (s.nu == 1) {
      for (long l = 0; l < g.total(); ++l)
        acc += std::conj(tr.ker(l, k) * s.value(txs[l], xi)) * f.values.row(l);
    } else {
      for (long l = 0; l < g.total(); ++l)
        acc += std::conj(tr.ker(l, k)) *
               (s.value_m(txs[l], xi).adjoint() * f.values.row(l).transpose()).transpose();
    }
    G.row(k) = acc * g.cell_t();
  });
  GFunction out{f.grid, Eigen::MatrixXcd(g.total(), f.nu())};
  parallel_for(g.total(), [&](long j) { out.values.row(j) = tr.synth_row(j, G); });
  return out;
}

// Dense matrix of the operator in Haar-orthonormal sample coordinates. The
// node weights are uniform (dt^n), so the similarity scaling cancels and the
// matrix entries are exactly (A delta_l)(x_j); the flattened index interleaves
// components node-major, row = j*nu + c.
struct OperatorMatrix {
  GridPtr grid;
  int nu = 1;
  Eigen::MatrixXcd A;

  GFunction apply(const GFunction& f) const {
    require_same_grid(*grid, *f.grid);
    if (f.nu() != nu) throw std::invalid_argument("OperatorMatrix: component mismatch");
    long N = grid->total();
    Eigen::VectorXcd v(N * nu);
    for (long j = 0; j < N; ++j)
      for (int c = 0; c < nu; ++c) v[j * nu + c] = f.values(j, c);
    Eigen::VectorXcd w = A * v;
    GFunction out{f.grid, Eigen::MatrixXcd(N, nu)};
    for (long j = 0; j < N; ++j)
      for (int c = 0; c < nu; ++c) out.values(j, c) = w[j * nu + c];
    return out;
  }
};

inline OperatorMatrix materialize_matrix(const Symbol& s, GridPtr gp) {
  const TGrid& g = *gp;
  if (s.n != g.n) throw std::invalid_argument("materialize_matrix: dimension mismatch");
  long N = g.total();
  if (s.nu * N > 8192)
    throw std::invalid_argument("materialize_matrix: nu*M^n exceeds the 8192 cap");

  Transformer tr(gp);
  long D = N * s.nu;
  // A = B * F with B(j c, k c') = ker(j,k) sigma_{c c'}(x_j, xi_k) dxi^n
  //             F(k c', l c'') = conj(ker(l,k)) delta_{c' c''} dt^n
  Eigen::MatrixXcd B(D, D), F = Eigen::MatrixXcd::Zero(D, D);
  std::vector<Eigen::VectorXd> xis(N);
  for (long k = 0; k < N; ++k) xis[k] = g.xi_node(k);
  parallel_for(N, [&](long j) {
    Eigen::VectorXd tx = map_t(GPoint(g.x_node(j))).coords();
    for (long k = 0; k < N; ++k) {
      Eigen::MatrixXcd sig = s.value_m(tx, xis[k]);
      cd kv = tr.ker(j, k) * g.cell_xi();
      for (int c = 0; c < s.nu; ++c)
        for (int c2 = 0; c2 < s.nu; ++c2) B(j * s.nu + c, k * s.nu + c2) = kv * sig(c, c2);
    }
  });
  parallel_for(N, [&](long l) {
    for (long k = 0; k < N; ++k) {
      cd fv = std::conj(tr.ker(l, k)) * g.cell_t();
      for (int c = 0; c < s.nu; ++c) F(k * s.nu + c, l * s.nu + c) = fv;
    }
  });
  return OperatorMatrix{gp, s.nu, B * F};
}

}  // namespace psido
