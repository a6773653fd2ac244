#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "psido/calculus.hpp"
#include "psido/quantize.hpp"
#include "psido/symbol.hpp"

namespace psido {

// ---------------------------------------------------------------------------
// Dense singular-value helpers. The Gram route is accurate down to
// sqrt(eps)*sigma_max; the Jordan-Wielandt route resolves tiny singular
// values to eps*sigma_max and also yields both singular vectors.

inline Eigen::VectorXd singular_values_gram(const Eigen::MatrixXcd& A) {
  Eigen::MatrixXcd G = A.adjoint() * A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXd sv(ev.size());
  for (long i = 0; i < ev.size(); ++i)
    sv[i] = std::sqrt(std::max(0.0, ev[ev.size() - 1 - i]));  // descending
  return sv;
}

struct SingularTriples {
  Eigen::VectorXd sigma;    // descending
  Eigen::MatrixXcd left;    // columns u_i
  Eigen::MatrixXcd right;   // columns v_i
};

inline SingularTriples singular_triples_jw(const Eigen::MatrixXcd& A) {
  const long D = A.rows();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * D, 2 * D);
  H.topRightCorner(D, D) = A;
  H.bottomLeftCorner(D, D) = A.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  // eigenpairs (sigma, (u; v)/sqrt2); take the D largest eigenvalues
  SingularTriples out;
  out.sigma.resize(D);
  out.left.resize(D, D);
  out.right.resize(D, D);
  for (long i = 0; i < D; ++i) {
    long src = 2 * D - 1 - i;  // eigenvalues come back ascending
    out.sigma[i] = std::max(0.0, es.eigenvalues()[src]);
    Eigen::VectorXcd w = es.eigenvectors().col(src);
    Eigen::VectorXcd u = w.head(D), v = w.tail(D);
    double nu_ = u.norm(), nv = v.norm();
    out.left.col(i) = nu_ > 0 ? Eigen::VectorXcd(u / nu_) : u;
    out.right.col(i) = nv > 0 ? Eigen::VectorXcd(v / nv) : v;
  }
  return out;
}

// Largest singular value; Haar-orthonormal coordinates make this the
// discrete L2(G) operator norm.
inline double op_norm_L2(const OperatorMatrix& A) {
  Eigen::MatrixXcd G = A.A.adjoint() * A.A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// ---------------------------------------------------------------------------
// Probe reports.

struct GridSched {
  double T;
  long M;
};

struct ProbeReport {
  std::string probe;
  std::vector<GridSched> schedule;
  std::map<std::string, std::vector<double>> measured;  // name -> one value per grid
  std::string verdict;
  double tolerance = 0.0;
  std::string note;
};

inline void require_increasing_schedule(const std::vector<GridSched>& sched, const char* who) {
  for (size_t i = 0; i + 1 < sched.size(); ++i)
    if (sched[i + 1].M <= sched[i].M)
      throw std::invalid_argument(std::string(who) + ": schedule must be strictly increasing in M");
}

// ---------------------------------------------------------------------------
// Deterministic probe family: Gaussians, modulated packets, and bumps pushed
// toward the boundary of the group (|t| large).

inline std::vector<GFunction> make_cv_family(const GridPtr& g, int count = 50,
                                             unsigned long long seed = 2026) {
  std::mt19937_64 rng(seed);
  auto u01 = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  std::vector<GFunction> fam;
  for (int i = 0; i < count; ++i) {
    double w = 0.5 + 2.0 * u01();
    double c = (2.0 * u01() - 1.0) * g->T / 3.0;
    double freq = 0.0;
    if (i % 3 == 1) freq = (2.0 * u01() - 1.0) * g->nyquist() / 3.0;
    if (i % 3 == 2) c = (u01() < 0.5 ? -0.7 : 0.7) * g->T;  // near-boundary bump
    GFunction f{g, Eigen::MatrixXcd(g->total(), 1)};
    for (long j = 0; j < g->total(); ++j) {
      Eigen::VectorXd t = g->t_node(j);
      double q = 0.0, ph = 0.0;
      for (int a = 0; a < g->n; ++a) {
        q += (t[a] - c) * (t[a] - c);
        ph += 2.0 * M_PI * t[a] * freq;
      }
      f.values(j, 0) = std::polar(std::exp(-q / (2.0 * w * w)), ph);
    }
    fam.push_back(std::move(f));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Calderon-Vaillancourt style uniform-boundedness probe.

inline ProbeReport cv_boundedness_probe(const Symbol& s, const std::vector<GridSched>& sched,
                                        double p) {
  if (!(1.0 < p && p < std::numeric_limits<double>::infinity()) )
    throw std::invalid_argument("cv_boundedness_probe: p must lie in (1, inf)");
  require_increasing_schedule(sched, "cv_boundedness_probe");
  ProbeReport rep;
  rep.probe = "cv_boundedness";
  rep.schedule = sched;
  rep.tolerance = p == 2.0 ? global_config().cv_drift_p2 : global_config().cv_drift_pother;

  std::vector<double> vals;
  for (const GridSched& gs : sched) {
    GridPtr g = make_grid(gs.T, gs.M, s.n);
    if (p == 2.0) {
      vals.push_back(op_norm_L2(materialize_matrix(s, g)));
    } else {
      double sup = 0.0;
      for (const GFunction& f : make_cv_family(g)) {
        double nf = lp_norm(f, p);
        if (nf == 0.0) continue;
        sup = std::max(sup, lp_norm(apply_op(s, f), p) / nf);
      }
      vals.push_back(sup);
    }
  }
  rep.measured["norm"] = vals;
  double lo = *std::min_element(vals.begin(), vals.end());
  double hi = *std::max_element(vals.begin(), vals.end());
  bool stable = lo > 0 && (hi / lo - 1.0) <= rep.tolerance;
  rep.verdict = stable ? "stable" : "unstable";
  if (!stable && vals.back() > vals.front()) {
    std::ostringstream os;
    os << "growth " << (vals.back() / vals.front() - 1.0) * 100.0 << "% across the schedule";
    rep.note = os.str();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Garding lower-bound probe: lambda_min of S^{-1/2} A_h S^{-1/2} with S the
// Bessel multiplier of the shift order and A_h the Hermitian part.

inline Eigen::MatrixXcd conv_matrix(const GridPtr& gp,
                                    const std::function<double(const Eigen::VectorXd&)>& w) {
  const TGrid& g = *gp;
  Transformer tr(gp);
  long N = g.total();
  Eigen::MatrixXcd syn(N, N), an(N, N);
  for (long k = 0; k < N; ++k) {
    double wk = w(g.xi_node(k));
    for (long j = 0; j < N; ++j) {
      syn(j, k) = tr.ker(j, k) * g.cell_xi() * wk;
      an(k, j) = std::conj(tr.ker(j, k)) * g.cell_t();
    }
  }
  return syn * an;
}

inline ProbeReport garding_probe(const Symbol& s, const std::vector<GridSched>& sched,
                                 double shift) {
  require_increasing_schedule(sched, "garding_probe");
  if (s.nu != 1) throw std::invalid_argument("garding_probe: scalar symbols only");

  // precondition: the symbol is (numerically) real and nonnegative on probes
  {
    ProbeBox box;
    double worst = 0.0;
    Eigen::VectorXd bad_t, bad_xi;
    for (double L : box.Ls)
      detail::for_box_points(s.n, L, box.points_per_axis,
                             [&](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
                               cd v = s.value(t, xi);
                               double viol = std::max(-v.real(), std::abs(v.imag()));
                               if (viol > worst) {
                                 worst = viol;
                                 bad_t = t;
                                 bad_xi = xi;
                               }
                             });
    if (worst > 1e-10) {
      std::ostringstream os;
      os << "garding_probe: symbol not nonnegative (violation " << worst << " at t = ["
         << bad_t.transpose() << "], xi = [" << bad_xi.transpose() << "])";
      throw std::invalid_argument(os.str());
    }
  }

  ProbeReport rep;
  rep.probe = "garding";
  rep.schedule = sched;
  rep.tolerance = global_config().garding_drift;
  std::vector<double> cs;
  for (const GridSched& gs : sched) {
    GridPtr g = make_grid(gs.T, gs.M, s.n);
    Eigen::MatrixXcd A = materialize_matrix(s, g).A;
    Eigen::MatrixXcd Ah = 0.5 * (A + A.adjoint());
    Eigen::MatrixXcd B;
    if (shift == 0.0) {
      B = Ah;
    } else {
      Eigen::MatrixXcd W = conv_matrix(g, [shift](const Eigen::VectorXd& xi) {
        return std::pow(1.0 + 4.0 * M_PI * M_PI * xi.squaredNorm(), -shift / 4.0);
      });
      B = W * Ah * W;
    }
    Eigen::MatrixXcd Bh = 0.5 * (B + B.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Bh, Eigen::EigenvaluesOnly);
    cs.push_back(std::max(0.0, -es.eigenvalues().minCoeff()));
  }
  rep.measured["C_est"] = cs;
  bool ok = true;
  size_t nsz = cs.size();
  if (nsz >= 2) {
    double a = cs[nsz - 2], b = cs[nsz - 1];
    if (std::max(a, b) > 1e-10 && std::abs(b - a) / std::max(a, b) > rep.tolerance) ok = false;
  }
  for (size_t i = 0; i + 1 < nsz; ++i)
    if (cs[i + 1] > 1.1 * cs[i] + 1e-10) ok = false;
  rep.verdict = ok ? "bounded-below" : "drifting";
  return rep;
}

// ---------------------------------------------------------------------------
// Compactness probe (essential-norm evidence).

inline ProbeReport compactness_probe(const Symbol& s, const std::vector<GridSched>& sched,
                                     std::vector<int> ranks = {4, 16, 64}) {
  if (sched.size() < 3) throw std::invalid_argument("compactness_probe: need >= 3 grids");
  require_increasing_schedule(sched, "compactness_probe");
  ProbeReport rep;
  rep.probe = "compactness";
  rep.schedule = sched;

  double d_est = decay_limit_d(s).d_est;
  rep.measured["d_est"] = std::vector<double>(sched.size(), d_est);

  std::vector<Eigen::VectorXd> svs;
  for (const GridSched& gs : sched) {
    GridPtr g = make_grid(gs.T, gs.M, s.n);
    svs.push_back(singular_values_gram(materialize_matrix(s, g).A));
  }
  for (int r : ranks) {
    std::vector<double> row, rowp;
    for (const Eigen::VectorXd& sv : svs) {
      row.push_back(r - 1 < sv.size() ? sv[r - 1] : 0.0);      // sigma_r, 1-indexed
      rowp.push_back(r < sv.size() ? sv[r] : 0.0);             // sigma_{r+1}
    }
    rep.measured["sigma_" + std::to_string(r)] = row;
    rep.measured["sigma_" + std::to_string(r + 1)] = rowp;
  }

  double smax = svs.back()[0];
  if (d_est > 0.01 * std::max(smax, 1.0)) {
    // essential-norm lower bound: sigma_{r+1} >= 0.9 d for every probed rank
    bool lower = true;
    for (int r : ranks) {
      double v = r < svs.back().size() ? svs.back()[r] : 0.0;
      if (v < 0.9 * d_est) lower = false;
    }
    rep.verdict = lower ? "noncompact-evidence" : "inconclusive";
    rep.note = "essential norm lower bound 0.9*d_est = " + std::to_string(0.9 * d_est);
  } else {
    // decay in rank at the finest grid, and no growth of any probed
    // sigma_r as the grid refines; the Gram route cannot resolve singular
    // values under sqrt(eps)*sigma_max, so comparisons carry that slack
    double floor_ = std::max(1e-6 * smax, global_config().compact_floor);
    bool tail = true;
    int rmax = ranks.back();
    if (rmax < svs.back().size() && svs.back()[rmax] > floor_) tail = false;
    bool nogrow = true;
    for (int r : ranks)
      for (size_t i = 0; i + 1 < svs.size(); ++i) {
        double a = r - 1 < svs[i].size() ? svs[i][r - 1] : 0.0;
        double b = r - 1 < svs[i + 1].size() ? svs[i + 1][r - 1] : 0.0;
        if (b > 1.05 * a + floor_) nogrow = false;
      }
    rep.verdict = (tail && nogrow) ? "compact-evidence" : "inconclusive";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Winding-number index for n = 1.

struct Contour {
  double t0 = 0.0, xi0 = 0.0, radius = 3.0;
};

struct IndexReport {
  double winding = 0.0;
  long index = 0;
  double residual = 0.0;
  Contour contour;
  long samples = 0;
  double min_det = 0.0;  // smallest |det a| (min singular value for matrices) seen
};

// winding = (1/2pi) total increment of arg det a along the CCW circle
// (t, xi) = (t0 + R cos th, xi0 + R sin th), by principal-branch phase
// accumulation. Sample count doubles until every step is below pi/2 and the
// winding is stable to 1e-8.
inline IndexReport winding_index(const Symbol& s, const Contour& c, long samples = 512) {
  if (s.n != 1) throw std::invalid_argument("winding_index: n = 1 symbols only");
  if (samples < 8) samples = 8;
  const Config& cfg = global_config();

  IndexReport rep;
  rep.contour = c;
  auto det_at = [&](double th) -> cd {
    Eigen::VectorXd t(1), xi(1);
    t[0] = c.t0 + c.radius * std::cos(th);
    xi[0] = c.xi0 + c.radius * std::sin(th);
    if (s.nu == 1) {
      cd v = s.value(t, xi);
      if (std::abs(v) < cfg.winding_invertibility) {
        std::ostringstream os;
        os << "winding_index: symbol nearly singular (|a| = " << std::abs(v)
           << ") at theta = " << th;
        throw std::runtime_error(os.str());
      }
      return v;
    }
    Eigen::MatrixXcd m = s.value_m(t, xi);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    if (svd.singularValues().minCoeff() < cfg.winding_invertibility) {
      std::ostringstream os;
      os << "winding_index: symbol nearly singular (min sv = "
         << svd.singularValues().minCoeff() << ") at theta = " << th;
      throw std::runtime_error(os.str());
    }
    return m.determinant();
  };

  double prev_w = std::numeric_limits<double>::quiet_NaN();
  for (;; samples *= 2) {
    if (samples > cfg.winding_max_samples)
      throw std::runtime_error("winding_index: no stable winding within the sample cap");
    double acc = 0.0, max_step = 0.0, min_det = std::numeric_limits<double>::infinity();
    cd d0 = det_at(0.0), dp = d0;
    for (long i = 1; i <= samples; ++i) {
      cd di = i == samples ? d0 : det_at(2.0 * M_PI * i / samples);
      double step = std::arg(di / dp);
      acc += step;
      max_step = std::max(max_step, std::abs(step));
      min_det = std::min(min_det, std::abs(dp));
      dp = di;
    }
    double w = acc / (2.0 * M_PI);
    rep.samples = samples;
    rep.min_det = min_det;
    if (max_step < M_PI / 2.0 && std::isfinite(prev_w) && std::abs(w - prev_w) <= 1e-8) {
      rep.winding = w;
      break;
    }
    prev_w = max_step < M_PI / 2.0 ? w : std::numeric_limits<double>::quiet_NaN();
  }
  rep.index = cfg.index_sign * std::lround(rep.winding);
  rep.residual = std::abs(rep.winding - std::lround(rep.winding));
  return rep;
}

// ---------------------------------------------------------------------------
// Near-kernel counting oracle.

struct KernelReport {
  int k_plus = 0, k_minus = 0;
  bool conclusive = true;
  double gap = std::numeric_limits<double>::infinity();
  double sigma_max = 0.0;
  std::vector<double> tiny;  // singular values under the threshold
  int spurious = 0;          // tiny values whose vectors hug the grid edge
};

// Counts gapped near-zero singular values and classifies each by where its
// singular vectors live: a right vector supported away from the grid edge
// evidences a kernel mode (k+), a left vector evidences a cokernel mode (k-).
// Edge-hugging modes are discretization artifacts and count for neither.
inline KernelReport fredholm_kernel_probe(const OperatorMatrix& A, double threshold = 0.0) {
  const Config& cfg = global_config();
  if (threshold <= 0.0) threshold = cfg.kernel_threshold;
  long D = A.A.rows();
  if (D < 64) throw std::invalid_argument("fredholm_kernel_probe: matrix size >= 64 required");

  SingularTriples st = singular_triples_jw(A.A);
  KernelReport rep;
  rep.sigma_max = st.sigma[0];
  double cut = threshold * rep.sigma_max;
  long first_tiny = D;
  for (long i = 0; i < D; ++i)
    if (st.sigma[i] < cut) {
      first_tiny = i;
      break;
    }
  if (first_tiny == D) return rep;  // (0,0), conclusive

  double largest_tiny = st.sigma[first_tiny];
  double smallest_big = first_tiny > 0 ? st.sigma[first_tiny - 1] : rep.sigma_max;
  rep.gap = largest_tiny > 0 ? smallest_big / largest_tiny
                             : std::numeric_limits<double>::infinity();
  if (rep.gap < cfg.kernel_gap) {
    rep.conclusive = false;
    return rep;
  }

  const TGrid& g = *A.grid;
  auto edge_mass = [&](const Eigen::VectorXcd& vec) {
    double edge = 0.0, tot = 0.0;
    for (long j = 0; j < g.total(); ++j) {
      Eigen::VectorXd t = g.t_node(j);
      bool is_edge = false;
      for (int a = 0; a < g.n; ++a)
        if (std::abs(t[a]) >= 0.8 * g.T) is_edge = true;
      for (int c2 = 0; c2 < A.nu; ++c2) {
        double m2 = std::norm(vec[j * A.nu + c2]);
        tot += m2;
        if (is_edge) edge += m2;
      }
    }
    return tot > 0 ? edge / tot : 1.0;
  };

  for (long i = first_tiny; i < D; ++i) {
    rep.tiny.push_back(st.sigma[i]);
    bool interior_v = edge_mass(st.right.col(i)) <= cfg.kernel_interior_mass;
    bool interior_u = edge_mass(st.left.col(i)) <= cfg.kernel_interior_mass;
    if (interior_v) rep.k_plus++;
    if (interior_u) rep.k_minus++;
    if (!interior_v && !interior_u) rep.spurious++;
  }
  return rep;
}

}  // namespace psido
