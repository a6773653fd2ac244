#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "psido/config.hpp"
#include "psido/multipliers.hpp"
#include "psido/symbol.hpp"
#include "psido/transform.hpp"

namespace psido {

// ---------------------------------------------------------------------------
// Smoothness-scale descriptors and Bessel potentials.

struct SobolevSpec {
  double s = 0.0;
  double p = 2.0;
  std::string flavor = "bessel";  // "bessel" | "integer-W"

  void validate() const {
    if (!(p > 1.0) || !std::isfinite(p))
      throw std::invalid_argument("SobolevSpec: p must lie in (1, inf)");
    if (flavor != "bessel" && flavor != "integer-W")
      throw std::invalid_argument("SobolevSpec: flavor must be bessel | integer-W");
    if (flavor == "integer-W" && (s < 0.0 || s != std::floor(s)))
      throw std::invalid_argument("SobolevSpec: integer-W order must be a nonnegative integer");
  }
};

// Frequency weight of (1 - Laplacian)^{r/2}; the invariant Laplacian is
// -sum_a D_a^2, so each D_a contributes (2 pi xi_a)^2.
inline double bessel_weight(const Eigen::VectorXd& xi, double r) {
  return std::pow(1.0 + 4.0 * M_PI * M_PI * xi.squaredNorm(), 0.5 * r);
}

inline GFunction bessel_potential(const GFunction& f, double r) {
  if (std::abs(r) > global_config().bessel_order_cap)
    throw std::invalid_argument("bessel_potential: |r| beyond the overflow cap");
  return conv_op([r](const Eigen::VectorXd& xi) { return cd(bessel_weight(xi, r), 0.0); }, f);
}

// ---------------------------------------------------------------------------
// Norms.

namespace detail {

inline double hs_norm_with_coef(const GFunction& f, double s, double coef) {
  Spectrum sp = fourier_G(f);
  const TGrid& g = *f.grid;
  double acc = 0.0;
  for (long k = 0; k < g.total(); ++k)
    acc += std::pow(1.0 + coef * g.xi_node(k).squaredNorm(), s) * sp.values.row(k).squaredNorm();
  return std::sqrt(acc * g.cell_xi());
}

}  // namespace detail

// Fractional-order norm with the plain weight (1 + |xi|^2)^s.
inline double hs_norm(const GFunction& f, double s) {
  return detail::hs_norm_with_coef(f, s, 1.0);
}

// Same norm with the weight (1 + 4 pi^2 |xi|^2)^s of (1 - Laplacian)^{s/2}.
// Equivalent to hs_norm for every fixed s; this variant makes the lifting
// identity hs_norm_op(bessel_potential(f, r), s) = hs_norm_op(f, s + r) exact.
inline double hs_norm_op(const GFunction& f, double s) {
  return detail::hs_norm_with_coef(f, s, 4.0 * M_PI * M_PI);
}

// Integer-order norm: Haar-weighted p-norms of the invariant derivatives,
//   ( sum_{|alpha| <= m} || D^alpha f ||_p^p )^{1/p}.
inline double wmp_norm(const GFunction& f, int m, double p) {
  if (m < 0 || m > 4) throw std::invalid_argument("wmp_norm: m must lie in 0..4");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("wmp_norm: p must lie in (1, inf)");
  double acc = 0.0;
  for (int order = 0; order <= m; ++order)
    for (const MIdx& alpha : multi_indices_of_order(f.grid->n, order))
      acc += std::pow(lp_norm(dfield(f, alpha), p), p);
  return std::pow(acc, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Norm-equivalence probe (p = 2).

struct NormEquivReport {
  int m = 0;
  std::vector<double> ratio_min, ratio_max;  // per grid, skipped members excluded
  int used = 0, skipped = 0;                 // on the last grid
  bool bracket_ok = false;
  bool stable = false;
  bool pass = false;
  std::string note;
};

// Default probe family: centered Gaussians, widths swept across [0.5, 4].
inline std::vector<GFunction> gaussian_family(GridPtr g, int count = 20) {
  std::vector<GFunction> fam;
  for (int i = 0; i < count; ++i) {
    double w = 0.5 + 3.5 * (count > 1 ? static_cast<double>(i) / (count - 1) : 0.0);
    fam.push_back(sample_t(g, [w](const Eigen::VectorXd& t) {
      return cd(std::exp(-t.squaredNorm() / (2.0 * w * w)), 0.0);
    }));
  }
  return fam;
}

// Ratio of the operator-weighted H^m norm to the W^m_2 norm over a family,
// rebuilt on each grid of the schedule. Verdict: every per-grid ratio range
// inside [1/10, 10] and range endpoints stable between consecutive grids.
// Zero family members are skipped and counted in the note.
inline NormEquivReport norm_equivalence_probe(
    const std::function<std::vector<GFunction>(GridPtr)>& family_on,
    const std::vector<GridPtr>& grids, int m) {
  if (grids.empty()) throw std::invalid_argument("norm_equivalence_probe: empty grid schedule");
  if (m < 0 || m > 4) throw std::invalid_argument("norm_equivalence_probe: m must lie in 0..4");
  NormEquivReport rep;
  rep.m = m;
  for (const GridPtr& g : grids) {
    std::vector<GFunction> fam = family_on(g);
    if (fam.size() < 20)
      throw std::invalid_argument("norm_equivalence_probe: family must have >= 20 members");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    int used = 0, skipped = 0;
    for (const GFunction& f : fam) {
      if (max_abs(f.values) == 0.0) {
        ++skipped;
        continue;
      }
      double w = wmp_norm(f, m, 2.0);
      double h = hs_norm_op(f, m);
      double r = h / w;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ++used;
    }
    if (used == 0) throw std::invalid_argument("norm_equivalence_probe: all members degenerate");
    rep.ratio_min.push_back(lo);
    rep.ratio_max.push_back(hi);
    rep.used = used;
    rep.skipped = skipped;
  }
  rep.bracket_ok = true;
  for (size_t i = 0; i < rep.ratio_min.size(); ++i)
    if (rep.ratio_min[i] < 0.1 || rep.ratio_max[i] > 10.0) rep.bracket_ok = false;
  rep.stable = true;
  const double drift = global_config().norm_equiv_drift;
  for (size_t i = 0; i + 1 < rep.ratio_min.size(); ++i) {
    if (std::abs(rep.ratio_min[i + 1] - rep.ratio_min[i]) > drift * rep.ratio_min[i])
      rep.stable = false;
    if (std::abs(rep.ratio_max[i + 1] - rep.ratio_max[i]) > drift * rep.ratio_max[i])
      rep.stable = false;
  }
  rep.pass = rep.bracket_ok && rep.stable;
  std::ostringstream os;
  os << "ratio bracket [0.1, 10] " << (rep.bracket_ok ? "holds" : "violated");
  if (rep.skipped > 0) os << "; " << rep.skipped << " zero member(s) skipped";
  rep.note = os.str();
  return rep;
}

}  // namespace psido
