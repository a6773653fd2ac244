#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "psido/config.hpp"

namespace psido {

// The group carrier is the open cube (-1,1)^n with the componentwise addition
//
//     (a + b) / (1 + a b)
//
// conjugate to (R^n, +) under the chart t(x) = (1/2) ln((1-x)/(1+x)) with
// inverse x(t) = -tanh(t).  Everything downstream leans on that chart: Haar
// measure pulls back to Lebesgue dt, and the invariant derivative
// D_x = -(1-x^2) d/dx pulls back to d/dt.

template <typename Scalar>
constexpr Scalar gop_add_scalar(Scalar a, Scalar b) {
  return (a + b) / (Scalar(1) + a * b);
}

template <typename Scalar>
Scalar map_t_scalar(Scalar x) {
  // 0.5*(ln(1-x) - ln(1+x)); log1p keeps full precision near 0.
  return Scalar(0.5) * (std::log1p(-x) - std::log1p(x));
}

template <typename Scalar>
Scalar map_x_scalar(Scalar t) {
  return -std::tanh(t);
}

// log(cosh(t)) without overflow; |ln(1-x^2)| = 2 log cosh t(x).
template <typename Scalar>
Scalar log_cosh(Scalar t) {
  Scalar a = std::abs(t);
  return a + std::log1p(std::exp(Scalar(-2) * a)) - Scalar(M_LN2);
}

// A point of the group. Coordinates are validated on construction: any
// |c| >= 1 is outside the carrier. Points within boundary_flag_eps of the
// boundary are accepted but flagged; callers doing arithmetic that close to
// the boundary should work in the t chart instead.
class GPoint {
 public:
  explicit GPoint(Eigen::VectorXd c) : c_(std::move(c)) {
    for (Eigen::Index i = 0; i < c_.size(); ++i) {
      if (!(std::abs(c_[i]) < 1.0))
        throw std::domain_error("GPoint coordinate outside (-1,1)");
    }
  }
  static GPoint scalar(double v) { return GPoint(Eigen::VectorXd::Constant(1, v)); }

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }
  const Eigen::VectorXd& coords() const { return c_; }

  bool near_boundary(double eps = global_config().boundary_flag_eps) const {
    return (1.0 - c_.array().abs()).minCoeff() < eps;
  }

 private:
  Eigen::VectorXd c_;
};

// A point of the chart copy of R^n. No domain restriction.
class RPoint {
 public:
  explicit RPoint(Eigen::VectorXd c) : c_(std::move(c)) {}
  static RPoint scalar(double v) { return RPoint(Eigen::VectorXd::Constant(1, v)); }

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }
  const Eigen::VectorXd& coords() const { return c_; }

 private:
  Eigen::VectorXd c_;
};

inline void require_same_dim(const GPoint& a, const GPoint& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("group operands have different dimensions");
}

inline GPoint gop_identity(int n) { return GPoint(Eigen::VectorXd::Zero(n)); }

// Componentwise (a+b)/(1+ab). Inputs flagged near opposite ends of the same
// axis can round the quotient onto the boundary in double precision; that is
// reported, never silently clamped.
inline GPoint gop_add(const GPoint& a, const GPoint& b) {
  require_same_dim(a, b);
  Eigen::VectorXd r(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    r[i] = gop_add_scalar(a[i], b[i]);
    if (!(std::abs(r[i]) < 1.0))
      throw std::domain_error("group sum reached the boundary at unit roundoff");
  }
  return GPoint(std::move(r));
}

inline GPoint gop_inverse(const GPoint& a) { return GPoint(-a.coords()); }

inline RPoint map_t(const GPoint& x) {
  Eigen::VectorXd t(x.dim());
  for (int i = 0; i < x.dim(); ++i) t[i] = map_t_scalar(x[i]);
  return RPoint(std::move(t));
}

inline GPoint map_x(const RPoint& t) {
  Eigen::VectorXd x(t.dim());
  for (int i = 0; i < t.dim(); ++i) x[i] = map_x_scalar(t[i]);
  return GPoint(std::move(x));
}

// Haar density against Lebesgue dx: prod_j 1/(1-x_j^2).  Overflows to +inf
// when 1-x^2 underflows; the infinity is the flag.
inline double haar_weight(const GPoint& x) {
  double w = 1.0;
  for (int i = 0; i < x.dim(); ++i) w *= 1.0 / ((1.0 - x[i]) * (1.0 + x[i]));
  return w;
}

// Invariant metric: Euclidean distance in the t chart.
inline double distance_G(const GPoint& a, const GPoint& b) {
  require_same_dim(a, b);
  return (map_t(a).coords() - map_t(b).coords()).norm();
}

}  // namespace psido
