#pragma once

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

namespace psido {

// Convention ledger version stamped into every numeric report.
// "C1" names the transform convention fixed in CONVENTIONS.md: forward kernel
// e^{-2 pi i t(x).xi} against Haar measure, inverse with e^{+2 pi i t(x).xi},
// no frequency rescale in the quantization, derivative symbol 2 pi i xi.
inline constexpr const char* kConvention = "C1";
inline constexpr const char* kLedgerVersion = "C1-1.0.0";

// Numerical knobs with pinned defaults. Every tolerance a probe or check uses
// lives here so the CLI can override by name (--tol-override KEY=VAL).
struct Config {
  // grid / transform
  double edge_decay_rel = 1e-10;   // boundary-sample magnitude vs max, warning threshold
  double boundary_flag_eps = 1e-8; // |coord| within this of 1 counts as near-boundary

  // finite differences on symbol t-forms (base step; higher orders widen it)
  double fd_step = 1e-4;

  // symbol class estimation
  double class_growth_ratio = 1.05; // successive-box sup ratio for "bounded"
  double elliptic_tol = 1e-8;       // smallest admissible ellipticity constant

  // asymptotic calculus
  double cond_guard = 1e12;         // matrix-symbol inversion condition cap
  double residual_floor = 1e-7;     // packet residuals below this => -inf sentinel slope

  // spectral probes
  double cv_drift_p2 = 0.10;        // op-norm drift across grids, p = 2
  double cv_drift_pother = 0.15;    // empirical-ratio drift, p != 2
  double garding_drift = 0.10;
  double kernel_threshold = 1e-8;   // near-zero singular value cut, relative to sigma_max
  double kernel_gap = 10.0;         // required spectral gap factor
  double kernel_interior_mass = 0.01; // max edge-mass for an "interior" singular vector
  double compact_floor = 1e-8;      // sigma_r/sigma_max below this counts as vanished
  double winding_residual = 1e-6;
  double winding_invertibility = 1e-6;
  int winding_max_samples = 1 << 22;

  // Fredholm index sign, calibrated once against the oscillator null-space
  // oracle with counterclockwise contours in the (t, xi) chart.
  int index_sign = +1;

  // sobolev
  double bessel_order_cap = 16.0;   // |r| beyond this risks overflow at grid Nyquist
  double norm_equiv_drift = 0.10;   // ratio-range drift across grids

  double& by_name(const std::string& key) {
    static const std::map<std::string, double Config::*> lut = {
        {"edge_decay_rel", &Config::edge_decay_rel},
        {"boundary_flag_eps", &Config::boundary_flag_eps},
        {"fd_step", &Config::fd_step},
        {"class_growth_ratio", &Config::class_growth_ratio},
        {"elliptic_tol", &Config::elliptic_tol},
        {"cond_guard", &Config::cond_guard},
        {"residual_floor", &Config::residual_floor},
        {"cv_drift_p2", &Config::cv_drift_p2},
        {"cv_drift_pother", &Config::cv_drift_pother},
        {"garding_drift", &Config::garding_drift},
        {"kernel_threshold", &Config::kernel_threshold},
        {"kernel_gap", &Config::kernel_gap},
        {"kernel_interior_mass", &Config::kernel_interior_mass},
        {"compact_floor", &Config::compact_floor},
        {"winding_residual", &Config::winding_residual},
        {"winding_invertibility", &Config::winding_invertibility},
        {"bessel_order_cap", &Config::bessel_order_cap},
        {"norm_equiv_drift", &Config::norm_equiv_drift},
    };
    auto it = lut.find(key);
    if (it == lut.end()) throw std::invalid_argument("unknown tolerance key: " + key);
    return this->*(it->second);
  }
};

inline Config& global_config() {
  static Config cfg;
  return cfg;
}

}  // namespace psido
