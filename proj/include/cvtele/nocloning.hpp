#pragma once

// Entangling-cloner model and the no-cloning threshold F_nc of a codebook.
//
// A Gaussian cloner with amplification A delivers, for a coherent input α,
//   F(α, A) = 2/(1+A) · exp(-κ(A) |α|²),   κ(A) = 2(1 - √(A/2))² / (1+A).
// F_nc is the codebook average of F maximized over A ≥ 1.

#include <cmath>
#include <complex>
#include <numbers>

#include "cvtele/codebook.hpp"
#include "cvtele/error.hpp"
#include "cvtele/optimize.hpp"

namespace cvtele {

struct ClonerOptions {
  double a_max = 50.0;
  std::size_t scan_points = 200;
  double a_tol = 1e-8;
};

struct ClonerResult {
  double f_nc = 0.0;
  double a_opt = 1.0;
  Codebook codebook;
  bool multimodal = false;
};

inline double cloner_exponent(double amplification) {
  const double d = 1.0 - std::sqrt(amplification / 2.0);
  return 2.0 * d * d / (1.0 + amplification);
}

inline double cloner_fidelity(std::complex<double> alpha, double amplification) {
  if (!(amplification >= 1.0)) throw PhysicsError("cloner amplification must be >= 1");
  return 2.0 / (1.0 + amplification) * std::exp(-cloner_exponent(amplification) * std::norm(alpha));
}

// Codebook-averaged cloner fidelity at fixed A.  The integrand is
// exponential in |α|², so the average is evaluated in closed form.
inline double average_cloner_fidelity(const Codebook& cb, double amplification) {
  if (!(amplification >= 1.0)) throw PhysicsError("cloner amplification must be >= 1");
  return 2.0 / (1.0 + amplification) * average_exponential(cb, cloner_exponent(amplification));
}

inline constexpr double kGaussianThresholdBreakpoint = 0.5 + 1.0 / std::numbers::sqrt2;

// Optimum over A ≥ 1 for the Gaussian codebook.  Below the breakpoint the
// unconstrained optimum lies at A < 1 and the constraint pins A = 1.
inline double gaussian_threshold_closed_form(double sigma2) {
  if (!(sigma2 > 0.0)) throw PhysicsError("σ² must be positive");
  if (sigma2 <= kGaussianThresholdBreakpoint) {
    return 1.0 / (1.0 + sigma2 * (3.0 - 2.0 * std::numbers::sqrt2));
  }
  return 2.0 * (1.0 + 2.0 * sigma2) / (1.0 + 6.0 * sigma2);
}

inline double gaussian_optimal_amplification(double sigma2) {
  if (sigma2 <= kGaussianThresholdBreakpoint) return 1.0;
  const double s = 2.0 * sigma2 / (1.0 + 2.0 * sigma2);
  return 2.0 * s * s;
}

inline ClonerResult threshold(const Codebook& cb, const ClonerOptions& opt = {}) {
  if (!(opt.a_max > 1.0)) throw UsageError("cloner search needs a_max > 1");
  const auto best = opt::scan_then_refine([&](double a) { return average_cloner_fidelity(cb, a); }, 1.0, opt.a_max,
                                          opt.scan_points, opt.a_tol);
  return {best.value, best.x, cb, best.multimodal};
}

}  // namespace cvtele
