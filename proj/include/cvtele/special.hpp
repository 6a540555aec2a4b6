#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvtele/error.hpp"

namespace cvtele {

// e^{-z} I0(z) for z ≥ 0.  The standard library's I0 is used while it cannot
// overflow; above that the Hankel asymptotic series takes over (its terms are
// still decreasing at z = 500 well past the precision of a double).
inline double scaled_bessel_i0(double z) {
  if (z < 0.0) z = -z;
  if (z <= 500.0) return std::exp(-z) * std::cyl_bessel_i(0.0, z);
  const double inv8z = 1.0 / (8.0 * z);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    const double m = 2.0 * k - 1.0;
    term *= m * m * inv8z / k;
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

inline constexpr double kHumbertOverflowGuard = 700.0;

// Humbert's confluent series
//   Φ₃(1, 1; x, y) = Σ_{m,n ≥ 0} x^m y^n / (n! (m+n)!),   x, y ≥ 0,
// summed by anti-diagonals M = m + n.  With t_M = y^M/(M!)² the diagonal sums
// obey A_{M+1} = x A_M/(M+1) + t_{M+1}.  Beyond diagonal M the ratio of
// successive diagonals is bounded by q = (x + y/(M+1))/(M+1), so once q < 1
// the remainder is at most A_M q/(1-q).
inline double humbert_phi3(double x, double y, double rel_tol = 1e-12) {
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("humbert_phi3: arguments must be non-negative");
  if (x + y > kHumbertOverflowGuard) {
    throw ConvergenceError("humbert_phi3: arguments beyond the overflow guard", 0.0);
  }
  double diag = 1.0;   // A_M
  double corner = 1.0; // t_M
  double sum = 1.0;
  for (int m = 0; m < 100000; ++m) {
    const double next = static_cast<double>(m + 1);
    corner *= y / (next * next);
    diag = x * diag / next + corner;
    sum += diag;
    const double q = (x + y / (next + 1.0)) / (next + 1.0);
    if (q < 1.0 && diag * q / (1.0 - q) <= rel_tol * sum) return sum;
  }
  throw ConvergenceError("humbert_phi3: series did not converge", sum);
}

}  // namespace cvtele
