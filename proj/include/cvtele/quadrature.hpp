#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>

#include "cvtele/error.hpp"

namespace cvtele::quad {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], found by
// Newton iteration on P_n from the Chebyshev initial guesses.
template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= N; ++k) {
          const double kk = static_cast<double>(k);
          const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
        dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline constexpr std::size_t kOrder = 20;

inline const GaussLegendre<kOrder>& rule() {
  static const GaussLegendre<kOrder> r;
  return r;
}

// Composite rule with `panels` equal panels on [a, b].
template <class F>
double integrate_panels(F&& f, double a, double b, int panels) {
  if (!(b > a)) return 0.0;
  const auto& gl = rule();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (std::size_t i = 0; i < kOrder; ++i) s += gl.weights[i] * f(mid + 0.5 * h * gl.nodes[i]);
    total += 0.5 * h * s;
  }
  return total;
}

struct AdaptiveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int start_panels = 2;
  int max_panels = 1 << 14;
};

// Doubles the panel count until two successive estimates agree to
// max(rel_tol·|I|, abs_tol).
template <class F>
double integrate(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  int panels = opt.start_panels;
  double prev = integrate_panels(f, a, b, panels);
  while (panels < opt.max_panels) {
    panels *= 2;
    const double next = integrate_panels(f, a, b, panels);
    if (std::abs(next - prev) <= std::max(opt.rel_tol * std::abs(next), opt.abs_tol)) return next;
    prev = next;
  }
  throw ConvergenceError("quadrature did not converge on [" + std::to_string(a) + ", " + std::to_string(b) + "]",
                         prev);
}

// Same, over consecutive intervals [x0,x1], [x1,x2], ... so that kinks at the
// breakpoints do not spoil convergence.
template <class F>
double integrate(F&& f, std::span<const double> breakpoints, const AdaptiveOptions& opt = {}) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    total += integrate(f, breakpoints[i], breakpoints[i + 1], opt);
  }
  return total;
}

}  // namespace cvtele::quad
