#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cvtele/error.hpp"

namespace cvtele::opt {

struct Maximum {
  double x = 0.0;
  double value = 0.0;
  bool multimodal = false;  // the coarse scan saw more than one local maximum
};

// Golden-section search for the maximum of a unimodal f on [a, b], stopping
// once the bracket is narrower than x_tol.
template <class F>
Maximum golden_section_maximize(F&& f, double a, double b, double x_tol, int max_iter = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if ((b - a) > x_tol) throw ConvergenceError("golden-section search did not converge", 0.5 * (a + b));
  // The bracket endpoints may beat the interior probes when the maximum sits
  // on the boundary of the original interval.
  Maximum best{0.5 * (a + b), f(0.5 * (a + b)), false};
  for (double x : {a, b}) {
    const double v = f(x);
    if (v > best.value) best = {x, v, false};
  }
  return best;
}

// Evaluates f on `points` log-spaced samples in [lo, hi], then refines the
// best sample by golden-section search on its neighbouring bracket.
template <class F>
Maximum scan_then_refine(F&& f, double lo, double hi, std::size_t points, double x_tol) {
  std::vector<double> xs(points);
  std::vector<double> fs(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  std::size_t best = 0;
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = (i + 1 == points) ? hi : lo * std::exp(step * static_cast<double>(i));
    fs[i] = f(xs[i]);
    if (fs[i] > fs[best]) best = i;
  }
  int local_maxima = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const bool left = (i == 0) || fs[i] > fs[i - 1];
    const bool right = (i + 1 == points) || fs[i] >= fs[i + 1];
    if (left && right) ++local_maxima;
  }
  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[best + 1 == points ? best : best + 1];
  Maximum m = golden_section_maximize(f, a, b, x_tol);
  if (fs[best] > m.value) m = {xs[best], fs[best], false};
  m.multimodal = local_maxima > 1;
  return m;
}

// Bisection for a sign change of f on [a, b].  f(a) and f(b) must differ in
// sign.
template <class F>
double bisect(F&& f, double a, double b, double x_tol, int max_iter = 200) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw ConvergenceError("bisect: no sign change on [" + std::to_string(a) + ", " + std::to_string(b) +
                               "] (f(a)=" + std::to_string(fa) + ", f(b)=" + std::to_string(fb) + ")",
                           0.5 * (a + b));
  }
  for (int i = 0; i < max_iter; ++i) {
    const double m = 0.5 * (a + b);
    if (b - a <= x_tol) return m;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  throw ConvergenceError("bisect: iteration limit reached", 0.5 * (a + b));
}

}  // namespace cvtele::opt
