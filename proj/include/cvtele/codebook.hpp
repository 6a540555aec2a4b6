#pragma once

// Input ensembles of coherent-state displacements α.
//
//   Gaussian(σ²):            P(α) = exp(-|α|²/2σ²) / (2πσ²)
//   TruncatedUniform(N):     P(α) = Θ(N - |α|²) / (πN)
//   TruncatedGaussian(σ², N): P(α) = exp(-|α|²/2σ²) Θ(N - |α|²) / (2πσ² (1 - e^{-N/2σ²}))
//
// All three are isotropic, so most work is done in the radial variable
// x = |α|², in which d²α = π dx and the Gaussians become exponentials.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cvtele/error.hpp"
#include "cvtele/quadrature.hpp"

namespace cvtele {

struct GaussianCodebook {
  double sigma2 = 1.0;
};

struct TruncatedUniformCodebook {
  double cutoff = 1.0;  // N, photons
};

struct TruncatedGaussianCodebook {
  double sigma2 = 1.0;
  double cutoff = 1.0;
};

// e-folds of the Gaussian weight kept before the radial integration is cut.
inline constexpr double kGaussianTailEfolds = 90.0;

class Codebook {
 public:
  using Variant = std::variant<GaussianCodebook, TruncatedUniformCodebook, TruncatedGaussianCodebook>;

  Codebook() : Codebook(GaussianCodebook{}) {}
  Codebook(GaussianCodebook g) : v_(g) { validate(); }
  Codebook(TruncatedUniformCodebook u) : v_(u) { validate(); }
  Codebook(TruncatedGaussianCodebook t) : v_(t) { validate(); }

  static Codebook gaussian(double sigma2) { return Codebook(GaussianCodebook{sigma2}); }
  static Codebook truncated_uniform(double cutoff) { return Codebook(TruncatedUniformCodebook{cutoff}); }
  static Codebook truncated_gaussian(double sigma2, double cutoff) {
    return Codebook(TruncatedGaussianCodebook{sigma2, cutoff});
  }

  // "gaussian:sigma2=1", "truncuniform:N=10", "truncgaussian:sigma2=1,N=10"
  static Codebook parse(std::string_view spec);

  const Variant& variant() const noexcept { return v_; }

  bool is_gaussian() const noexcept { return std::holds_alternative<GaussianCodebook>(v_); }

  // σ² where defined (infinite for the uniform disk).
  double sigma2() const {
    return std::visit(
        [](const auto& c) -> double {
          if constexpr (requires { c.sigma2; }) return c.sigma2;
          return std::numeric_limits<double>::infinity();
        },
        v_);
  }

  // N where defined (infinite for the untruncated Gaussian).
  double cutoff() const {
    return std::visit(
        [](const auto& c) -> double {
          if constexpr (requires { c.cutoff; }) return c.cutoff;
          return std::numeric_limits<double>::infinity();
        },
        v_);
  }

  // Upper end of the radial support in x = |α|².
  double support_end() const {
    return std::visit(
        [](const auto& c) -> double {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, GaussianCodebook>) return 2.0 * c.sigma2 * kGaussianTailEfolds;
          else if constexpr (std::is_same_v<T, TruncatedUniformCodebook>) return c.cutoff;
          else return std::min(c.cutoff, 2.0 * c.sigma2 * kGaussianTailEfolds);
        },
        v_);
  }

  std::string to_string() const;

 private:
  void validate() const {
    std::visit(
        [](const auto& c) {
          if constexpr (requires { c.sigma2; }) {
            if (!(c.sigma2 > 0.0) || !std::isfinite(c.sigma2)) throw PhysicsError("codebook σ² must be positive");
          }
          if constexpr (requires { c.cutoff; }) {
            if (!(c.cutoff > 0.0) || !std::isfinite(c.cutoff)) throw PhysicsError("codebook cutoff N must be positive");
          }
        },
        v_);
  }

  Variant v_;
};

// 1 - e^{-N/2σ²}, computed without cancellation for small N/σ².
inline double truncation_mass(double sigma2, double cutoff) { return -std::expm1(-cutoff / (2.0 * sigma2)); }

// Density in x = |α|² (integrates to one over x): π P(α).
inline double radial_density(const Codebook& cb, double x) {
  if (x < 0.0) return 0.0;
  return std::visit(
      [x](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GaussianCodebook>) {
          return std::exp(-x / (2.0 * c.sigma2)) / (2.0 * c.sigma2);
        } else if constexpr (std::is_same_v<T, TruncatedUniformCodebook>) {
          return x <= c.cutoff ? 1.0 / c.cutoff : 0.0;
        } else {
          if (x > c.cutoff) return 0.0;
          return std::exp(-x / (2.0 * c.sigma2)) / (2.0 * c.sigma2 * truncation_mass(c.sigma2, c.cutoff));
        }
      },
      cb.variant());
}

inline double density(const Codebook& cb, std::complex<double> alpha) {
  return radial_density(cb, std::norm(alpha)) / std::numbers::pi;
}

struct AverageOptions {
  double rel_tol = 1e-8;
  int max_panels = 1 << 14;
};

// ∫ f(|α|²) P(α) d²α for isotropic f, by composite Gauss-Legendre in x = |α|²
// with the panel count doubled until the relative change drops below rel_tol.
template <class F>
double average_radial(const Codebook& cb, F&& f, const AverageOptions& opt = {}) {
  auto integrand = [&](double x) { return f(x) * radial_density(cb, x); };
  return quad::integrate(integrand, 0.0, cb.support_end(),
                         {.rel_tol = opt.rel_tol, .abs_tol = 1e-300, .start_panels = 4, .max_panels = opt.max_panels});
}

// ∫ f(α) P(α) d²α for general f: radial Gauss-Legendre in x times a
// trapezoid rule in the angle (spectrally accurate for periodic integrands),
// both refined until the relative change drops below rel_tol.
template <class F>
double average(const Codebook& cb, F&& f, const AverageOptions& opt = {}) {
  auto angular_mean = [&](double x, int points) {
    const double a = std::sqrt(x);
    double s = 0.0;
    for (int k = 0; k < points; ++k) {
      const double th = 2.0 * std::numbers::pi * k / points;
      s += f(std::polar(a, th));
    }
    return s / points;
  };
  int points = 16;
  double prev = average_radial(cb, [&](double x) { return angular_mean(x, points); }, opt);
  for (; points <= 4096;) {
    points *= 2;
    const double next = average_radial(cb, [&](double x) { return angular_mean(x, points); }, opt);
    if (std::abs(next - prev) <= opt.rel_tol * std::abs(next) + 1e-300) return next;
    prev = next;
  }
  throw ConvergenceError("codebook average: angular refinement did not converge", prev);
}

// ∫ e^{-κ|α|²} P(α) d²α in closed form.  The integrand is exp-linear in x on
// the support, so each variant reduces to an elementary integral.
inline double average_exponential(const Codebook& cb, double kappa) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("average_exponential: κ must be >= 0");
  // (1 - e^{-λN}) / λ, continuous at λ = 0
  auto truncated_laplace = [](double lambda, double n) {
    return lambda * n < 1e-300 ? n : -std::expm1(-lambda * n) / lambda;
  };
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GaussianCodebook>) {
          return 1.0 / (1.0 + 2.0 * c.sigma2 * kappa);
        } else if constexpr (std::is_same_v<T, TruncatedUniformCodebook>) {
          return truncated_laplace(kappa, c.cutoff) / c.cutoff;
        } else {
          const double lambda = kappa + 1.0 / (2.0 * c.sigma2);
          return truncated_laplace(lambda, c.cutoff) / (2.0 * c.sigma2 * truncation_mass(c.sigma2, c.cutoff));
        }
      },
      cb.variant());
}

// E|α|²
inline double mean_photon_number(const Codebook& cb) {
  return average_radial(cb, [](double x) { return x; });
}

// Deterministic sampler.  Uses its own uniform-deviate and Box-Muller code so
// that a seed yields the same sequence on every standard library.
class CodebookSampler {
 public:
  CodebookSampler(Codebook cb, std::uint64_t seed) : cb_(std::move(cb)), rng_(seed) {}

  std::complex<double> operator()() {
    return std::visit([this](const auto& c) { return draw(c); }, cb_.variant());
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }

  std::complex<double> gaussian_pair(double sigma2) {
    const double radius = std::sqrt(-2.0 * sigma2 * std::log(uniform_open()));
    return std::polar(radius, 2.0 * std::numbers::pi * uniform());
  }

  std::complex<double> draw(const GaussianCodebook& c) { return gaussian_pair(c.sigma2); }

  std::complex<double> draw(const TruncatedUniformCodebook& c) {
    // |α|² is uniform on [0, N]
    return std::polar(std::sqrt(c.cutoff * uniform()), 2.0 * std::numbers::pi * uniform());
  }

  std::complex<double> draw(const TruncatedGaussianCodebook& c) {
    if (c.cutoff / c.sigma2 >= 0.1) {
      for (;;) {
        const auto a = gaussian_pair(c.sigma2);
        if (std::norm(a) <= c.cutoff) return a;
      }
    }
    // Inverse CDF of the truncated exponential in x = |α|².
    const double x = -2.0 * c.sigma2 * std::log1p(-uniform() * truncation_mass(c.sigma2, c.cutoff));
    return std::polar(std::sqrt(std::min(x, c.cutoff)), 2.0 * std::numbers::pi * uniform());
  }

  Codebook cb_;
  std::mt19937_64 rng_;
};

namespace detail {

inline double parse_positive(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("codebook: cannot parse value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

}  // namespace detail

inline Codebook Codebook::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind(spec.substr(0, colon));
  std::map<std::string, double, std::less<>> args;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw UsageError("codebook: expected key=value in '" + std::string(spec) + "'");
      const std::string key(item.substr(0, eq));
      args[key] = detail::parse_positive(key, item.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto take = [&](const char* key) {
    auto it = args.find(key);
    if (it == args.end()) throw UsageError("codebook '" + kind + "' needs " + key);
    const double v = it->second;
    args.erase(it);
    return v;
  };
  Codebook cb;
  if (kind == "gaussian") {
    cb = gaussian(take("sigma2"));
  } else if (kind == "truncuniform") {
    cb = truncated_uniform(take("N"));
  } else if (kind == "truncgaussian") {
    const double s2 = take("sigma2");
    cb = truncated_gaussian(s2, take("N"));
  } else {
    throw UsageError("unknown codebook kind '" + kind + "' (expected gaussian, truncuniform, truncgaussian)");
  }
  if (!args.empty()) throw UsageError("codebook: unexpected parameter '" + args.begin()->first + "'");
  return cb;
}

inline std::string Codebook::to_string() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GaussianCodebook>) os << "gaussian:sigma2=" << c.sigma2;
        else if constexpr (std::is_same_v<T, TruncatedUniformCodebook>) os << "truncuniform:N=" << c.cutoff;
        else os << "truncgaussian:sigma2=" << c.sigma2 << ",N=" << c.cutoff;
      },
      v_);
  return os.str();
}

}  // namespace cvtele
