#pragma once

// Information-theoretic security of the feedforward channel.
//
// Bob's output given input α is an isotropic Gaussian centred on √k α with
// per-quadrature variance v.  For any isotropic codebook the information it
// carries is
//   C(cb, k, v) = h(P_out) - ln(2πe v),
// the differential entropy of the output ensemble minus that of the
// conditional density.  The same functional with k = 1 and the thermal
// variance seen by an eavesdropper gives her Holevo quantity.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cvtele/codebook.hpp"
#include "cvtele/error.hpp"
#include "cvtele/gaussian_state.hpp"
#include "cvtele/optimize.hpp"
#include "cvtele/quadrature.hpp"
#include "cvtele/special.hpp"
#include "cvtele/teleport.hpp"
#include "cvtele/units.hpp"

namespace cvtele {

inline double conditional_density(std::complex<double> beta, std::complex<double> alpha, double k, double v_out) {
  if (!(v_out > 0.0)) throw PhysicsError("conditional_density: v_out must be positive");
  if (!(k >= 0.0)) throw PhysicsError("conditional_density: k must be >= 0");
  return std::exp(-std::norm(beta - std::sqrt(k) * alpha) / (2.0 * v_out)) / (2.0 * std::numbers::pi * v_out);
}

inline double mutual_information_gaussian(double sigma2, double k, double v_out) {
  if (!(v_out > 0.0) || sigma2 < 0.0 || k < 0.0) throw PhysicsError("mutual information needs σ², k >= 0 and v > 0");
  return std::log1p(k * sigma2 / v_out);
}

// Variance of the thermal state Eve holds when she sees the whole feedforward
// of an infinitely amplified measurement.
inline double eve_thermal_variance(double r) { return 0.25 * (1.0 + std::cosh(2.0 * r)); }

inline double holevo_gaussian(double sigma2, double r) {
  if (!(sigma2 >= 0.0) || !(r >= 0.0)) throw PhysicsError("holevo_gaussian needs σ² >= 0 and r >= 0");
  return std::log1p(sigma2 / eve_thermal_variance(r));
}

struct InformationOptions {
  double inner_rel_tol = 1e-10;
  double outer_rel_tol = 1e-9;
  double window_sigmas = 12.0;  // half-width of the α window around β/√k, in units of √(v/k)
};

namespace detail {

inline double radius_end(const Codebook& cb) { return std::sqrt(cb.support_end()); }

}  // namespace detail

// P_out(β) = ∫ P_cond(β|α) P_in(α) d²α by direct quadrature.  The relative
// angle is integrated analytically (it produces e^{-z} I0(z)), leaving a
// radial integral over |α| restricted to the window where the conditional
// density is non-negligible.
inline double output_density(const Codebook& cb, double k, double v_out, double beta_abs,
                             const InformationOptions& opt = {}) {
  if (!(v_out > 0.0)) throw PhysicsError("output_density: v_out must be positive");
  const double b = std::abs(beta_abs);
  if (k == 0.0) return std::exp(-b * b / (2.0 * v_out)) / (2.0 * std::numbers::pi * v_out);
  const double sk = std::sqrt(k);
  const double a_end = detail::radius_end(cb);
  const double centre = b / sk;
  const double half = opt.window_sigmas * std::sqrt(v_out / k);
  const double lo = std::max(0.0, centre - half);
  const double hi = std::min(a_end, centre + half);
  if (!(hi > lo)) return 0.0;
  auto integrand = [&](double a) {
    const double gap = b - sk * a;
    return 2.0 * a * radial_density(cb, a * a) * std::exp(-gap * gap / (2.0 * v_out)) *
           scaled_bessel_i0(sk * a * b / v_out);
  };
  std::vector<double> cuts{lo};
  if (centre > lo && centre < hi) cuts.push_back(centre);
  cuts.push_back(hi);
  const quad::AdaptiveOptions q{.rel_tol = opt.inner_rel_tol, .abs_tol = 1e-300, .start_panels = 1, .max_panels = 1 << 12};
  return quad::integrate(integrand, cuts, q) / (2.0 * std::numbers::pi * v_out);
}

// Closed form of the output density for truncated codebooks (σ² = ∞ selects
// the uniform disk of radius √N):
//   P_out(β) = w/(2π v ζ) · e^{-|β|²/2v + ξ|β|²} [1 - e^{-ζN - ξ|β|²} Φ₃(1,1; ξ|β|², ξζN|β|²)]
// with ζ = 1/2σ² + k/2v, ξ = k/(4ζv²) and w the codebook's radial
// normalisation.  Falls back to output_density when the series arguments pass
// the overflow guard or the bracket loses precision to cancellation.
inline double truncated_output_density(double beta_abs, double sigma2, double cutoff, double k, double v_out) {
  if (!(v_out > 0.0) || !(cutoff > 0.0) || !(sigma2 > 0.0) || k < 0.0) {
    throw PhysicsError("truncated_output_density: parameters must be positive");
  }
  const bool uniform = std::isinf(sigma2);
  const Codebook cb = uniform ? Codebook::truncated_uniform(cutoff) : Codebook::truncated_gaussian(sigma2, cutoff);
  const double b2 = beta_abs * beta_abs;
  if (k == 0.0) return std::exp(-b2 / (2.0 * v_out)) / (2.0 * std::numbers::pi * v_out);
  const double zeta = (uniform ? 0.0 : 0.5 / sigma2) + k / (2.0 * v_out);
  const double xi = k / (4.0 * zeta * v_out * v_out);
  const double x = xi * b2;
  const double y = xi * zeta * cutoff * b2;
  if (x + y > kHumbertOverflowGuard) return output_density(cb, k, v_out, beta_abs);
  const double weight = uniform ? 1.0 / cutoff : 1.0 / (2.0 * sigma2 * truncation_mass(sigma2, cutoff));
  const double bracket = 1.0 - std::exp(-zeta * cutoff - x) * humbert_phi3(x, y);
  // Far outside the support the bracket cancels to a few digits.
  if (bracket < 1e-3) return output_density(cb, k, v_out, beta_abs);
  return weight / (2.0 * std::numbers::pi * v_out * zeta) * std::exp(-b2 / (2.0 * v_out) + x) * bracket;
}

// h(P_out) = -∫ P_out ln P_out d²β, radial in |β| on panels of width ~2√v.
inline double output_entropy(const Codebook& cb, double k, double v_out, const InformationOptions& opt = {}) {
  const double b_end = std::sqrt(k) * detail::radius_end(cb) + opt.window_sigmas * std::sqrt(v_out);
  const double width = std::max(2.0 * std::sqrt(v_out), b_end / 400.0);
  const int intervals = std::max(1, static_cast<int>(std::ceil(b_end / width)));
  auto integrand = [&](double b) {
    const double q = output_density(cb, k, v_out, b, opt);
    return q > 0.0 ? -2.0 * std::numbers::pi * b * q * std::log(q) : 0.0;
  };
  const quad::AdaptiveOptions q{.rel_tol = opt.outer_rel_tol, .abs_tol = 1e-14, .start_panels = 1, .max_panels = 1 << 10};
  double total = 0.0;
  for (int i = 0; i < intervals; ++i) {
    total += quad::integrate(integrand, b_end * i / intervals, b_end * (i + 1) / intervals, q);
  }
  return total;
}

// C(cb, k, v) evaluated by quadrature for any codebook.
inline double channel_information_numeric(const Codebook& cb, double k, double v_out,
                                          const InformationOptions& opt = {}) {
  if (!(v_out > 0.0) || k < 0.0) throw PhysicsError("channel information needs k >= 0 and v > 0");
  if (k == 0.0) return 0.0;
  return std::max(0.0, output_entropy(cb, k, v_out, opt) - differential_entropy_gaussian(v_out));
}

// C(cb, k, v): closed form for Gaussian codebooks, quadrature otherwise.
inline double channel_information(const Codebook& cb, double k, double v_out) {
  if (cb.is_gaussian()) return mutual_information_gaussian(cb.sigma2(), k, v_out);
  return channel_information_numeric(cb, k, v_out);
}

inline double mutual_information_numeric(const Codebook& cb, double k, double v_out,
                                         const InformationOptions& opt = {}) {
  return channel_information_numeric(cb, k, v_out, opt);
}

// χ = h(P_E) - h(P_th): P_E is the codebook smeared by the thermal density of
// variance (1 + cosh 2r)/4 and P_th that thermal density alone.
inline double holevo_numeric(const Codebook& cb, double r, const InformationOptions& opt = {}) {
  return channel_information_numeric(cb, 1.0, eve_thermal_variance(r), opt);
}

// ---------------------------------------------------------------------------
// Eavesdropping on the feedforward channel

enum class HolevoPipeline {
  differential_entropy,  // classical ensemble of Eve's conditional displacement
  von_neumann            // S(ensemble) - S(conditional) of her two modes
};

struct SecurityParams {
  double squeeze_factor = 0.0;
  double gain = 1.0;
  double coupling = 0.0;
  double eps_ff = 0.0;
  double t_ff = 0.0;
  double frequency_hz = 5.0e9;
  Codebook codebook = Codebook::gaussian(1.0);
  HolevoPipeline pipeline = HolevoPipeline::differential_entropy;

  double w_ff() const { return ChannelSpec{eps_ff, t_ff, frequency_hz}.noise_factor().value(); }

  void validate() const {
    if (!(squeeze_factor >= 0.0)) throw PhysicsError("squeeze factor must be >= 0");
    if (!(gain >= 1.0)) throw PhysicsError("gain must be >= 1");
    if (!(coupling > 0.0 && coupling <= 1.0)) throw PhysicsError("coupling η must lie in (0, 1]");
    if (!(eps_ff >= 0.0 && eps_ff < 1.0)) throw PhysicsError("ε_ff must lie in [0, 1)");
    ChannelSpec{eps_ff, t_ff, frequency_hz}.validate();
  }
};

// η = 4 / (G (1 - ε_ff)), clamped to 1 when G is too small to match.
inline double matched_coupling(double gain, double eps_ff) {
  return std::min(1.0, 4.0 / (gain * (1.0 - eps_ff)));
}

struct SecurityPoint {
  double mutual_information = 0.0;  // nats
  double holevo = 0.0;              // nats
  double fidelity = 0.0;
  double v_out = 0.0;
  double k = 0.0;
  double v_eve = 0.0;               // Eve's equivalent per-quadrature noise (∞ if she learns nothing)
  double w_ff = 1.0;
  SecurityParams params;

  bool secure() const { return mutual_information > holevo; }
};

namespace detail {

inline TeleportConfig security_chain(const SecurityParams& p) {
  TeleportConfig cfg;
  cfg.squeeze_factor = p.squeeze_factor;
  cfg.gain = p.gain;
  cfg.coupling = p.coupling;
  cfg.segment_loss(kFeedforwardSegment) = p.eps_ff;
  cfg.segment_temperature(kFeedforwardSegment) = p.t_ff;
  cfg.carrier_frequency_hz = p.frequency_hz;
  cfg.noise_scope = NoiseScope::channels_only;
  return cfg;
}

// Equivalent isotropic noise of a linear Gaussian channel α ↦ J α + noise(V):
// 2 / tr(Jᵀ V⁻¹ J), which is v/k for J = √k·𝟙 and V = v·𝟙.
inline double equivalent_noise(const Matrix& gain, const Matrix& cov) {
  const double info = (gain.transpose() * cov.ldlt().solve(gain)).trace();
  if (!(info > 1e-300)) return std::numeric_limits<double>::infinity();
  return 2.0 / info;
}

struct TapResponse {
  Matrix gain;  // displacement per unit Re α, Im α
  GaussianState vacuum_input;
};

// Linear response of the feedforward mode to Alice's input.
inline TapResponse feedforward_response(TeleportConfig cfg) {
  cfg.ensemble_sigma2.reset();
  cfg.alpha = 0.0;
  const GaussianState zero = transfer_tap(cfg);
  Matrix gain(2, 2);
  cfg.alpha = 1.0;
  gain.col(0) = transfer_tap(cfg).displacement() - zero.displacement();
  cfg.alpha = std::complex<double>(0.0, 1.0);
  gain.col(1) = transfer_tap(cfg).displacement() - zero.displacement();
  return {gain, zero};
}

// Codebook variance used where a Gaussian ensemble stands in for the
// codebook: E|α|² / 2 per quadrature.
inline double moment_matched_sigma2(const Codebook& cb) {
  return cb.is_gaussian() ? cb.sigma2() : 0.5 * mean_photon_number(cb);
}

}  // namespace detail

struct EveChannel {
  double v_eff = 0.0;   // Eve's equivalent noise on α (∞ if blind)
  Matrix gain;          // 4×2: Eve's displacement per unit α
  Matrix conditional;   // 4×4: her covariance for a fixed input
};

inline EveChannel eve_channel(const SecurityParams& p) {
  const TeleportConfig cfg = detail::security_chain(p);
  const detail::TapResponse tap = detail::feedforward_response(cfg);
  const double w = p.w_ff();
  const EveAttack base = eve_attack(tap.vacuum_input, p.eps_ff, w);
  Matrix gain(4, 2);
  for (int c = 0; c < 2; ++c) {
    const GaussianState shifted(tap.gain.col(c), tap.vacuum_input.covariance());
    gain.col(c) = eve_attack(shifted, p.eps_ff, w).eve.displacement() - base.eve.displacement();
  }
  return {detail::equivalent_noise(gain, base.eve.covariance()), gain, base.eve.covariance()};
}

inline double eve_holevo(const SecurityParams& p, const EveChannel& ch) {
  if (p.pipeline == HolevoPipeline::von_neumann) {
    if (std::isinf(ch.v_eff)) return 0.0;
    const double s2 = detail::moment_matched_sigma2(p.codebook);
    const Matrix ensemble = ch.conditional + s2 * ch.gain * ch.gain.transpose();
    return std::max(0.0, von_neumann_entropy(ensemble) - von_neumann_entropy(ch.conditional));
  }
  if (std::isinf(ch.v_eff)) return 0.0;
  return channel_information(p.codebook, 1.0, ch.v_eff);
}

inline SecurityPoint finite_parameter_point(const SecurityParams& p) {
  p.validate();
  SecurityPoint pt;
  pt.params = p;
  pt.w_ff = p.w_ff();
  const ClosedFormOutput out = two_channel_output(p.squeeze_factor, p.gain, p.coupling, 0.0, p.eps_ff, 1.0, pt.w_ff);
  pt.v_out = out.v_out;
  pt.k = out.d_scale * out.d_scale;
  pt.fidelity = 2.0 / (1.0 + 4.0 * out.v_out);
  pt.mutual_information = channel_information(p.codebook, pt.k, pt.v_out);
  const EveChannel ch = eve_channel(p);
  pt.v_eve = ch.v_eff;
  pt.holevo = eve_holevo(p, ch);
  return pt;
}

// ---------------------------------------------------------------------------
// Secure fidelity: the teleportation fidelity at the feedforward temperature
// where Bob's and Eve's information cross.

// F_s = 2 / (2 + cosh 2r): the infinite-gain limit.
inline double secure_fidelity_limit(double r) { return 2.0 / (2.0 + std::cosh(2.0 * r)); }

enum class SecureClass { crossing, always_secure, never_secure };

inline const char* to_string(SecureClass c) {
  switch (c) {
    case SecureClass::crossing: return "crossing";
    case SecureClass::always_secure: return "always-secure";
    case SecureClass::never_secure: return "never-secure";
  }
  return "?";
}

struct SecureFidelity {
  SecureClass classification = SecureClass::crossing;
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double t_cross = std::numeric_limits<double>::quiet_NaN();
  std::optional<SecurityPoint> point;
};

struct CrossingOptions {
  double log10_t_min = -3.0;  // 1 mK
  double log10_t_max = 6.0;   // 10⁶ K
  double log10_tol = 1e-7;
};

// Scans T_ff decade by decade and bisects (in log T) the first interval where
// I - χ changes sign.  t_ff in `p` is ignored.
inline SecureFidelity secure_fidelity(SecurityParams p, const CrossingOptions& opt = {}) {
  p.t_ff = 0.0;
  p.validate();
  auto margin = [&](double log10_t) {
    SecurityParams q = p;
    q.t_ff = std::pow(10.0, log10_t);
    const SecurityPoint pt = finite_parameter_point(q);
    return pt.mutual_information - pt.holevo;
  };
  std::vector<double> grid;
  for (double e = opt.log10_t_min; e <= opt.log10_t_max + 1e-9; e += 1.0) grid.push_back(e);
  std::vector<double> values;
  values.reserve(grid.size());
  for (double e : grid) values.push_back(margin(e));

  SecureFidelity result;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if ((values[i] > 0.0) != (values[i + 1] > 0.0)) {
      const double root = opt::bisect(margin, grid[i], grid[i + 1], opt.log10_tol);
      p.t_ff = std::pow(10.0, root);
      result.point = finite_parameter_point(p);
      result.t_cross = p.t_ff;
      result.fidelity = result.point->fidelity;
      return result;
    }
  }
  result.classification = values.front() > 0.0 ? SecureClass::always_secure : SecureClass::never_secure;
  return result;
}

// Onset of security against an eavesdropper holding the whole feedforward:
// the smallest squeezing at which Bob's equivalent noise (W_ff = 1, ε_ff = 0,
// matched coupling) drops below the noise on the feedforward itself.
// gain = +∞ selects the infinite-gain limit.
inline double minimum_secure_squeezing(double gain, double s_max_db = 20.0) {
  if (!(gain >= 1.0)) throw PhysicsError("minimum_secure_squeezing needs G >= 1");
  auto advantage = [&](double s_db) {
    const double r = squeeze_factor_from_db(s_db);
    if (std::isinf(gain)) return eve_thermal_variance(r) - 0.25 * (1.0 + 2.0 * std::exp(-2.0 * r));
    SecurityParams p;
    p.squeeze_factor = r;
    p.gain = gain;
    p.coupling = matched_coupling(gain, 0.0);
    const ClosedFormOutput out = two_channel_output(r, gain, p.coupling, 0.0, 0.0, 1.0, 1.0);
    const detail::TapResponse tap = detail::feedforward_response(detail::security_chain(p));
    const double eve = detail::equivalent_noise(tap.gain, tap.vacuum_input.covariance());
    return eve - out.v_out / (out.d_scale * out.d_scale);
  };
  if (advantage(0.0) > 0.0) return 0.0;
  return opt::bisect(advantage, 0.0, s_max_db, 1e-9);
}

}  // namespace cvtele
