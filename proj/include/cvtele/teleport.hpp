#pragma once

// Analog continuous-variable teleportation of coherent states.
//
// Three modes: 0 = Bob's half of the two-mode squeezed (TMS) resource,
// 1 = Alice's half, 2 = the input code state.  The protocol is the operator
// chain (applied right to left)
//
//   T = L7 · D · L6 · L5 · B23 · L4 · G34 · L3 · B23 · L2 · B12 · L1 · S12
//
// with 21 loss segments ε1..ε21; segment j of L_{i+1} acts on mode
// (j-1) mod 3.  ε16 is the entanglement-distribution loss towards Bob and
// ε17 the feedforward loss.  Each lossy segment injects εW/4·𝟙₂ of thermal
// noise on its mode, W = 2n+1 from the segment's bath temperature.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cvtele/error.hpp"
#include "cvtele/gaussian_state.hpp"
#include "cvtele/units.hpp"

namespace cvtele {

inline constexpr int kSegments = 21;
inline constexpr int kEntanglementSegment = 16;
inline constexpr int kFeedforwardSegment = 17;

enum class NoiseScope {
  all_segments,  // every lossy segment couples to its bath
  channels_only  // only the entanglement (ε16) and feedforward (ε17) channels see a thermal bath
};

struct TeleportConfig {
  double squeeze_factor = 0.0;                  // r1 = r2 = r
  double gamma1 = 0.0;                          // squeezer angles
  double gamma2 = std::numbers::pi / 2.0;
  std::optional<double> gamma3;                 // measurement angles, default γ1, γ2
  std::optional<double> gamma4;
  double gain = 1.0;                            // G3 = G4 = G (linear)
  double coupling = 0.0;                        // η
  std::array<double, kSegments> loss{};         // ε1..ε21 (index j-1)
  std::array<double, kSegments> bath_temperature_k{};
  std::array<double, 3> input_noise{};          // n1, n2, n3
  double carrier_frequency_hz = 5.0e9;
  std::complex<double> alpha{};
  std::optional<double> ensemble_sigma2;        // Gaussian-ensemble input instead of |α>
  NoiseScope noise_scope = NoiseScope::all_segments;

  double& segment_loss(int j) { return loss.at(static_cast<std::size_t>(j - 1)); }
  double segment_loss(int j) const { return loss.at(static_cast<std::size_t>(j - 1)); }
  double& segment_temperature(int j) { return bath_temperature_k.at(static_cast<std::size_t>(j - 1)); }
  double segment_temperature(int j) const { return bath_temperature_k.at(static_cast<std::size_t>(j - 1)); }

  double eps_ent() const { return segment_loss(kEntanglementSegment); }
  double eps_ff() const { return segment_loss(kFeedforwardSegment); }

  double measurement_angle3() const { return gamma3.value_or(gamma1); }
  double measurement_angle4() const { return gamma4.value_or(gamma2); }

  void validate() const {
    if (!(squeeze_factor >= 0.0)) throw PhysicsError("squeeze factor must be >= 0");
    if (!(gain >= 1.0)) throw PhysicsError("measurement gain G must be >= 1");
    if (!(coupling >= 0.0 && coupling <= 1.0)) throw PhysicsError("coupling η must lie in [0, 1]");
    for (int j = 1; j <= kSegments; ++j) {
      if (!(segment_loss(j) >= 0.0 && segment_loss(j) <= 1.0)) {
        throw PhysicsError("loss ε" + std::to_string(j) + " must lie in [0, 1]");
      }
      if (!(segment_temperature(j) >= 0.0)) {
        throw PhysicsError("bath temperature T" + std::to_string(j) + " must be >= 0 K");
      }
    }
    for (double n : input_noise) {
      if (!(n >= 0.0)) throw PhysicsError("input noise photons must be >= 0");
    }
    if (!(carrier_frequency_hz > 0.0)) throw PhysicsError("carrier frequency must be > 0");
    if (ensemble_sigma2 && !(*ensemble_sigma2 >= 0.0)) throw PhysicsError("ensemble variance must be >= 0");
  }
};

// G = 4 / (η (1 - ε_ff)): Bob's output displacement equals Alice's input.
inline double displacement_matching_gain(double coupling, double eps_ff) {
  if (!(coupling > 0.0)) throw PhysicsError("displacement matching needs η > 0");
  if (!(eps_ff < 1.0)) throw PhysicsError("displacement matching needs ε_ff < 1");
  return 4.0 / (coupling * (1.0 - eps_ff));
}

inline GaussianState build_initial(const TeleportConfig& cfg) {
  Vector d = Vector::Zero(6);
  Matrix v = Matrix::Zero(6, 6);
  for (int k = 0; k < 3; ++k) {
    v.block(2 * k, 2 * k, 2, 2) = (1.0 + 2.0 * cfg.input_noise[static_cast<std::size_t>(k)]) * kVacuumVariance *
                                   Matrix::Identity(2, 2);
  }
  if (cfg.ensemble_sigma2) {
    v.block(4, 4, 2, 2) += *cfg.ensemble_sigma2 * Matrix::Identity(2, 2);
  } else {
    d(4) = cfg.alpha.real();
    d(5) = cfg.alpha.imag();
  }
  return GaussianState(std::move(d), std::move(v));
}

struct ChainStep {
  SymplecticOp op;
  int loss_operator = 0;  // i for L_i, 0 for lossless steps
};

namespace detail {

inline SymplecticOp loss_operator(const TeleportConfig& cfg, int i) {
  const std::array<double, 3> eps = {cfg.segment_loss(3 * i - 2), cfg.segment_loss(3 * i - 1),
                                     cfg.segment_loss(3 * i)};
  return ops::loss(eps, "L" + std::to_string(i));
}

// R J Rᵀ with per-mode rotations and squeezers on modes (a, b).
inline SymplecticOp rotated_squeezer(double r_a, double gamma_a, int a, double r_b, double gamma_b, int b,
                                     std::string label) {
  SymplecticOp rot = ops::compose(ops::rotation(3, a, gamma_a), ops::rotation(3, b, gamma_b), "R");
  SymplecticOp j = ops::compose(ops::squeeze(3, a, r_a), ops::squeeze(3, b, r_b), "J");
  return {rot.m * j.m * rot.m.transpose(), std::move(label), false};
}

}  // namespace detail

// The operator chain in application order (S12 first, L7 last).
inline std::vector<ChainStep> build_operators(const TeleportConfig& cfg) {
  cfg.validate();
  const double r = cfg.squeeze_factor;
  // A phase-sensitive amplifier with power gain G is the squeezer with
  // e^{r} = √G acting on the amplified quadrature.
  const double r_gain = 0.5 * std::log(cfg.gain);
  std::vector<ChainStep> steps;
  steps.reserve(13);
  steps.push_back({detail::rotated_squeezer(r, cfg.gamma1, 0, r, cfg.gamma2, 1, "S12"), 0});
  steps.push_back({detail::loss_operator(cfg, 1), 1});
  steps.push_back({ops::beam_splitter(3, 0, 1, 0.5, "B12"), 0});
  steps.push_back({detail::loss_operator(cfg, 2), 2});
  steps.push_back({ops::beam_splitter(3, 1, 2, 0.5, "B23"), 0});
  steps.push_back({detail::loss_operator(cfg, 3), 3});
  steps.push_back({detail::rotated_squeezer(r_gain, cfg.measurement_angle3(), 1, r_gain, cfg.measurement_angle4(), 2,
                                            "G34"),
                   0});
  steps.push_back({detail::loss_operator(cfg, 4), 4});
  steps.push_back({ops::beam_splitter(3, 1, 2, 0.5, "B23"), 0});
  steps.push_back({detail::loss_operator(cfg, 5), 5});
  steps.push_back({detail::loss_operator(cfg, 6), 6});
  steps.push_back({ops::beam_splitter(3, 0, 1, 1.0 - cfg.coupling, "D"), 0});
  steps.push_back({detail::loss_operator(cfg, 7), 7});
  return steps;
}

// Steps up to and including L5: the state at the feedforward transfer point.
inline constexpr std::size_t kTransferSteps = 10;

// Thermal noise εW/4·𝟙₂ injected by loss operator L_i on each of its modes.
inline Matrix segment_noise(const TeleportConfig& cfg, int i) {
  Matrix n = Matrix::Zero(6, 6);
  for (int k = 0; k < 3; ++k) {
    const int j = 3 * (i - 1) + k + 1;
    const double eps = cfg.segment_loss(j);
    if (eps == 0.0) continue;
    // Outside the two channels a restricted scope keeps the vacuum floor so
    // the loss stays a valid channel.
    const bool thermal = cfg.noise_scope == NoiseScope::all_segments || j == kEntanglementSegment ||
                         j == kFeedforwardSegment;
    const double w =
        thermal ? ChannelSpec{eps, cfg.segment_temperature(j), cfg.carrier_frequency_hz}.noise_factor().value() : 1.0;
    n.block(2 * k, 2 * k, 2, 2) = eps * w * kVacuumVariance * Matrix::Identity(2, 2);
  }
  return n;
}

// Applies the first `count` steps, injecting segment noise after each loss
// operator and checking physicality after every step.
inline GaussianState propagate(const TeleportConfig& cfg, const std::vector<ChainStep>& steps, std::size_t count) {
  GaussianState state = build_initial(cfg);
  for (std::size_t s = 0; s < count && s < steps.size(); ++s) {
    const ChainStep& step = steps[s];
    if (step.loss_operator > 0) {
      state = apply(step.op, state, segment_noise(cfg, step.loss_operator));
    } else {
      state = apply(step.op, state);
    }
    state.require_physical("teleport chain step " + std::to_string(s + 1) + " (" + step.op.label + ")");
  }
  return state;
}

struct ChainResult {
  GaussianState bob_state;          // mode 0 after L7
  GaussianState feedforward_state;  // mode 1 at the transfer step (after L5)
  double fidelity = 0.0;
  double displacement_gain = 0.0;   // k: Bob's displacement = √k · Alice's
};

// Reference input state the output is compared against: the pure coherent
// state |α>, or the ensemble state (4σ²+1)/4·𝟙₂ in ensemble mode.
inline GaussianState reference_input(const TeleportConfig& cfg) {
  if (cfg.ensemble_sigma2) {
    return GaussianState(Vector::Zero(2), (4.0 * *cfg.ensemble_sigma2 + 1.0) * kVacuumVariance * Matrix::Identity(2, 2));
  }
  return GaussianState::coherent(cfg.alpha);
}

inline ChainResult run_chain(const TeleportConfig& cfg) {
  const std::vector<ChainStep> steps = build_operators(cfg);
  const GaussianState at_transfer = propagate(cfg, steps, kTransferSteps);
  GaussianState state = at_transfer;
  for (std::size_t s = kTransferSteps; s < steps.size(); ++s) {
    const ChainStep& step = steps[s];
    state = step.loss_operator > 0 ? apply(step.op, state, segment_noise(cfg, step.loss_operator))
                                   : apply(step.op, state);
    state.require_physical("teleport chain step " + std::to_string(s + 1) + " (" + step.op.label + ")");
  }

  Matrix total = Matrix::Identity(6, 6);
  for (const ChainStep& step : steps) total = step.op.m * total;
  const double k = std::abs(total.block(0, 4, 2, 2).determinant());

  GaussianState bob = extract_modes(state, {0});
  const double f = uhlmann_fidelity(bob, reference_input(cfg));
  return {std::move(bob), extract_modes(at_transfer, {1}), f, k};
}

inline GaussianState transfer_tap(const TeleportConfig& cfg) {
  return extract_modes(propagate(cfg, build_operators(cfg), kTransferSteps), {1});
}

struct EveAttack {
  GaussianState eve;              // Eve's two modes after the tap
  GaussianState bob_feedforward;  // what continues towards Bob
};

// Entangling-cloner attack: Eve holds a TMS pair of variance W/4, mixes one
// half into the feedforward on a beam splitter of transmissivity 1 - ε_ff and
// keeps both of her modes.
inline EveAttack eve_attack(const GaussianState& feedforward, double eps_ff, double w_ff) {
  if (feedforward.n_modes() != 1) throw std::invalid_argument("eve_attack: feedforward must be single-mode");
  if (!(eps_ff >= 0.0 && eps_ff <= 1.0)) throw PhysicsError("eve_attack: ε_ff must lie in [0, 1]");
  if (!(w_ff >= 1.0)) throw PhysicsError("eve_attack: W_ff must be >= 1");
  const double corr = std::sqrt(w_ff * w_ff - 1.0) * kVacuumVariance;
  Matrix tms = Matrix::Zero(4, 4);
  tms.diagonal().setConstant(w_ff * kVacuumVariance);
  tms(0, 2) = tms(2, 0) = corr;
  tms(1, 3) = tms(3, 1) = -corr;
  const GaussianState attack = direct_sum(feedforward, GaussianState(Vector::Zero(4), tms));
  const GaussianState after = apply(ops::beam_splitter(3, 0, 1, 1.0 - eps_ff, "E"), attack);
  return {extract_modes(after, {1, 2}), extract_modes(after, {0})};
}

struct ClosedFormOutput {
  double d_scale = 0.0;  // Bob's displacement / Alice's
  double v_out = 0.0;    // Bob's per-quadrature variance
  double g_plus = 0.0;   // (√G + 1/√G)²
  double g_minus = 0.0;  // (√G - 1/√G)²
  bool large_gain_assumed = false;
  bool large_gain_warning = false;  // the G ≫ 1 approximation was used with G < 100
};

inline double gain_plus(double g) { return g + 2.0 + 1.0 / g; }
inline double gain_minus(double g) { return g - 2.0 + 1.0 / g; }

// Bob's output for the chain with losses only in the entanglement (ε_ent)
// and feedforward (ε_ff) channels, exact for any gain:
//   v_out = ¼ [ (a² + c²) cosh 2r - 2ac sinh 2r + k₊ + (1-η) ε_ent W_ent + η ε_ff W_ff ]
//   a = √((1-η)(1-ε_ent)),  c = √(η(1-ε_ff) G₋)/2,  k₊ = η(1-ε_ff) G₊/4,
// with displacement scale √k₊.
inline ClosedFormOutput two_channel_output(double r, double gain, double coupling, double eps_ent, double eps_ff,
                                           double w_ent, double w_ff) {
  ClosedFormOutput out;
  out.g_plus = gain_plus(gain);
  out.g_minus = gain_minus(gain);
  const double a = std::sqrt((1.0 - coupling) * (1.0 - eps_ent));
  const double c = 0.5 * std::sqrt(coupling * (1.0 - eps_ff) * out.g_minus);
  const double k_plus = coupling * (1.0 - eps_ff) * out.g_plus / 4.0;
  out.d_scale = std::sqrt(k_plus);
  out.v_out = 0.25 * ((a * a + c * c) * std::cosh(2.0 * r) - 2.0 * a * c * std::sinh(2.0 * r) + k_plus +
                      (1.0 - coupling) * eps_ent * w_ent + coupling * eps_ff * w_ff);
  return out;
}

// Closed-form output of the textbook analysis: the exact lossless result
//   d_Bob = √(G₊η)/2 · d_Alice,
//   v_out = (1/16){G₊η + [G₋η + 4(1-η)] cosh 2r - 4√(G₋η(1-η)) sinh 2r}
// when both channel losses vanish, otherwise the large-gain, displacement
// matched form
//   v_out = ¼{1 + ε_ent W_ent + η ε_ff W_ff + (2-ε_ent) cosh 2r - 2√(1-ε_ent) sinh 2r}.
inline ClosedFormOutput closed_form_output(double r, double gain, double coupling, double eps_ent, double eps_ff,
                                           double w_ent, double w_ff) {
  ClosedFormOutput out;
  out.g_plus = gain_plus(gain);
  out.g_minus = gain_minus(gain);
  if (eps_ent == 0.0 && eps_ff == 0.0) {
    out.d_scale = 0.5 * std::sqrt(out.g_plus * coupling);
    out.v_out = (out.g_plus * coupling + (out.g_minus * coupling + 4.0 * (1.0 - coupling)) * std::cosh(2.0 * r) -
                 4.0 * std::sqrt(out.g_minus * coupling * (1.0 - coupling)) * std::sinh(2.0 * r)) /
                16.0;
    return out;
  }
  out.large_gain_assumed = true;
  out.large_gain_warning = gain < 100.0;
  out.d_scale = 0.5 * std::sqrt(out.g_plus * coupling * (1.0 - eps_ff));
  out.v_out = 0.25 * (1.0 + eps_ent * w_ent + coupling * eps_ff * w_ff + (2.0 - eps_ent) * std::cosh(2.0 * r) -
                      2.0 * std::sqrt(1.0 - eps_ent) * std::sinh(2.0 * r));
  return out;
}

// F = 1 / (1 + e^{-2r} + η ε_ff W_ff / 2): matched gain, G ≫ 1, ε_ent = 0.
inline double large_gain_fidelity(double r, double coupling, double eps_ff, double w_ff) {
  return 1.0 / (1.0 + std::exp(-2.0 * r) + 0.5 * coupling * eps_ff * w_ff);
}

// Squeeze factor minimising the large-gain output variance at fixed ε_ent:
// tanh 2r = 2√(1-ε)/(2-ε), equivalently ε cosh²(r) = 1.
inline double optimal_squeeze_factor(double eps_ent) {
  if (!(eps_ent > 0.0 && eps_ent <= 1.0)) throw PhysicsError("optimal squeezing needs ε_ent in (0, 1]");
  return std::acosh(1.0 / std::sqrt(eps_ent));
}

}  // namespace cvtele
