#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "cvtele/error.hpp"

namespace cvtele {

// CODATA 2018.  h and k_B are exact by definition of the SI.
namespace constants {
inline constexpr double planck = 6.62607015e-34;         // J s
inline constexpr double hbar = 1.05457181764616e-34;     // J s, h / 2π
inline constexpr double boltzmann = 1.380649e-23;        // J / K
}  // namespace constants

// Bose-Einstein occupation of a bosonic mode at angular frequency
// 2π·frequency_hz in equilibrium with a bath at temperature_k.
inline double thermal_occupation(double temperature_k, double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw PhysicsError("thermal_occupation: frequency must be positive");
  }
  if (temperature_k < 0.0) {
    throw PhysicsError("thermal_occupation: temperature must be non-negative");
  }
  if (temperature_k == 0.0) return 0.0;
  const double x = constants::planck * frequency_hz / (constants::boltzmann * temperature_k);
  return 1.0 / std::expm1(x);
}

// Inverse of thermal_occupation: the bath temperature giving occupation n.
inline double temperature_for_occupation(double n, double frequency_hz) {
  if (!(frequency_hz > 0.0)) throw PhysicsError("frequency must be positive");
  if (!(n >= 0.0)) throw PhysicsError("occupation must be non-negative");
  if (n == 0.0) return 0.0;
  return constants::planck * frequency_hz / (constants::boltzmann * std::log1p(1.0 / n));
}

// W = 2n + 1: the bath variance in units of the vacuum variance.
class NoiseFactor {
 public:
  explicit NoiseFactor(double w) : w_(w) {
    if (!(w >= 1.0)) throw PhysicsError("noise factor W must be >= 1");
  }

  static NoiseFactor from_occupation(double n) { return NoiseFactor(2.0 * n + 1.0); }

  double value() const noexcept { return w_; }
  double occupation() const noexcept { return 0.5 * (w_ - 1.0); }

 private:
  double w_;
};

// A lossy channel coupled to a thermal bath.
struct ChannelSpec {
  double loss = 0.0;                // power loss fraction ε
  double temperature_k = 0.0;
  double frequency_hz = 5.0e9;

  void validate() const {
    if (!(loss >= 0.0 && loss <= 1.0)) throw PhysicsError("channel loss must lie in [0, 1]");
    if (!(temperature_k >= 0.0)) throw PhysicsError("channel temperature must be >= 0 K");
    if (!(frequency_hz > 0.0)) throw PhysicsError("channel frequency must be > 0 Hz");
  }

  NoiseFactor noise_factor() const {
    validate();
    return NoiseFactor::from_occupation(thermal_occupation(temperature_k, frequency_hz));
  }
};

// dB conversions.  Squeezing S (dB) maps to the squeeze factor r with
// e^{-2r} = 10^{-S/10}.  Gains and couplings are power ratios.  A loss given in
// dB is an attenuation: ε = 1 - 10^{-L/10}.

inline double squeeze_factor_from_db(double s_db) {
  if (s_db < 0.0) throw PhysicsError("squeezing level must be >= 0 dB");
  return s_db * std::numbers::ln10 / 20.0;
}

inline double db_from_squeeze_factor(double r) { return r * 20.0 / std::numbers::ln10; }

inline double gain_from_db(double g_db) { return std::pow(10.0, g_db / 10.0); }
inline double coupling_from_db(double eta_db) { return std::pow(10.0, eta_db / 10.0); }
inline double db_from_ratio(double x) { return 10.0 * std::log10(x); }

inline double loss_from_db(double loss_db) {
  if (loss_db < 0.0) throw PhysicsError("loss must be >= 0 dB");
  return -std::expm1(-loss_db * std::numbers::ln10 / 10.0);
}

inline double db_from_loss(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw PhysicsError("loss fraction must lie in [0, 1)");
  return -10.0 * std::log1p(-eps) / std::numbers::ln10;
}

}  // namespace cvtele
