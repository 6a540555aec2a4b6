#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvtele/units.hpp"

using namespace cvtele;

TEST(ThermalOccupation, ZeroTemperatureHasNoPhotons) { EXPECT_DOUBLE_EQ(thermal_occupation(0.0, 5e9), 0.0); }

TEST(ThermalOccupation, MatchesBoseEinsteinAtUnitRatio) {
  // hf = kT  ->  n = 1/(e - 1)
  const double f = 5e9;
  const double t = constants::planck * f / constants::boltzmann;
  EXPECT_NEAR(thermal_occupation(t, f), 1.0 / (std::numbers::e - 1.0), 1e-14);
}

TEST(ThermalOccupation, ApproachesClassicalLimitAtHighTemperature) {
  const double f = 5e9;
  const double t = 300.0;
  const double classical = constants::boltzmann * t / (constants::planck * f);
  EXPECT_NEAR(thermal_occupation(t, f), classical - 0.5, 1e-3);
}

TEST(ThermalOccupation, RejectsNegativeTemperatureAndFrequency) {
  EXPECT_THROW(thermal_occupation(-1.0, 5e9), PhysicsError);
  EXPECT_THROW(thermal_occupation(1.0, 0.0), PhysicsError);
}

TEST(ThermalOccupation, TemperatureRoundTrip) {
  for (double n : {1e-6, 0.3, 1.0, 250.0, 1e6}) {
    EXPECT_NEAR(thermal_occupation(temperature_for_occupation(n, 5.35e9), 5.35e9), n, 1e-9 * n);
  }
}

TEST(NoiseFactor, IsTwiceOccupationPlusOne) {
  EXPECT_DOUBLE_EQ(NoiseFactor::from_occupation(2.5).value(), 6.0);
  EXPECT_DOUBLE_EQ(NoiseFactor(7.0).occupation(), 3.0);
  EXPECT_THROW(NoiseFactor(0.5), PhysicsError);
}

TEST(ChannelSpec, NoiseFactorAtFiftyMillikelvin) {
  // hf/kT = 4.80 at 5 GHz, 50 mK: W = coth(hf/2kT)
  const ChannelSpec c{0.1, 0.05, 5e9};
  const double x = constants::planck * 5e9 / (constants::boltzmann * 0.05);
  EXPECT_NEAR(c.noise_factor().value(), 1.0 / std::tanh(0.5 * x), 1e-13);
  EXPECT_NEAR(c.noise_factor().value(), 1.0166, 1e-4);
  EXPECT_THROW((ChannelSpec{1.5, 0.0, 5e9}.validate()), PhysicsError);
}

TEST(Decibels, SqueezingLevelToFactor) {
  // 10 dB of squeezing suppresses the variance by 10: e^{-2r} = 0.1
  EXPECT_NEAR(std::exp(-2.0 * squeeze_factor_from_db(10.0)), 0.1, 1e-14);
  EXPECT_NEAR(db_from_squeeze_factor(squeeze_factor_from_db(7.3)), 7.3, 1e-12);
  EXPECT_THROW(squeeze_factor_from_db(-1.0), PhysicsError);
}

TEST(Decibels, GainCouplingAndLoss) {
  EXPECT_NEAR(gain_from_db(21.0), 125.89254117941675, 1e-9);
  EXPECT_NEAR(coupling_from_db(-20.0), 0.01, 1e-16);
  EXPECT_NEAR(loss_from_db(3.0), 1.0 - std::pow(10.0, -0.3), 1e-15);
  EXPECT_NEAR(db_from_loss(loss_from_db(1.6)), 1.6, 1e-12);
  EXPECT_NEAR(loss_from_db(1e-12), 1e-12 * std::numbers::ln10 / 10.0, 1e-24);
  EXPECT_THROW(loss_from_db(-0.1), PhysicsError);
}
