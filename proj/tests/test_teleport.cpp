#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "cvtele/teleport.hpp"

using namespace cvtele;

namespace {

TeleportConfig matched_lossless(double s_db, double gain, std::complex<double> alpha = {1.0, 0.5}) {
  TeleportConfig c;
  c.squeeze_factor = squeeze_factor_from_db(s_db);
  c.gain = gain;
  c.coupling = 4.0 / gain;
  c.alpha = alpha;
  return c;
}

double w_from_temperature(double t, double f) { return 2.0 * thermal_occupation(t, f) + 1.0; }

// Fidelity of an isotropic Gaussian output (displacement √k α, variance v)
// against |α>, from the single-mode overlap formula for commuting isotropic
// covariances: F = 2/(1+4v) · exp(-2|α|²(√k-1)²/(1+4v)).
double isotropic_fidelity(double k, double v, std::complex<double> alpha) {
  const double s = 1.0 + 4.0 * v;
  const double gap = std::sqrt(k) - 1.0;
  return 2.0 / s * std::exp(-2.0 * std::norm(alpha) * gap * gap / s);
}

}  // namespace

TEST(OperatorChain, LosslessStepsAreSymplecticAndLossStepsContract) {
  TeleportConfig c = matched_lossless(8.0, 100.0);
  c.segment_loss(5) = 0.2;
  const auto steps = build_operators(c);
  ASSERT_EQ(steps.size(), 13u);
  for (const auto& s : steps) {
    if (s.loss_operator == 0) {
      EXPECT_TRUE(s.op.is_symplectic(1e-8)) << s.op.label;
    }
  }
  EXPECT_TRUE(steps[3].op.lossy);  // L2 carries ε5
  EXPECT_FALSE(steps[1].op.lossy);
}

TEST(OperatorChain, SegmentNoiseLandsOnTheRightMode) {
  TeleportConfig c;
  c.segment_loss(kFeedforwardSegment) = 0.5;
  c.segment_temperature(kFeedforwardSegment) = 1.0;
  const Matrix n = segment_noise(c, 6);  // L6 holds ε16..ε18
  const double w = w_from_temperature(1.0, c.carrier_frequency_hz);
  EXPECT_NEAR(n(2, 2), 0.5 * w / 4.0, 1e-15);  // ε17 acts on mode 1
  EXPECT_DOUBLE_EQ(n(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(n(4, 4), 0.0);
}

TEST(LosslessChain, MatchesTextbookClosedForm) {
  for (double s_db : {0.0, 3.0, 10.0}) {
    for (double gain : {2.0, 50.0, 1e4}) {
      for (double eta : {0.01, 0.3, 0.9}) {
        TeleportConfig c;
        c.squeeze_factor = squeeze_factor_from_db(s_db);
        c.gain = gain;
        c.coupling = eta;
        c.alpha = {0.7, -0.4};
        const ChainResult r = run_chain(c);
        const ClosedFormOutput cf = closed_form_output(c.squeeze_factor, gain, eta, 0.0, 0.0, 1.0, 1.0);
        EXPECT_NEAR(r.bob_state.covariance()(0, 0), cf.v_out, 1e-10 * std::max(1.0, cf.v_out));
        EXPECT_NEAR(r.bob_state.covariance()(1, 1), cf.v_out, 1e-10 * std::max(1.0, cf.v_out));
        EXPECT_NEAR(std::sqrt(r.displacement_gain), cf.d_scale, 1e-12 * cf.d_scale);
        EXPECT_FALSE(cf.large_gain_assumed);
      }
    }
  }
}

TEST(LossyChain, ExactTwoChannelOutputMatchesChain) {
  for (double s_db : {0.0, 6.0, 15.0}) {
    for (double eps_ent : {0.0, 0.2}) {
      for (double eps_ff : {0.0, 0.4, 0.9}) {
        for (double t : {0.0, 0.3, 20.0}) {
          TeleportConfig c;
          c.squeeze_factor = squeeze_factor_from_db(s_db);
          c.gain = 300.0;
          c.coupling = 0.02;
          c.segment_loss(kEntanglementSegment) = eps_ent;
          c.segment_loss(kFeedforwardSegment) = eps_ff;
          c.segment_temperature(kEntanglementSegment) = t;
          c.segment_temperature(kFeedforwardSegment) = 2.0 * t;
          c.alpha = {1.2, 0.3};
          const ChainResult r = run_chain(c);
          const double w_ent = w_from_temperature(t, c.carrier_frequency_hz);
          const double w_ff = w_from_temperature(2.0 * t, c.carrier_frequency_hz);
          const ClosedFormOutput cf = two_channel_output(c.squeeze_factor, c.gain, c.coupling, eps_ent, eps_ff, w_ent, w_ff);
          EXPECT_NEAR(r.bob_state.covariance()(0, 0), cf.v_out, 1e-10 * cf.v_out);
          EXPECT_NEAR(r.displacement_gain, cf.d_scale * cf.d_scale, 1e-10);
          EXPECT_NEAR(r.fidelity, isotropic_fidelity(r.displacement_gain, cf.v_out, c.alpha), 1e-10);
        }
      }
    }
  }
}

TEST(LossyChain, LargeGainFormulaIsTheHighGainLimit) {
  const double r = squeeze_factor_from_db(7.0);
  const double eps_ent = 0.15;
  const double eps_ff = 0.3;
  const double gain = 1e8;
  const double eta = 4.0 / (gain * (1.0 - eps_ff));
  const ClosedFormOutput exact = two_channel_output(r, gain, eta, eps_ent, eps_ff, 3.0, 50.0);
  const ClosedFormOutput approx = closed_form_output(r, gain, eta, eps_ent, eps_ff, 3.0, 50.0);
  EXPECT_TRUE(approx.large_gain_assumed);
  EXPECT_FALSE(approx.large_gain_warning);
  EXPECT_NEAR(exact.v_out, approx.v_out, 1e-6);
  EXPECT_TRUE(closed_form_output(r, 20.0, 0.2, 0.1, 0.0, 1.0, 1.0).large_gain_warning);
}

TEST(MatchedChain, FidelityApproachesLargeGainFormula) {
  for (double s_db : {0.0, 5.0, 10.0, 20.0}) {
    for (double eps_ff : {0.0, 0.3, 0.9}) {
      for (double w : {1.0, 10.0, 100.0}) {
        TeleportConfig c;
        c.squeeze_factor = squeeze_factor_from_db(s_db);
        c.gain = 1e4;
        c.coupling = 4.0 / (c.gain * (1.0 - eps_ff));
        c.segment_loss(kFeedforwardSegment) = eps_ff;
        c.segment_temperature(kFeedforwardSegment) = temperature_for_occupation(0.5 * (w - 1.0), c.carrier_frequency_hz);
        c.alpha = {1.0, 0.5};
        EXPECT_NEAR(run_chain(c).fidelity, large_gain_fidelity(c.squeeze_factor, c.coupling, eps_ff, w), 1e-3);
      }
    }
  }
}

TEST(MatchedChain, NoSqueezingGivesClassicalHalf) {
  EXPECT_NEAR(run_chain(matched_lossless(0.0, 1e7)).fidelity, 0.5, 1e-6);
  // vacuum input at r = 0, η = 4/G:  v_out = (3 - 4/G + 2/G²)/4
  const double g = 1e3;
  EXPECT_NEAR(run_chain(matched_lossless(0.0, g, 0.0)).fidelity, 2.0 / (4.0 - 4.0 / g + 2.0 / (g * g)), 1e-12);
}

TEST(MatchedChain, DisplacementGainIsUnityUpToOrderOneOverG) {
  const ChainResult r = run_chain(matched_lossless(10.0, 1e4));
  EXPECT_NEAR(r.displacement_gain, (1e4 + 2.0 + 1e-4) / 1e4, 1e-12);
  EXPECT_DOUBLE_EQ(displacement_matching_gain(0.01, 0.0), 400.0);
  EXPECT_DOUBLE_EQ(displacement_matching_gain(0.01, 0.5), 800.0);
  EXPECT_THROW(displacement_matching_gain(0.0, 0.0), PhysicsError);
}

TEST(DecoupledChain, BobKeepsVacuumWhenNothingIsFedForward) {
  TeleportConfig c;
  c.gain = 50.0;
  c.coupling = 0.0;
  c.alpha = std::sqrt(1.3);
  const ChainResult r = run_chain(c);
  EXPECT_NEAR(r.fidelity, std::exp(-1.3), 1e-12);
  EXPECT_LT(r.fidelity, 0.5);
}

TEST(EnsembleInput, ComparesAgainstTheEnsembleState) {
  TeleportConfig c = matched_lossless(10.0, 1e6, 0.0);
  c.ensemble_sigma2 = 2.0;
  const ChainResult r = run_chain(c);
  EXPECT_NEAR(r.bob_state.covariance()(0, 0),
              closed_form_output(c.squeeze_factor, c.gain, c.coupling, 0, 0, 1, 1).v_out + 2.0 * r.displacement_gain,
              1e-8);
}

TEST(OptimalSqueezing, ChainArgmaxSatisfiesLossBalanceCondition) {
  // Large-gain output variance with entanglement loss ε is minimised where
  // tanh 2r = 2√(1-ε)/(2-ε), i.e. ε cosh² r = 1.
  for (double eps : {0.05, 0.1, 0.2}) {
    auto f = [&](double s_db) {
      TeleportConfig c = matched_lossless(s_db, 1e6, 0.0);
      c.segment_loss(kEntanglementSegment) = eps;
      return run_chain(c).fidelity;
    };
    double best = 0.0;
    double best_f = -1.0;
    for (double s = 0.0; s <= 30.0; s += 0.01) {
      const double v = f(s);
      if (v > best_f) {
        best_f = v;
        best = s;
      }
    }
    const double r_opt = optimal_squeeze_factor(eps);
    EXPECT_NEAR(eps * std::cosh(r_opt) * std::cosh(r_opt), 1.0, 1e-12);
    EXPECT_NEAR(best, db_from_squeeze_factor(r_opt), 0.02) << "ε = " << eps;
  }
}

TEST(FeedforwardTap, CarriesAmplifiedInputDisplacement) {
  const TeleportConfig c = matched_lossless(6.0, 400.0, {2.0, -1.0});
  const GaussianState ff = transfer_tap(c);
  const double amp = std::sqrt(gain_plus(400.0)) / 2.0;
  EXPECT_NEAR(std::abs(ff.displacement()(0)), amp * 2.0, 1e-9);
  EXPECT_NEAR(std::abs(ff.displacement()(1)), amp * 1.0, 1e-9);
}

TEST(EveAttack, NoTapLeavesEveWithHerOwnResource) {
  const GaussianState ff = GaussianState::coherent({3.0, 1.0});
  const EveAttack a = eve_attack(ff, 0.0, 5.0);
  EXPECT_NEAR(a.eve.displacement().norm(), 0.0, 1e-15);
  EXPECT_NEAR(a.eve.covariance()(0, 0), 5.0 / 4.0, 1e-15);
  EXPECT_TRUE(a.bob_feedforward.covariance().isApprox(ff.covariance()));
}

TEST(EveAttack, FullTapHandsEveTheFeedforward) {
  const GaussianState ff(Vector::Constant(2, 0.5), 3.0 * Matrix::Identity(2, 2));
  const EveAttack a = eve_attack(ff, 1.0, 1.0);
  EXPECT_NEAR(std::abs(a.eve.displacement()(0)), 0.5, 1e-15);
  EXPECT_NEAR(a.eve.covariance()(0, 0), 3.0, 1e-15);
  EXPECT_NEAR(a.bob_feedforward.covariance()(0, 0), 0.25, 1e-15);
}

TEST(EveAttack, BobSeesThermalLossChannel) {
  const GaussianState ff = GaussianState::thermal(2.0);
  const double eps = 0.3;
  const double w = 9.0;
  const EveAttack a = eve_attack(ff, eps, w);
  EXPECT_NEAR(a.bob_feedforward.covariance()(0, 0), (1 - eps) * 1.25 + eps * w / 4, 1e-14);
  EXPECT_TRUE(a.eve.is_physical());
}

TEST(TeleportConfig, ValidationRejectsUnphysicalSettings) {
  TeleportConfig c;
  c.gain = 0.5;
  EXPECT_THROW(run_chain(c), PhysicsError);
  c = TeleportConfig{};
  c.segment_loss(3) = 1.5;
  EXPECT_THROW(run_chain(c), PhysicsError);
  c = TeleportConfig{};
  c.segment_temperature(9) = -1.0;
  EXPECT_THROW(run_chain(c), PhysicsError);
}

TEST(NoiseScope, ChannelsOnlyIgnoresInternalBaths) {
  TeleportConfig c = matched_lossless(5.0, 100.0);
  c.segment_loss(4) = 0.2;
  c.segment_temperature(4) = 10.0;
  const double all = run_chain(c).fidelity;
  c.noise_scope = NoiseScope::channels_only;
  const double channels = run_chain(c).fidelity;
  EXPECT_GT(channels, all);
}
