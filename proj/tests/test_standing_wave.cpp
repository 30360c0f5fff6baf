#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "beam/error.hpp"
#include "beam/standing_wave.hpp"

using namespace beam;

TEST(StandingWave, FreeSetSatisfiesItsBoundaryConditions) {
  const ResidualReport r = verify_params(reference_wave("free"), "free", 1e-9);
  EXPECT_TRUE(r.passed) << r.max_residual;
}

TEST(StandingWave, CorrectedClampedSetSatisfiesItsBoundaryConditions) {
  const ResidualReport r = verify_params(reference_wave("clamped_corrected"), "clamped", 1e-9);
  EXPECT_TRUE(r.passed) << r.max_residual;
}

TEST(StandingWave, TabulatedClampedSetOnlyVanishesAtTheLeftEnd) {
  const StandingWaveParams p = reference_wave("clamped");
  EXPECT_NEAR(mode_shape(p, 0.0), 0.0, 1e-12);
  EXPECT_GT(std::abs(mode_shape(p, 1.0)), 1.0);
  EXPECT_FALSE(verify_params(p, "clamped").passed);
}

TEST(StandingWave, RingSetIsContinuousWithMatchingFrequency) {
  const PiecewiseStandingWave w = reference_ring_wave();
  const ResidualReport r = verify_params(w, 1e-9);
  EXPECT_TRUE(r.passed) << r.max_residual;
  EXPECT_NEAR(w.block1.omega(), w.block2.omega(), 1e-9 * w.block1.omega());
  EXPECT_NEAR(w.block1.beta * w.block1.beta, 2.0 * w.block2.beta * w.block2.beta, 1e-9);
}

TEST(StandingWave, UnknownNameThrows) { EXPECT_THROW(reference_wave("hinged"), Error); }

TEST(StandingWave, SatisfiesTheBeamEquation) {
  for (const char* name : {"free", "clamped_corrected", "ring_block1", "ring_block2"}) {
    const StandingWaveParams p = reference_wave(name);
    const double w = p.omega();
    for (double x : {p.x_l + 0.1, 0.5 * (p.x_l + p.x_r), p.x_r - 0.2}) {
      const double t = 0.37;
      const double u_tt = -w * w * eval(p, x, t);
      const double u_xxxx = std::cos(w * t) * mode_shape(p, x, 4);
      EXPECT_NEAR(p.b * u_tt + p.a * u_xxxx, 0.0, 1e-9 * std::abs(p.a * u_xxxx) + 1e-12) << name;
    }
  }
}

TEST(StandingWave, DerivativesMatchFiniteDifferences) {
  const StandingWaveParams p = reference_wave("free");
  const double x = 0.3, d = 1e-5;
  for (int k = 0; k < 4; ++k) {
    const double fd = (mode_shape(p, x + d, k) - mode_shape(p, x - d, k)) / (2.0 * d);
    EXPECT_NEAR(fd, mode_shape(p, x, k + 1), 1e-5 * std::max(1.0, std::abs(fd))) << k;
  }
}

TEST(StandingWave, StartsAtRest) {
  const StandingWaveParams p = reference_wave("free");
  EXPECT_EQ(eval_dt(p, 0.4, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(eval(p, 0.4, 0.0), mode_shape(p, 0.4));
  EXPECT_NEAR(eval(p, 0.4, std::numbers::pi / p.omega()), -mode_shape(p, 0.4), 1e-12);
}

TEST(ErrorNorm, KnownValues) {
  Vec u(4), v(4);
  u << 1.0, 2.0, 3.0, 4.0;
  v << 1.0, 2.0, 3.0, 6.0;
  EXPECT_DOUBLE_EQ(error_norm(u, v, 0.25), 1.0);
  EXPECT_EQ(error_norm(u, u, 0.1), 0.0);
  EXPECT_THROW(error_norm(u, Vec::Zero(3), 0.1), Error);
}
