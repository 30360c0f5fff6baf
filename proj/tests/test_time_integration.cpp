#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "beam/error.hpp"
#include "beam/time_stepper.hpp"

using namespace beam;

namespace {

// v_tt = -w^2 v with v(0) = 1, v_t(0) = 0, error at t = 1 against cos(w t).
double cosine_error(double w, double k) {
  Mat d(1, 1);
  d(0, 0) = -w * w;
  Vec f1(1), f2(1);
  f1[0] = 1.0;
  f2[0] = 0.0;
  const Trajectory tr = integrate(d, f1, f2, k, 1.0);
  return std::abs(tr.final[0] - std::cos(w * tr.time.t_final));
}

Mat diagonal(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v.asDiagonal();
}

}  // namespace

TEST(SpectralRadius, SmallCases) {
  EXPECT_EQ(spectral_radius(Mat::Zero(3, 3)), 0.0);
  EXPECT_NEAR(spectral_radius(diagonal({-1.0, -5.0})), 5.0, 1e-12);
}

TEST(SpectralRadius, PowerIterationForLargeMatrices) {
  const int n = 2100;
  Vec diag = Vec::LinSpaced(n, -1.0, -7.0);
  EXPECT_NEAR(spectral_radius(diag.asDiagonal().toDenseMatrix()), 7.0, 1e-6);
}

TEST(StableStep, Bound) {
  EXPECT_DOUBLE_EQ(max_stable_dt(12.0), 1.0);
  EXPECT_DOUBLE_EQ(max_stable_dt(3.0), 2.0);
  EXPECT_EQ(max_stable_dt(0.0), std::numeric_limits<double>::infinity());
}

TEST(TimeGrid, LandsExactlyOnFinalTime) {
  const TimeGrid g = make_time_grid(0.3, 1.0);
  EXPECT_EQ(g.n_steps, 4);
  EXPECT_DOUBLE_EQ(g.k, 0.25);
  EXPECT_DOUBLE_EQ(g.t_final, 1.0);
  const TimeGrid exact = make_time_grid(0.1, 1.0);
  EXPECT_EQ(exact.n_steps, 10);
  EXPECT_LE(exact.k, 0.1);
}

TEST(Integrate, ZeroOperatorKeepsConstantState) {
  Vec f1(3), f2 = Vec::Zero(3);
  f1 << 1.0, -2.0, 0.5;
  const Trajectory tr = integrate(Mat::Zero(3, 3), f1, f2, 0.1, 2.0);
  EXPECT_LT((tr.final - f1).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Integrate, ZeroOperatorMovesLinearlyWithInitialVelocity) {
  Vec f1 = Vec::Zero(2), f2(2);
  f2 << 1.0, -3.0;
  const Trajectory tr = integrate(Mat::Zero(2, 2), f1, f2, 0.1, 1.0);
  EXPECT_LT((tr.final - f2).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Integrate, FourthOrderAccurateOnCosine) {
  const double w = 3.0;
  const double e1 = cosine_error(w, 0.04);
  const double e2 = cosine_error(w, 0.02);
  const double e4 = cosine_error(w, 0.01);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.1);
  EXPECT_NEAR(std::log2(e2 / e4), 4.0, 0.1);
}

TEST(Integrate, FirstStepMatchesTaylorSeries) {
  const double w = 2.0, k = 0.1;
  Mat d(1, 1);
  d(0, 0) = -w * w;
  Vec f1(1), f2(1);
  f1[0] = 1.0;
  f2[0] = 1.0;
  const Trajectory tr = integrate(d, f1, f2, k, k);
  EXPECT_NEAR(tr.final[0], std::cos(w * k) + std::sin(w * k) / w, 2e-7);
}

TEST(Integrate, StableJustInsideTheBoundUnstableJustOutside) {
  const double rho = 100.0;
  Mat d(1, 1);
  d(0, 0) = -rho;
  Vec f1(1), f2(1);
  f1[0] = 1.0;
  f2[0] = 0.0;
  const double k_in = std::sqrt(11.9 / rho);
  const Trajectory ok = integrate(d, f1, f2, k_in, 1e4 * k_in);
  EXPECT_LT(std::abs(ok.final[0]), 1.01);
  EXPECT_FALSE(integrate(d, f1, f2, std::sqrt(11.5 / rho), 1.0).cfl_warning);
  const double k_out = std::sqrt(12.1 / rho);
  try {
    integrate(d, f1, f2, k_out, 1e4 * k_out);
    FAIL() << "expected instability";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InstabilityDetected);
  }
}

TEST(Integrate, ReversingTheStateRunsTimeBackwards) {
  Mat d(2, 2);
  d << -4.0, 1.0, 1.0, -9.0;
  Vec f1(2), f2(2);
  f1 << 1.0, 0.5;
  f2 << -0.3, 0.2;
  const double k = 0.01;
  const Trajectory tr = integrate(d, f1, f2, k, 1.0);
  const auto [prev, cur] = advance(d, tr.previous, tr.final, tr.time.k, tr.time.n_steps);
  const auto [back_prev, back_cur] = advance(d, cur, prev, tr.time.k, 2 * tr.time.n_steps - 1);
  EXPECT_LT((back_cur - f1).cwiseAbs().maxCoeff(), 1e-8);
  (void)back_prev;
}

TEST(Integrate, ObserverSeesEveryStep) {
  Mat d = diagonal({-1.0});
  Vec f1 = Vec::Ones(1), f2 = Vec::Zero(1);
  int calls = 0;
  double last_t = -1.0;
  StepObserver obs{[&](int, double t, const Vec&, const Vec&) {
    ++calls;
    last_t = t;
  }};
  const Trajectory tr = integrate(d, f1, f2, 0.1, 1.0, obs);
  EXPECT_EQ(calls, tr.time.n_steps + 1);
  EXPECT_NEAR(last_t, 1.0, 1e-12);
}

TEST(Integrate, CflWarningBeyondTheBound) {
  Mat d = diagonal({-100.0});
  Vec f1 = Vec::Ones(1), f2 = Vec::Zero(1);
  const Trajectory tr = integrate(d, f1, f2, std::sqrt(12.5 / 100.0), 3.0 * std::sqrt(12.5 / 100.0));
  EXPECT_TRUE(tr.cfl_warning);
}
