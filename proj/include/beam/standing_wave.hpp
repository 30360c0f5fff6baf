#pragma once

#include <array>
#include <string>
#include <vector>

#include "beam/linalg.hpp"

namespace beam {

/// u(x, t) = cos(omega t) X(x), X = A1 cosh(bx) + A2 cos(bx) + A3 sin(bx) + A4 sinh(bx),
/// omega = beta^2 sqrt(a / b_density).
struct StandingWaveParams {
  double beta = 0.0;
  std::array<double, 4> A{};
  double a = 1.0;
  double b = 1.0;
  double x_l = 0.0;
  double x_r = 1.0;

  double omega() const;
};

struct PiecewiseStandingWave {
  StandingWaveParams block1;  // [-1, 0]
  StandingWaveParams block2;  // [0, 1]
};

/// d^k X / dx^k at x.
double mode_shape(const StandingWaveParams& p, double x, int derivative = 0);

double eval(const StandingWaveParams& p, double x, double t);
double eval_dt(const StandingWaveParams& p, double x, double t);

/// Samples of u(., t) on the given points.
Vec sample(const StandingWaveParams& p, const Vec& points, double t);

/// Named parameter sets shipped with the library: "clamped" (tabulated, see the data file),
/// "clamped_corrected", "free", "ring_block1", "ring_block2".
StandingWaveParams reference_wave(const std::string& name);
PiecewiseStandingWave reference_ring_wave();
std::string reference_wave_version();

struct ConditionResidual {
  std::string name;
  double residual = 0.0;
};

struct ResidualReport {
  std::vector<ConditionResidual> conditions;
  double max_residual = 0.0;
  bool passed = false;
};

/// Clamped: X = X' = 0 at both ends; free: X'' = X''' = 0 at both ends.
ResidualReport verify_params(const StandingWaveParams& p, const std::string& bc_kind, double tol = 1e-8);

/// Continuity of X, X', a X'', a X''' at x = 0 and across the periodic seam x = 1 ~ x = -1,
/// plus the frequency match.
ResidualReport verify_params(const PiecewiseStandingWave& p, double tol = 1e-8);

/// sqrt(h sum (u_i - v_i)^2).
double error_norm(const Vec& u_exact, const Vec& v, double h);

}  // namespace beam
