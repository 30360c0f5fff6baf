#include <array>
#include <cmath>
#include <mutex>

#include "beam/error.hpp"
#include "beam/sbp.hpp"

namespace beam {

Grid build_grid(double x_l, double x_r, int m) {
  if (!(x_r > x_l)) throw Error(ErrorCode::InvalidDomain, "require x_r > x_l");
  if (m < 2) throw Error(ErrorCode::TooFewPoints, "require m >= 2");
  Grid g;
  g.x_l = x_l;
  g.x_r = x_r;
  g.m = m;
  g.h = (x_r - x_l) / (m - 1);
  g.points.resize(m);
  for (int i = 0; i < m; ++i) g.points[i] = x_l + i * g.h;
  g.points[m - 1] = x_r;
  return g;
}

namespace {

Vec left_vector(const std::vector<double>& c, int m, double scale) {
  Vec v = Vec::Zero(m);
  for (std::size_t i = 0; i < c.size(); ++i) v[static_cast<Eigen::Index>(i)] = c[i] * scale;
  return v;
}

Vec mirrored(const Vec& left) { return left.reverse(); }

}  // namespace

SbpOperatorSet build_sbp_d4(int order, const Grid& grid) {
  const ClosureData& c = closure_data(order);
  const int m = grid.m;
  if (m < minimum_points(order)) {
    throw Error(ErrorCode::GridTooSmall, "order " + std::to_string(order) + " needs m >= " +
                                             std::to_string(minimum_points(order)));
  }
  const double h = grid.h;
  const int w = c.half_width();
  const int b = static_cast<int>(c.block.rows());

  // h^3 N: interior stencil everywhere, then the two symmetric corner blocks.
  Mat scaled_n = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = std::max(0, i - w); j <= std::min(m - 1, i + w); ++j) scaled_n(i, j) = c.interior[j - i + w];
  }
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < b; ++j) {
      scaled_n(i, j) = c.block(i, j);
      scaled_n(m - 1 - i, m - 1 - j) = c.block(i, j);
    }
  }

  SbpOperatorSet ops;
  ops.order = order;
  ops.m = m;
  ops.h = h;
  ops.grid = grid;
  ops.data_version = c.version;
  ops.N = scaled_n / (h * h * h);

  ops.H = Vec::Constant(m, h);
  for (std::size_t i = 0; i < c.norm.size(); ++i) {
    ops.H[static_cast<Eigen::Index>(i)] = c.norm[i] * h;
    ops.H[m - 1 - static_cast<Eigen::Index>(i)] = c.norm[i] * h;
  }

  ops.e_l = Vec::Zero(m);
  ops.e_l[0] = 1.0;
  ops.e_r = mirrored(ops.e_l);
  ops.d1_l = left_vector(c.d1, m, 1.0 / h);
  ops.d2_l = left_vector(c.d2, m, 1.0 / (h * h));
  ops.d3_l = left_vector(c.d3, m, 1.0 / (h * h * h));
  // Reversing a one-sided stencil flips the sign of odd derivatives, so the
  // right vectors approximate +u_x, +u_xx and +u_xxx.
  ops.d1_r = mirrored(ops.d1_l);
  ops.d2_r = -mirrored(ops.d2_l);
  ops.d3_r = mirrored(ops.d3_l);

  const Mat rhs = ops.N + ops.e_l * ops.d3_l.transpose() + ops.d1_l * ops.d2_l.transpose() +
                  ops.e_r * ops.d3_r.transpose() - ops.d1_r * ops.d2_r.transpose();
  ops.D4 = ops.H.cwiseInverse().asDiagonal() * rhs;
  return ops;
}

Mat n_tilde(const SbpOperatorSet& ops, AlphaPair alphas) {
  const double h = ops.h;
  const Mat g2 = ops.d2_l * ops.d2_l.transpose() + ops.d2_r * ops.d2_r.transpose();
  const Mat g3 = ops.d3_l * ops.d3_l.transpose() + ops.d3_r * ops.d3_r.transpose();
  return ops.N - h * alphas.alpha_II * g2 - h * h * h * alphas.alpha_III * g3;
}

bool is_feasible(const SbpOperatorSet& ops, AlphaPair alphas, double tol) {
  const double scale = std::max(1.0, max_abs(ops.N));
  return min_sym_eigenvalue(n_tilde(ops, alphas)) >= -tol * scale;
}

namespace {

double bisect_alpha(const Mat& half_n, const Mat& g, double scale, double tol) {
  auto ok = [&](double alpha) { return min_sym_eigenvalue(half_n - alpha * scale * g) >= -tol; };
  double lo = 0.0, hi = 10.0;
  if (!ok(lo)) throw Error(ErrorCode::BisectionFailure, "N/2 is not positive semidefinite");
  if (ok(hi)) return hi;
  for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  if (!(lo > 0.0)) throw Error(ErrorCode::BisectionFailure, "no positive feasible alpha");
  return lo;
}

}  // namespace

AlphaPair compute_standard_alphas(const SbpOperatorSet& ops) {
  const double h = ops.h;
  const Mat half_n = 0.5 * ops.N;
  const double tol = 1e-10 * max_abs(ops.N);
  const Mat g2 = ops.d2_l * ops.d2_l.transpose() + ops.d2_r * ops.d2_r.transpose();
  const Mat g3 = ops.d3_l * ops.d3_l.transpose() + ops.d3_r * ops.d3_r.transpose();
  return {bisect_alpha(half_n, g2, h, tol), bisect_alpha(half_n, g3, h * h * h, tol)};
}

AlphaPair standard_alphas(int order) {
  static std::array<AlphaPair, 3> cache;
  static std::array<std::once_flag, 3> once;
  const ClosureData& c = closure_data(order);
  const int k = order / 2 - 1;
  std::call_once(once[k], [&] {
    const int m = std::max(41, 2 * c.closure_width() + 1);
    cache[k] = compute_standard_alphas(build_sbp_d4(order, build_grid(0.0, 1.0, m)));
  });
  return cache[k];
}

OperatorReport verify_operator(const SbpOperatorSet& ops) {
  OperatorReport r;
  r.order = ops.order;
  r.m = ops.m;
  const Mat lhs = ops.H.asDiagonal() * ops.D4;
  const Mat rhs = ops.N + ops.e_l * ops.d3_l.transpose() + ops.d1_l * ops.d2_l.transpose() +
                  ops.e_r * ops.d3_r.transpose() - ops.d1_r * ops.d2_r.transpose();
  r.identity_residual = max_abs(lhs - rhs) / max_abs(lhs);
  r.n_asymmetry = max_abs(ops.N - ops.N.transpose());
  r.n_min_eigenvalue = min_sym_eigenvalue(ops.N) / max_abs(ops.N);
  const double length = ops.grid.x_r - ops.grid.x_l;
  r.quadrature_error = std::abs(ops.H.sum() - length) / length;

  const int width = closure_data(ops.order).closure_width();
  const Vec& x = ops.grid.points;
  for (int k = 0; k <= 4; ++k) {
    const Vec p = x.array().pow(k).matrix();
    const Vec dp = ops.D4 * p;
    for (int i = width; i < ops.m - width; ++i) {
      // Roundoff scale of the row product.
      const double mag = (ops.D4.row(i).cwiseAbs() * p.cwiseAbs()).value();
      if (k == 4) {
        r.interior_quartic_error = std::max(r.interior_quartic_error, std::abs(dp[i] - 24.0) / mag);
      } else {
        r.interior_cubic_residual = std::max(r.interior_cubic_residual, std::abs(dp[i]) / mag);
      }
    }
  }
  r.passed = r.identity_residual < 1e-12 && r.n_asymmetry == 0.0 && r.n_min_eigenvalue >= -1e-10 &&
             r.quadrature_error < 1e-13 && r.interior_quartic_error < 1e-12 &&
             r.interior_cubic_residual < 1e-12;
  return r;
}

}  // namespace beam
