#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "beam/linalg.hpp"

namespace beam {

struct Grid {
  double x_l = 0.0;
  double x_r = 1.0;
  int m = 0;
  double h = 0.0;
  Vec points;
};

Grid build_grid(double x_l, double x_r, int m);

/// Boundary closure of a fourth-derivative SBP operator, with unit spacing.
///
/// `block` is the symmetric leading corner of h^3 N. Outside it, h^3 N follows the
/// interior stencil. The d-vectors are the left-boundary stencils in the sign
/// convention d1_l^T v ~ -u_x, d2_l^T v ~ -u_xx, d3_l^T v ~ -u_xxx.
struct ClosureData {
  int order = 0;
  std::string version;
  std::vector<double> interior;  // h^4 D4 interior stencil, length 2w+1
  std::vector<double> norm;      // leading diagonal weights of H/h
  std::vector<double> d1, d2, d3;
  Mat block;

  int half_width() const { return static_cast<int>(interior.size() / 2); }
  /// Number of rows at each end that differ from the interior scheme.
  int closure_width() const;
};

ClosureData parse_closure_data(std::string_view text);

/// Embedded closure for order 2, 4 or 6.
const ClosureData& closure_data(int order);

/// Smallest m with non-overlapping left and right closures.
int minimum_points(int order);

struct SbpOperatorSet {
  int order = 0;
  int m = 0;
  double h = 0.0;
  Grid grid;
  std::string data_version;
  Vec H;  // diagonal of the norm matrix
  Mat D4;
  Mat N;
  Vec e_l, e_r;
  Vec d1_l, d1_r, d2_l, d2_r, d3_l, d3_r;

  Mat norm_matrix() const { return H.asDiagonal(); }
  Vec h_inv() const { return H.cwiseInverse(); }
};

SbpOperatorSet build_sbp_d4(int order, const Grid& grid);

struct AlphaPair {
  double alpha_II = 0.0;
  double alpha_III = 0.0;
};

/// N - h a_II (d2l d2l^T + d2r d2r^T) - h^3 a_III (d3l d3l^T + d3r d3r^T).
Mat n_tilde(const SbpOperatorSet& ops, AlphaPair alphas);

/// Smallest eigenvalue of n_tilde(...) >= -tol * max(1, max|N|).
bool is_feasible(const SbpOperatorSet& ops, AlphaPair alphas, double tol = 1e-10);

/// Largest alphas keeping N/2 - h a_II G2 and N/2 - h^3 a_III G3 positive semidefinite,
/// each found by bisection on [0, 10].
AlphaPair compute_standard_alphas(const SbpOperatorSet& ops);

/// Standard alphas of the embedded operator for `order`, evaluated once and cached.
AlphaPair standard_alphas(int order);

struct OperatorReport {
  int order = 0;
  int m = 0;
  double identity_residual = 0.0;    // relative max-norm of H D4 - (N + boundary terms)
  double n_asymmetry = 0.0;          // max|N - N^T|
  double n_min_eigenvalue = 0.0;     // relative to max|N|
  double quadrature_error = 0.0;     // |1^T H 1 - (x_r - x_l)| / (x_r - x_l)
  double interior_quartic_error = 0.0;  // max |D4 x^4 - 24| over interior rows, relative
  double interior_cubic_residual = 0.0; // max |D4 p| over interior rows, p in {1, x, x^2, x^3}
  bool passed = false;
};

OperatorReport verify_operator(const SbpOperatorSet& ops);

}  // namespace beam
