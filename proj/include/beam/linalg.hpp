#pragma once

#include <Eigen/Dense>

namespace beam {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

double max_abs(const Mat& a);

/// Smallest eigenvalue of (a + a^T)/2.
double min_sym_eigenvalue(const Mat& a);

struct SpectrumSummary {
  double rho = 0.0;           // max |lambda|
  double max_real = 0.0;      // max Re(lambda)
  double max_abs_imag = 0.0;  // max |Im(lambda)|
};

/// Dense nonsymmetric eigensolve of a square matrix.
SpectrumSummary spectrum_summary(const Mat& d);

/// P = I - H^{-1} L^T (L H^{-1} L^T)^{-1} L for diagonal H given by its diagonal.
/// Throws RankDeficientConstraints when the Gram matrix has condition number above cond_limit.
Mat h_projection(const Vec& h_diag, const Mat& constraints, double cond_limit = 1e12);

struct ProjectionCheck {
  double idempotence = 0.0;    // max|P^2 - P|
  double self_adjoint = 0.0;   // max|H P - P^T H|
  double constraint = 0.0;     // max|L P|
  double worst() const;
};

ProjectionCheck check_projection(const Mat& p, const Vec& h_diag, const Mat& constraints);

/// Block diagonal matrix with two equally sized blocks.
Mat block_diag(const Mat& a, const Mat& b);

}  // namespace beam
