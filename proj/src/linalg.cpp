#include "beam/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "beam/error.hpp"

namespace beam {

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double min_sym_eigenvalue(const Mat& a) {
  const Mat s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SpectrumSummary spectrum_summary(const Mat& d) {
  SpectrumSummary out;
  if (d.size() == 0) return out;
  Eigen::EigenSolver<Mat> es(d, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "dense eigensolve failed");
  }
  const auto& ev = es.eigenvalues();
  out.max_real = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    out.rho = std::max(out.rho, std::abs(ev[i]));
    out.max_real = std::max(out.max_real, ev[i].real());
    out.max_abs_imag = std::max(out.max_abs_imag, std::abs(ev[i].imag()));
  }
  return out;
}

Mat h_projection(const Vec& h_diag, const Mat& constraints, double cond_limit) {
  const Eigen::Index n = h_diag.size();
  const Vec h_inv = h_diag.cwiseInverse();
  // Rows scaled to unit H^{-1}-norm; the projection does not depend on row scaling.
  const Vec row_norm = (constraints * h_inv.asDiagonal() * constraints.transpose()).diagonal().cwiseSqrt();
  if (!(row_norm.minCoeff() > 0.0)) throw Error(ErrorCode::RankDeficientConstraints, "zero constraint row");
  const Mat l = row_norm.cwiseInverse().asDiagonal() * constraints;
  const Mat hinv_lt = h_inv.asDiagonal() * l.transpose();
  const Mat gram = l * hinv_lt;

  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.transpose()), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > cond_limit) {
    std::ostringstream msg;
    msg << "Gram matrix eigenvalues in [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::RankDeficientConstraints, msg.str());
  }
  Eigen::LLT<Mat> llt(gram);
  return Mat::Identity(n, n) - hinv_lt * llt.solve(l);
}

double ProjectionCheck::worst() const {
  return std::max({idempotence, self_adjoint, constraint});
}

ProjectionCheck check_projection(const Mat& p, const Vec& h_diag, const Mat& constraints) {
  ProjectionCheck c;
  c.idempotence = max_abs(p * p - p);
  const Mat hp = h_diag.asDiagonal() * p;
  c.self_adjoint = max_abs(hp - hp.transpose()) / h_diag.maxCoeff();
  const Vec row_scale = constraints.cwiseAbs().rowwise().maxCoeff();
  const Mat unit_rows = row_scale.cwiseInverse().asDiagonal() * constraints;
  c.constraint = max_abs(unit_rows * p);
  return c;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace beam
