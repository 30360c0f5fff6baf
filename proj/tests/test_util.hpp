#pragma once

#include <random>

#include "beam/linalg.hpp"

namespace beam::testutil {

inline Vec random_vec(std::mt19937& rng, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

/// max over random (v, v_t) of |v_t^T (M D + K) v| / (max|M D| |v| |v_t|), the scaled energy rate
/// for E = v_t^T M v_t + v^T K v along v_tt = D v.
inline double worst_energy_rate(const Vec& mass, const Mat& d, const Mat& k, int samples = 100,
                                unsigned seed = 20240917u) {
  std::mt19937 rng(seed);
  const Mat md = mass.asDiagonal() * d;
  const Mat form = md + k;
  const double scale = max_abs(md);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec v = random_vec(rng, d.rows());
    const Vec vt = random_vec(rng, d.rows());
    worst = std::max(worst, std::abs(vt.dot(form * v)) / (scale * v.norm() * vt.norm()));
  }
  return worst;
}

}  // namespace beam::testutil
