#include <cmath>
#include <iostream>
#include <limits>

#include <Eigen/SparseCore>

#include "beam/error.hpp"
#include "beam/time_stepper.hpp"

namespace beam {

namespace {

double power_iteration_radius(const Mat& d) {
  const Eigen::Index n = d.rows();
  Vec v(n);
  // Deterministic, non-degenerate start vector.
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 100000; ++it) {
    // Two applications per sweep so that eigenvalues of both signs converge monotonically.
    const Vec w = d * (d * v);
    const double next = std::sqrt(w.norm());
    if (next == 0.0) return 0.0;
    v = w / w.norm();
    if (it > 0 && std::abs(next - estimate) <= 1e-10 * next) return next;
    estimate = next;
  }
  throw Error(ErrorCode::NonConvergence, "power iteration did not converge");
}

}  // namespace

double spectral_radius(const Mat& d) {
  if (d.rows() != d.cols()) throw Error(ErrorCode::LengthMismatch, "spectral radius of a non-square matrix");
  if (d.size() == 0) return 0.0;
  if (d.rows() <= 2000) return spectrum_summary(d).rho;
  return power_iteration_radius(d);
}

double max_stable_dt(double rho) {
  if (rho < 0.0) throw Error(ErrorCode::IncompatibleSpec, "negative spectral radius");
  if (rho == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(12.0 / rho);
}

TimeGrid make_time_grid(double k_target, double t_final) {
  if (!(k_target > 0.0) || !(t_final > 0.0)) throw Error(ErrorCode::IncompatibleSpec, "k and t_final must be positive");
  TimeGrid g;
  g.t_final = t_final;
  g.n_steps = std::isinf(k_target) ? 1 : static_cast<int>(std::ceil(t_final / k_target - 1e-12));
  g.n_steps = std::max(g.n_steps, 1);
  g.k = t_final / g.n_steps;
  return g;
}

std::pair<Vec, Vec> advance(const Mat& d, Vec prev, Vec cur, double k, int n_steps) {
  if (d.rows() != cur.size() || d.cols() != cur.size() || prev.size() != cur.size()) {
    throw Error(ErrorCode::LengthMismatch, "state and operator sizes differ");
  }
  const Eigen::SparseMatrix<double> ds = d.sparseView(0.0, 0.0);
  for (int n = 0; n < n_steps; ++n) {
    const Vec dv = ds * cur;
    Vec next = 2.0 * cur + k * k * dv + (k * k * k * k / 12.0) * (ds * dv) - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {std::move(prev), std::move(cur)};
}

Trajectory integrate(const Mat& d, const Vec& f1, const Vec& f2, double k, double t_final,
                     const StepObserver& observer, double rho_hint) {
  if (d.rows() != f1.size() || d.cols() != f1.size() || f2.size() != f1.size()) {
    throw Error(ErrorCode::LengthMismatch, "state and operator sizes differ");
  }
  Trajectory out;
  out.time = make_time_grid(k, t_final);
  out.initial = f1;
  const double dt = out.time.k;

  const double rho = rho_hint >= 0.0 ? rho_hint : spectral_radius(d);
  const double courant = dt * dt * rho;
  if (courant >= 12.0 * 0.99) {
    out.cfl_warning = true;
    std::cerr << "warning: k^2 rho = " << courant << " is at or beyond the stability limit 12\n";
  }

  const Eigen::SparseMatrix<double> ds = d.sparseView(0.0, 0.0);
  auto apply = [&](const Vec& x) -> Vec { return ds * x; };

  const double limit = 1e6 * std::max(f1.norm(), f2.norm() * dt);
  Vec prev = f1;
  const Vec df1 = apply(f1);
  const Vec df2 = apply(f2);
  const double k2 = dt * dt;
  Vec cur = f1 + 0.5 * k2 * df1 + (k2 * k2 / 24.0) * apply(df1) +
            dt * (f2 + (k2 / 6.0) * df2 + (k2 * k2 / 120.0) * apply(df2));
  if (observer.on_step) {
    observer.on_step(0, 0.0, prev, Vec());
    observer.on_step(1, dt, cur, prev);
  }
  for (int n = 1; n < out.time.n_steps; ++n) {
    const Vec dv = apply(cur);
    Vec next = 2.0 * cur + dt * dt * dv + (dt * dt * dt * dt / 12.0) * apply(dv) - prev;
    prev = std::move(cur);
    cur = std::move(next);
    if (observer.on_step) observer.on_step(n + 1, (n + 1) * dt, cur, prev);
    if ((n & 255) == 0 && !(cur.norm() <= limit)) {
      throw Error(ErrorCode::InstabilityDetected,
                  "solution norm exceeded 1e6 x initial data at t = " + std::to_string((n + 1) * dt));
    }
  }
  if (!(cur.norm() <= limit)) throw Error(ErrorCode::InstabilityDetected, "solution norm exceeded bound");
  out.final = cur;
  out.previous = prev;
  return out;
}

}  // namespace beam
