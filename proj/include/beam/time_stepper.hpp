#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "beam/linalg.hpp"

namespace beam {

/// Largest |lambda| of a square matrix. Dense eigensolve up to n = 2000, power iteration beyond.
double spectral_radius(const Mat& d);

/// sqrt(12 / rho); +infinity when rho == 0.
double max_stable_dt(double rho);

struct TimeGrid {
  double k = 0.0;
  int n_steps = 0;
  double t_final = 0.0;
};

/// Shrinks k_target so that an integer number of steps lands on t_final.
TimeGrid make_time_grid(double k_target, double t_final);

struct StepObserver {
  /// Called with (step index n, time t_n, v^n, v^{n-1}); v^{-1} is empty at n = 0.
  std::function<void(int, double, const Vec&, const Vec&)> on_step;
};

struct Trajectory {
  TimeGrid time;
  Vec initial;   // f1
  Vec final;     // v at t_final
  Vec previous;  // v one step before t_final
  bool cfl_warning = false;
};

/// Applies v^{n+1} = (2I + k^2 D + k^4/12 D^2) v^n - v^{n-1} n_steps times to (prev, cur)
/// and returns the final (prev, cur). Swapping the returned pair and advancing again runs time backwards.
std::pair<Vec, Vec> advance(const Mat& d, Vec prev, Vec cur, double k, int n_steps);

/// v0 = f1, v1 = (I + k^2/2 D + k^4/24 D^2) f1 + k (I + k^2/6 D + k^4/120 D^2) f2,
/// v^{n+1} = (2I + k^2 D + k^4/12 D^2) v^n - v^{n-1}.
/// The D^2 terms in v1 keep the start-up error at O(k^5), which the two-step recurrence
/// turns into an O(k^4) global error.
Trajectory integrate(const Mat& d, const Vec& f1, const Vec& f2, double k, double t_final,
                     const StepObserver& observer = {}, double rho_hint = -1.0);

}  // namespace beam
