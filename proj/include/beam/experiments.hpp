#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beam/boundary.hpp"
#include "beam/interface.hpp"

namespace beam {

enum class ExperimentKind { VerifyOperators, Alphas, Convergence, SpectralTable, AlphaScan, EnergyTrace };

const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SpectralTable;
  std::vector<int> orders = {2, 4, 6};
  std::vector<Method> methods;       // empty: every method valid for the geometry
  std::vector<std::string> targets;  // "clamped", "free", "ring"; empty: all three
  std::vector<int> m_list;  // empty: the experiment's default ladder
  double t_final = 1.0;
  double cfl_frac = 0.5;
  std::string out_dir;  // empty: do not write files
  double rho_tol = 1e-3;
  double rho_tol_order6_sat = 1e-2;
  double rate_tol = 0.25;
  double drift_tol = 1e-4;
  std::optional<AlphaPair> alphas;  // overrides the standard alphas for SAT
  std::vector<double> alpha_fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2};
  int scan_m = 21;
  std::vector<int> spectral_levels = {41, 81, 161, 321};

  void validate() const;
};

/// Flat "key = value" text. Recognised keys mirror the CLI flags:
/// experiment, order, method, bc, m_list, t_final, cfl_frac, out, rho_tol, rate_tol, drift_tol,
/// alpha_II, alpha_III, scan_m, spectral_levels. Lists are comma or space separated.
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

struct ResultRow {
  std::string experiment;
  int order = 0;
  std::string method;
  std::string bc_or_interface;
  int m = 0;
  double h = 0.0;
  double k = 0.0;
  double eps = 0.0;
  std::optional<double> rate;
  double rho_undivided = 0.0;
  std::optional<double> energy_drift;
  std::string status;
  std::map<std::string, std::string> provenance;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::SpectralTable;
  std::vector<ResultRow> rows;
  std::vector<std::string> failures;
  std::map<std::string, std::string> metadata;

  bool passed() const { return failures.empty(); }
};

inline constexpr const char* kCsvHeader =
    "experiment,order,method,bc_or_interface,m,h,k,eps,rate,rho_undivided,energy_drift,status";

std::string to_csv(const ExperimentResult& result);
/// Writes <dir>/<kind>.csv and <dir>/<kind>.provenance.json.
void write_result(const ExperimentResult& result, const std::string& dir);

/// A single configuration of the benchmark problems.
struct Case {
  int order = 2;
  Method method = Method::Sat;
  std::string target;  // "clamped", "free" or "ring"
};

std::vector<Case> expand_cases(const ExperimentConfig& config);

/// Assembled system for a case at m points per block, using the config's alphas or the standard ones.
SemiDiscreteSystem assemble_case(const Case& c, int m, const std::optional<AlphaPair>& alphas = std::nullopt);

/// Reference undivided spectral radius for a case.
double reference_rho(const Case& c);
double rho_tolerance(const Case& c, const ExperimentConfig& config);
/// 2, 4 or 5 for orders 2, 4, 6.
double expected_rate(int order);
/// Reference (alpha_II, alpha_III), to three decimals.
AlphaPair reference_alphas(int order);

struct ConvergedRho {
  std::vector<int> m;
  std::vector<double> raw;
  double value = 0.0;   // extrapolation from the three finest levels
  double check = 0.0;   // extrapolation from the three coarsest levels
  double max_real_ratio = 0.0;  // max Re(lambda) / rho over levels
  double max_imag_ratio = 0.0;  // max |Im(lambda)| / rho over levels
};

/// rho(h^4 D) at several m, extrapolated to h -> 0 with a + b h^2 + c h^3 fits.
ConvergedRho converged_rho(const Case& c, const std::vector<int>& levels,
                           const std::optional<AlphaPair>& alphas = std::nullopt);

struct RunOutcome {
  double eps = 0.0;
  double u_norm = 0.0;             // discrete norm of the exact solution at t_final
  double roundoff_estimate = 0.0;  // |v - v~| for a run with D perturbed entrywise at machine precision
  double k = 0.0;
  double rho_undivided = 0.0;
  double energy_drift = 0.0;
  int n_steps = 0;
};

/// Name of the standing-wave set that initialises and scores a target.
std::string wave_set_for(const std::string& target);

struct RunOptions {
  bool track_energy = false;
  bool estimate_roundoff = false;
};

/// Integrates the case from its standing-wave initial data to t_final with k = cfl_frac k_max.
RunOutcome run_case(const Case& c, int m, double t_final, double cfl_frac, RunOptions options = {},
                    const std::optional<AlphaPair>& alphas = std::nullopt);

/// Largest roundoff share f of eps for which the rate over a halving, log2((1+f)/(1-f)),
/// moves by at most rate_tol / 2.
double roundoff_fraction_limit(double rate_tol);

/// A row is pre-roundoff when eps > 100 machine-eps |u| and the perturbed-operator shadow run
/// differs from the solution by less than roundoff_fraction_limit(rate_tol) * eps.
bool pre_roundoff(const RunOutcome& run, double rate_tol);

/// Observed rate between consecutive rows of one case whose status is "ok".
void fill_rates(std::vector<ResultRow>& rows);

/// Rate from the finest consecutive pair whose errors both pass the roundoff guard.
std::optional<double> finest_valid_rate(const std::vector<ResultRow>& rows);

/// Grid sizes a run uses when m_list is empty.
std::vector<int> default_m_list(ExperimentKind kind);

ExperimentResult run_verify_operators(const ExperimentConfig& config);
ExperimentResult run_alphas(const ExperimentConfig& config);
ExperimentResult run_convergence(const ExperimentConfig& config);
ExperimentResult run_spectral_table(const ExperimentConfig& config);
ExperimentResult run_alpha_scan(const ExperimentConfig& config);
ExperimentResult run_energy_trace(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace beam
