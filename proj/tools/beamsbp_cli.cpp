#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beam/error.hpp"
#include "beam/experiments.hpp"

namespace {

struct Flags {
  std::vector<int> orders;
  std::vector<std::string> methods;
  std::vector<std::string> bcs;
  std::vector<int> m_list;
  double t_final = 0.0;
  double cfl_frac = 0.0;
  std::string out;
  std::string config;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--order", f.orders, "Operator orders (2, 4, 6)")->delimiter(',');
  sub->add_option("--method", f.methods, "sat, projection, hybrid")->delimiter(',');
  sub->add_option("--bc", f.bcs, "clamped, free, ring")->delimiter(',');
  sub->add_option("--m-list", f.m_list, "Grid points per block, increasing")->delimiter(',');
  sub->add_option("--t-final", f.t_final, "Final time");
  sub->add_option("--cfl-frac", f.cfl_frac, "Time step as a fraction of the stability limit");
  sub->add_option("--out", f.out, "Directory for CSV and provenance output");
  sub->add_option("--config", f.config, "key = value configuration file; flags override it");
}

beam::ExperimentConfig resolve(beam::ExperimentKind kind, const Flags& f) {
  beam::ExperimentConfig cfg;
  if (!f.config.empty()) cfg = beam::load_config_file(f.config, cfg);
  cfg.kind = kind;
  if (!f.orders.empty()) cfg.orders = f.orders;
  if (!f.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : f.methods) cfg.methods.push_back(beam::parse_method(m));
  }
  if (!f.bcs.empty()) cfg.targets = f.bcs;
  if (!f.m_list.empty()) cfg.m_list = f.m_list;
  if (f.t_final > 0.0) cfg.t_final = f.t_final;
  if (f.cfl_frac > 0.0) cfg.cfl_frac = f.cfl_frac;
  if (!f.out.empty()) cfg.out_dir = f.out;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourth-derivative SBP beam solver: operator checks and benchmark experiments"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<beam::ExperimentKind, const char*>> kinds = {
      {beam::ExperimentKind::VerifyOperators, "Check the SBP identity, N >= 0 and quadrature for each order"},
      {beam::ExperimentKind::Alphas, "Compute the largest admissible alpha_II, alpha_III per order"},
      {beam::ExperimentKind::Convergence, "Grid refinement study against standing-wave solutions"},
      {beam::ExperimentKind::SpectralTable, "Grid-converged spectral radius of h^4 D per scheme"},
      {beam::ExperimentKind::AlphaScan, "Clamped SAT error and spectral radius over scaled alphas"},
      {beam::ExperimentKind::EnergyTrace, "Relative drift of the discrete energy over time"}};
  std::vector<std::pair<CLI::App*, beam::ExperimentKind>> subs;
  for (auto [k, help] : kinds) {
    CLI::App* sub = app.add_subcommand(beam::to_string(k), help);
    add_common(sub, flags);
    subs.emplace_back(sub, k);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    beam::ExperimentKind kind = kinds.front().first;
    for (const auto& [sub, k] : subs) {
      if (sub->parsed()) kind = k;
    }
    const beam::ExperimentConfig cfg = resolve(kind, flags);
    const beam::ExperimentResult res = beam::run_experiment(cfg);
    std::cout << beam::to_csv(res);
    for (const auto& f : res.failures) std::cerr << "FAIL: " << f << '\n';
    std::cerr << beam::to_string(kind) << ": " << (res.passed() ? "all checks passed" : "checks failed") << '\n';
    return res.passed() ? 0 : 1;
  } catch (const beam::Error& e) {
    std::cerr << "error [" << beam::to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  }
}
