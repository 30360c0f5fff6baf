#include <algorithm>
#include <cfloat>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "beam/error.hpp"
#include "beam/experiments.hpp"

using namespace beam;

namespace {

ResultRow row(double h, double eps, const std::string& status = "ok") {
  ResultRow r;
  r.h = h;
  r.eps = eps;
  r.status = status;
  return r;
}

}  // namespace

TEST(Config, ParsesKeysAndLists) {
  const ExperimentConfig c = parse_config_text(
      "# comment\nexperiment = convergence\norder = 4, 6\nmethod = projection\nbc = free ring\n"
      "m_list = 21,41\nt_final = 0.5\ncfl_frac = 0.25\nalpha_II = 0.2\nalpha_III = 0.3\n");
  EXPECT_EQ(c.kind, ExperimentKind::Convergence);
  EXPECT_EQ(c.orders, (std::vector<int>{4, 6}));
  ASSERT_EQ(c.methods.size(), 1u);
  EXPECT_EQ(c.methods[0], Method::Projection);
  EXPECT_EQ(c.targets, (std::vector<std::string>{"free", "ring"}));
  EXPECT_EQ(c.m_list, (std::vector<int>{21, 41}));
  EXPECT_DOUBLE_EQ(c.t_final, 0.5);
  EXPECT_DOUBLE_EQ(c.cfl_frac, 0.25);
  ASSERT_TRUE(c.alphas.has_value());
  EXPECT_DOUBLE_EQ(c.alphas->alpha_III, 0.3);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config_text("colour = red\n"), Error);
  EXPECT_THROW(parse_config_text("order\n"), Error);
  EXPECT_THROW(parse_config_text("t_final = soon\n"), Error);
  EXPECT_THROW(parse_config_text("order = 8\n").validate(), Error);
  EXPECT_THROW(parse_config_text("bc = hinged\n").validate(), Error);
  EXPECT_THROW(parse_config_text("m_list = 41 21\n").validate(), Error);
  EXPECT_THROW(parse_config_text("cfl_frac = 1.5\n").validate(), Error);
  EXPECT_THROW(parse_experiment_kind("bogus"), Error);
}

TEST(Cases, SevenPerOrderByDefault) {
  ExperimentConfig c;
  c.orders = {4};
  const std::vector<Case> cases = expand_cases(c);
  EXPECT_EQ(cases.size(), 7u);
  int hybrid = 0;
  for (const Case& k : cases) {
    if (k.method == Method::Hybrid) {
      ++hybrid;
      EXPECT_EQ(k.target, "ring");
    }
  }
  EXPECT_EQ(hybrid, 1);
}

TEST(Cases, ReferenceTablesAndRates) {
  EXPECT_DOUBLE_EQ(expected_rate(2), 2.0);
  EXPECT_DOUBLE_EQ(expected_rate(4), 4.0);
  EXPECT_DOUBLE_EQ(expected_rate(6), 5.0);
  EXPECT_DOUBLE_EQ(reference_rho({4, Method::Sat, "clamped"}), 49.8208);
  EXPECT_DOUBLE_EQ(reference_rho({6, Method::Hybrid, "ring"}), 193.7828);
  ExperimentConfig c;
  EXPECT_DOUBLE_EQ(rho_tolerance({6, Method::Sat, "free"}, c), 1e-2);
  EXPECT_DOUBLE_EQ(rho_tolerance({6, Method::Projection, "ring"}, c), 1e-2);
  EXPECT_DOUBLE_EQ(rho_tolerance({6, Method::Projection, "free"}, c), 1e-3);
  EXPECT_DOUBLE_EQ(rho_tolerance({4, Method::Sat, "ring"}, c), 1e-3);
  EXPECT_EQ(wave_set_for("clamped"), "clamped_corrected");
}

TEST(Rates, FormulaAndSkipping) {
  std::vector<ResultRow> rows = {row(0.1, 1e-2), row(0.05, 1e-2 / 16.0), row(0.025, 1e-2 / 256.0),
                                 row(0.0125, 1e-6, "roundoff")};
  fill_rates(rows);
  EXPECT_FALSE(rows[0].rate.has_value());
  EXPECT_NEAR(*rows[1].rate, 4.0, 1e-12);
  EXPECT_NEAR(*rows[2].rate, 4.0, 1e-12);
  EXPECT_FALSE(rows[3].rate.has_value());
  EXPECT_NEAR(*finest_valid_rate(rows), 4.0, 1e-12);
}

TEST(Csv, HeaderAndEmptyOptionalColumns) {
  ExperimentResult res;
  ResultRow r = row(0.05, 1e-3);
  r.experiment = "convergence";
  r.order = 2;
  r.method = "sat";
  r.bc_or_interface = "free";
  r.m = 21;
  res.rows.push_back(r);
  std::istringstream in(to_csv(res));
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11);
  EXPECT_EQ(line.rfind("convergence,2,sat,free,21,", 0), 0u);
  EXPECT_NE(line.find(",,"), std::string::npos);
}

TEST(Runs, ShortConvergenceIsDeterministic) {
  ExperimentConfig c;
  c.kind = ExperimentKind::Convergence;
  c.orders = {2};
  c.targets = {"free"};
  c.methods = {Method::Sat};
  c.m_list = {21, 41, 81};
  const ExperimentResult a = run_experiment(c);
  const ExperimentResult b = run_experiment(c);
  EXPECT_EQ(to_csv(a), to_csv(b));
  ASSERT_EQ(a.rows.size(), 3u);
  ASSERT_TRUE(a.rows[2].rate.has_value());
  EXPECT_NEAR(*a.rows[2].rate, 2.0, 0.25);
}

TEST(Runs, WriteResultProducesCsvAndSidecar) {
  ExperimentConfig c;
  c.kind = ExperimentKind::Alphas;
  c.orders = {2};
  const ExperimentResult res = run_experiment(c);
  EXPECT_TRUE(res.passed());
  const auto dir = std::filesystem::temp_directory_path() / "beamsbp_write_test";
  std::filesystem::remove_all(dir);
  write_result(res, dir.string());
  std::ifstream csv(dir / "alphas.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_TRUE(std::filesystem::exists(dir / "alphas.provenance.json"));
  std::filesystem::remove_all(dir);
}

TEST(Runs, EnergyTraceDriftIsSmall) {
  ExperimentConfig c;
  c.kind = ExperimentKind::EnergyTrace;
  c.orders = {4};
  c.targets = {"clamped"};
  c.methods = {Method::Projection};
  const ExperimentResult res = run_experiment(c);
  ASSERT_EQ(res.rows.size(), 1u);
  ASSERT_TRUE(res.rows[0].energy_drift.has_value());
  EXPECT_LT(*res.rows[0].energy_drift, 1e-4);
  EXPECT_TRUE(res.passed());

  c.orders = {2};
  c.targets = {"ring"};
  c.methods = {Method::Sat};
  const ExperimentResult ring = run_experiment(c);
  EXPECT_TRUE(ring.passed());
}

TEST(Runs, AlphaScanFindsLargerRadiusForWeakerAlphas) {
  ExperimentConfig c;
  c.kind = ExperimentKind::AlphaScan;
  c.orders = {2};
  const ExperimentResult res = run_experiment(c);
  EXPECT_TRUE(res.passed()) << (res.failures.empty() ? "" : res.failures.front());
  EXPECT_FALSE(res.rows.empty());
}

TEST(Rates, RoundoffGuardBoundsTheRateShift) {
  const double f = roundoff_fraction_limit(0.25);
  EXPECT_NEAR(std::log2((1.0 + f) / (1.0 - f)), 0.125, 1e-12);
  RunOutcome run;
  run.u_norm = 1.0;
  run.eps = 1e-6;
  run.roundoff_estimate = 0.5 * f * run.eps;
  EXPECT_TRUE(pre_roundoff(run, 0.25));
  run.roundoff_estimate = 2.0 * f * run.eps;
  EXPECT_FALSE(pre_roundoff(run, 0.25));
  run.roundoff_estimate = 0.0;
  run.eps = 10.0 * DBL_EPSILON;
  EXPECT_FALSE(pre_roundoff(run, 0.25));
}
