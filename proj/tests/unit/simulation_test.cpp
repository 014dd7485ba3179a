#include "nvinfo/errors.hpp"
#include "nvinfo/serialization.hpp"
#include "nvinfo/simulation.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace nvinfo {
namespace {

Scenario load_scenario(const std::string& name) {
    std::ifstream in(testing::fixture(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(parse_json_text(ss.str(), name));
}

void expect_decomposition(const EstimatorMetrics& m) {
    EXPECT_NEAR(m.mse, m.variance + m.bias * m.bias, 1e-9 * m.mse);
}

TEST(Simulation, BivariateGeneratorMoments) {
    const Dataset d = generate_bivariate(1000000, 50.0, -20.0, 3.0, 7.0, 0.6, 12345);
    const auto a = d.column("A");
    const auto b = d.column("B");
    EXPECT_NEAR(correlation(a, b), 0.6, 0.01);
    EXPECT_NEAR(mean(a) / 50.0, 1.0, 0.005);
    EXPECT_NEAR(mean(b) / -20.0, 1.0, 0.005);
    EXPECT_NEAR(sample_sd(a) / 3.0, 1.0, 0.005);
    EXPECT_NEAR(sample_sd(b) / 7.0, 1.0, 0.005);
}

TEST(Simulation, SummarizeDecomposesMse) {
    const auto m = summarize({1.0, 2.0, 4.0, 7.0}, 3.0, {1.0, 1.0, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(m.mean, 3.5);
    EXPECT_DOUBLE_EQ(m.bias, 0.5);
    EXPECT_DOUBLE_EQ(m.mse, (4.0 + 1.0 + 1.0 + 16.0) / 4.0);
    expect_decomposition(m);
}

TEST(Simulation, UnbiasedScenarioImprovesMse) {
    const auto m = run_scenario(load_scenario("sim_unbiased.json"));
    EXPECT_LT(m.mse_ratio_mvar, 0.95);
    EXPECT_EQ(m.mvar.mse, m.mmse.mse);  // no biased flags: identical estimators
    expect_decomposition(m.theta_hat);
    expect_decomposition(m.mvar);
    expect_decomposition(m.mmse);
    // The reported variance tracks the realized one.
    EXPECT_NEAR(m.mvar.mean_reported_var / m.mvar.variance, 1.0, 0.25);
}

TEST(Simulation, IrrelevantScenarioNoImprovement) {
    const auto m = run_scenario(load_scenario("sim_irrelevant.json"));
    EXPECT_GE(m.mse_ratio_mvar, 0.9);
    EXPECT_LE(m.mse_ratio_mvar, 1.15);
}

TEST(Simulation, GrossBiasScenarioMmseBeatsMvar) {
    const auto m = run_scenario(load_scenario("sim_gross_bias.json"));
    EXPECT_LT(m.mmse.mse, m.mvar.mse);
    EXPECT_LT(m.mse_ratio_mmse, 1.1);
    expect_decomposition(m.fixed_delta);
}

TEST(Simulation, DeterministicAcrossThreads) {
    Scenario s = load_scenario("sim_unbiased.json");
    s.replications = 100;
    s.threads = 1;
    const auto a = run_scenario(s);
    s.threads = 4;
    const auto b = run_scenario(s);
    EXPECT_EQ(a.mvar.mse, b.mvar.mse);
    EXPECT_EQ(a.theta_hat.mean, b.theta_hat.mean);
    EXPECT_EQ(a.mmse.mean_reported_var, b.mmse.mean_reported_var);
}

TEST(Simulation, ScenarioValidation) {
    Scenario s = load_scenario("sim_unbiased.json");
    s.rho = 1.0;
    EXPECT_THROW(s.validate(), InputError);
    s = load_scenario("sim_unbiased.json");
    s.replications = 99;
    EXPECT_THROW(s.validate(), InputError);
    s = load_scenario("sim_unbiased.json");
    s.sigma_b = 0.0;
    EXPECT_THROW(s.validate(), InputError);
    s = load_scenario("sim_unbiased.json");
    s.sources.clear();
    EXPECT_THROW(s.validate(), InputError);
}

TEST(ConvergenceSweep, BiasedDiscrepancyShrinksAndVarianceOrdering) {
    Scenario s = load_scenario("sim_gross_bias.json");
    s.replications = 200;
    const auto rows = convergence_sweep(s, {100, 400, 1600});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GT(rows[0].scaled_discrepancy, rows[1].scaled_discrepancy);
    EXPECT_GT(rows[1].scaled_discrepancy, rows[2].scaled_discrepancy);
    for (const auto& r : rows) {
        EXPECT_LT(r.n_var_mvar, r.n_var_theta_hat) << "n=" << r.n;
        EXPECT_GE(r.n_var_mmse, r.n_var_mvar) << "n=" << r.n;
    }
}

TEST(ConvergenceSweep, GridValidation) {
    const Scenario s = load_scenario("sim_unbiased.json");
    EXPECT_THROW((void)convergence_sweep(s, {100, 400}), InputError);
    EXPECT_THROW((void)convergence_sweep(s, {100, 400, 400}), InputError);
    EXPECT_THROW((void)convergence_sweep(s, {400, 100, 1600}), InputError);
}

}  // namespace
}  // namespace nvinfo
