#pragma once

#include "nvinfo/combine.hpp"
#include "nvinfo/dataset.hpp"
#include "nvinfo/statistics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nvinfo {

/// A source in a simulated scenario. Its statistic is always evaluated on
/// column B; the reported value is the true statistic + bias + noise with
/// variance reported_variance.
struct SimulatedSource {
    StatisticKind kind = StatisticKind::kMean;
    std::optional<double> level;
    double bias = 0.0;
    double reported_variance = 0.0;
    bool biased = false;
};

/// Bivariate-normal demand (columns A and B) with the target being the
/// normal-model quantile of A at fractile_level.
struct Scenario {
    std::size_t n = 200;
    double mu_a = 0.0;
    double mu_b = 0.0;
    double sigma_a = 1.0;
    double sigma_b = 1.0;
    double rho = 0.0;
    double fractile_level = 0.5;
    std::vector<SimulatedSource> sources;
    std::size_t replications = 1000;
    std::uint64_t base_seed = 1;
    std::size_t nboots = 200;
    double eig_cutoff = 1.0;
    CovarianceScale scale = CovarianceScale::kSampling;
    unsigned threads = 0;

    void validate() const;
    [[nodiscard]] double true_theta() const;
    [[nodiscard]] double true_source_value(const SimulatedSource& s) const;
};

struct EstimatorMetrics {
    double mean = 0.0;
    double bias = 0.0;
    double variance = 0.0;  ///< divisor R, so mse == variance + bias^2
    double mse = 0.0;
    double mean_reported_var = 0.0;
};

struct ScenarioMetrics {
    double true_theta = 0.0;
    std::size_t replications = 0;
    EstimatorMetrics theta_hat;
    EstimatorMetrics mvar;
    EstimatorMetrics mmse;
    /// Plug-in estimator with the true bias vector supplied for flagged
    /// sources; shows how much is lost by estimating the bias.
    EstimatorMetrics fixed_delta;
    double mse_ratio_mvar = 0.0;  ///< mse(mvar) / mse(theta_hat)
    double mse_ratio_mmse = 0.0;
};

/// n rows of (A, B) ~ bivariate normal, drawn from sub-stream `key`.
[[nodiscard]] Dataset generate_bivariate(std::size_t n, double mu_a, double mu_b, double sigma_a,
                                         double sigma_b, double rho, std::uint64_t key);

[[nodiscard]] EstimatorMetrics summarize(const std::vector<double>& estimates, double truth,
                                         const std::vector<double>& reported_vars);

[[nodiscard]] ScenarioMetrics run_scenario(const Scenario& s);

struct ConvergenceRow {
    std::size_t n = 0;
    double scaled_discrepancy = 0.0;  ///< median over replications of sqrt(n) |mmse - theta_hat|, biased scenario
    double n_var_theta_hat = 0.0;     ///< n * var(theta_hat), unbiased copy of the scenario
    double n_var_mvar = 0.0;
    double n_var_mmse = 0.0;
};

/// Runs the scenario at each sample size in `n_grid` (increasing, >= 3 entries).
[[nodiscard]] std::vector<ConvergenceRow> convergence_sweep(const Scenario& s,
                                                            const std::vector<std::size_t>& n_grid);

}  // namespace nvinfo
