#pragma once

#include "nvinfo/dataset.hpp"
#include "nvinfo/spectral.hpp"
#include "nvinfo/statistics.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nvinfo {

struct BootstrapSettings {
    std::size_t nboots = 5000;
    std::uint64_t seed = 123;
    /// Worker threads for replicate evaluation; 0 = hardware concurrency.
    /// Results do not depend on this value.
    unsigned threads = 0;

    void validate() const;
};

/// Joint bootstrap covariance of (theta_hat, eta_hat_1..m), divisor nboots-1.
struct BootstrapCov {
    double var_theta = 0.0;
    std::vector<double> cov_theta_eta;
    SymMatrix cov_eta{1};
};

/// Maximum consecutive undefined resamples tolerated for one replicate.
inline constexpr int kMaxReplicateRetries = 100;

/// Resamples rows of `d` with replacement `settings.nboots` times, evaluates
/// the target and every source statistic on the same resample, and returns
/// their sample covariances. Replicate b draws from sub-stream (seed, b,
/// attempt); a resample on which a statistic is undefined is redrawn from the
/// next attempt's stream. Bit-identical for a given seed regardless of threads.
[[nodiscard]] BootstrapCov bootstrap_joint(const Dataset& d, const StatisticDescriptor& target,
                                           const std::vector<StatisticDescriptor>& sources,
                                           const BootstrapSettings& settings);

/// Raw replicate table (nboots rows of 1 + m values) behind bootstrap_joint.
[[nodiscard]] std::vector<std::vector<double>> bootstrap_replicates(
    const Dataset& d, const std::vector<StatisticDescriptor>& statistics,
    const BootstrapSettings& settings);

/// Draws n indices uniformly from [0, n) on the given sub-stream key.
[[nodiscard]] std::vector<std::size_t> draw_indices(std::size_t n, std::uint64_t key);

}  // namespace nvinfo
