#pragma once

#include "nvinfo/dataset.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nvinfo {

enum class StatisticKind { kMean, kMedian, kEmpiricalQuantile, kNormalQuantile };

/// Declarative recipe for a scalar statistic of one dataset column.
struct StatisticDescriptor {
    StatisticKind kind = StatisticKind::kMean;
    std::string column;
    std::optional<double> level;  ///< Quantile kinds only, in (0, 1).

    static StatisticDescriptor mean(std::string column);
    static StatisticDescriptor median(std::string column);
    static StatisticDescriptor empirical_quantile(std::string column, double level);
    static StatisticDescriptor normal_quantile(std::string column, double level);

    /// Checks the kind/level pairing; throws InputError.
    void validate() const;

    friend bool operator==(const StatisticDescriptor&, const StatisticDescriptor&) = default;
};

[[nodiscard]] bool is_quantile_kind(StatisticKind kind) noexcept;
[[nodiscard]] std::string describe(const StatisticDescriptor& s);

/// Evaluates `s` on `d`. Throws InputError for an unknown column or invalid
/// descriptor and NumericError for a zero-variance NormalQuantile column.
[[nodiscard]] double eval_statistic(const StatisticDescriptor& s, const Dataset& d);

// Column-level primitives. All require a non-empty span; variance-based ones
// require at least two values.
[[nodiscard]] double mean(std::span<const double> x);
[[nodiscard]] double sample_variance(std::span<const double> x);  ///< divisor n-1
[[nodiscard]] double sample_sd(std::span<const double> x);
/// Average of the two middle order statistics for even n.
[[nodiscard]] double median(std::span<const double> x);
/// Linear interpolation between order statistics at rank h = (n-1)*level + 1.
[[nodiscard]] double empirical_quantile(std::span<const double> x, double level);
/// Pearson correlation; NaN when either series has zero variance.
[[nodiscard]] double correlation(std::span<const double> x, std::span<const double> y);

// Standard normal family.
[[nodiscard]] double normal_cdf(double z) noexcept;
[[nodiscard]] double normal_pdf(double z) noexcept;
/// Inverse of normal_cdf. Throws InputError unless 0 < p < 1.
[[nodiscard]] double normal_inverse_cdf(double p);

}  // namespace nvinfo
