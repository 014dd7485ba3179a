#pragma once

#include "nvinfo/dataset.hpp"

#include <string>

namespace nvinfo {

struct NewsvendorInstance {
    double unit_price = 0.0;  ///< selling price p
    double unit_cost = 0.0;   ///< purchase cost c
    std::string demand_column;
};

enum class DemandModel { kNormal, kEmpirical };

/// (price - cost) / price. Requires price > 0 and 0 <= cost <= price.
[[nodiscard]] double critical_fractile(double price, double cost);

/// Rounds a fractile to `digits` decimal places; digits == 0 leaves it as is.
[[nodiscard]] double round_fractile(double fractile, int digits);

/// Demand quantile at the critical fractile. The fractile is rounded to
/// `fractile_digits` decimals first (4 by default, i.e. a percentage with two
/// decimals); pass 0 for the exact ratio. Requires 0 < cost < price.
[[nodiscard]] double order_quantity(const Dataset& d, const NewsvendorInstance& inst, DemandModel model,
                                    int fractile_digits = 4);

/// p * E[min(D, q)] - c * q for D ~ Normal(mu, sigma^2).
[[nodiscard]] double expected_profit(const NewsvendorInstance& inst, double q, double mu, double sigma);

}  // namespace nvinfo
