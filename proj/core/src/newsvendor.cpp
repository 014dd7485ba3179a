#include "nvinfo/newsvendor.hpp"

#include "nvinfo/errors.hpp"
#include "nvinfo/statistics.hpp"

#include <cmath>

namespace nvinfo {

double critical_fractile(double price, double cost) {
    if (!(price > 0.0)) throw InputError("price must be positive, got " + std::to_string(price));
    if (!(cost >= 0.0)) throw InputError("cost must be non-negative, got " + std::to_string(cost));
    if (cost > price) {
        throw InputError("cost " + std::to_string(cost) + " exceeds price " + std::to_string(price));
    }
    return (price - cost) / price;
}

double round_fractile(double fractile, int digits) {
    if (digits < 0) throw InputError("fractile digits must be >= 0");
    if (digits == 0) return fractile;
    const double scale = std::pow(10.0, digits);
    return std::round(fractile * scale) / scale;
}

double order_quantity(const Dataset& d, const NewsvendorInstance& inst, DemandModel model, int fractile_digits) {
    if (!(inst.unit_cost > 0.0 && inst.unit_cost < inst.unit_price)) {
        throw InputError("newsvendor instance requires 0 < cost < price");
    }
    const double level = round_fractile(critical_fractile(inst.unit_price, inst.unit_cost), fractile_digits);
    const auto descriptor = model == DemandModel::kNormal
                                ? StatisticDescriptor::normal_quantile(inst.demand_column, level)
                                : StatisticDescriptor::empirical_quantile(inst.demand_column, level);
    return eval_statistic(descriptor, d);
}

double expected_profit(const NewsvendorInstance& inst, double q, double mu, double sigma) {
    if (!(sigma > 0.0)) throw InputError("demand sd must be positive");
    const double z = (q - mu) / sigma;
    const double expected_sales = q - (q - mu) * normal_cdf(z) - sigma * normal_pdf(z);
    return inst.unit_price * expected_sales - inst.unit_cost * q;
}

}  // namespace nvinfo
