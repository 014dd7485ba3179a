#include "nvinfo/statistics.hpp"

#include "nvinfo/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nvinfo {
namespace {

void require_size(std::span<const double> x, std::size_t min_size, const char* what) {
    if (x.size() < min_size) {
        throw InputError(std::string(what) + ": need at least " + std::to_string(min_size) +
                         " values, got " + std::to_string(x.size()));
    }
}

void require_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InputError("quantile level must lie in (0, 1), got " + std::to_string(level));
    }
}

std::vector<double> sorted_copy(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    return v;
}

// Acklam's rational approximation (relative error ~1.15e-9) for the initial
// guess; one Halley step on erfc brings it to double precision.
double acklam(double p) {
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    constexpr double p_high = 1.0 - p_low;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= p_high) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

StatisticDescriptor StatisticDescriptor::mean(std::string column) {
    return {StatisticKind::kMean, std::move(column), std::nullopt};
}

StatisticDescriptor StatisticDescriptor::median(std::string column) {
    return {StatisticKind::kMedian, std::move(column), std::nullopt};
}

StatisticDescriptor StatisticDescriptor::empirical_quantile(std::string column, double level) {
    return {StatisticKind::kEmpiricalQuantile, std::move(column), level};
}

StatisticDescriptor StatisticDescriptor::normal_quantile(std::string column, double level) {
    return {StatisticKind::kNormalQuantile, std::move(column), level};
}

void StatisticDescriptor::validate() const {
    if (column.empty()) throw InputError("statistic column name is empty");
    if (is_quantile_kind(kind)) {
        if (!level) throw InputError("quantile statistic on '" + column + "' requires a level");
        require_level(*level);
    } else if (level) {
        throw InputError("statistic on '" + column + "' takes no level");
    }
}

bool is_quantile_kind(StatisticKind kind) noexcept {
    return kind == StatisticKind::kEmpiricalQuantile || kind == StatisticKind::kNormalQuantile;
}

std::string describe(const StatisticDescriptor& s) {
    std::ostringstream os;
    switch (s.kind) {
        case StatisticKind::kMean: os << "mean"; break;
        case StatisticKind::kMedian: os << "median"; break;
        case StatisticKind::kEmpiricalQuantile: os << "empirical_quantile"; break;
        case StatisticKind::kNormalQuantile: os << "normal_quantile"; break;
    }
    os << '(' << s.column;
    if (s.level) os << ", " << *s.level;
    os << ')';
    return os.str();
}

double eval_statistic(const StatisticDescriptor& s, const Dataset& d) {
    s.validate();
    const auto x = d.column(s.column);
    switch (s.kind) {
        case StatisticKind::kMean: return mean(x);
        case StatisticKind::kMedian: return median(x);
        case StatisticKind::kEmpiricalQuantile: return empirical_quantile(x, *s.level);
        case StatisticKind::kNormalQuantile: {
            const double sd = sample_sd(x);
            if (!(sd > 0.0)) {
                throw NumericError("normal quantile of column '" + s.column + "' undefined: zero variance");
            }
            return mean(x) + sd * normal_inverse_cdf(*s.level);
        }
    }
    throw InputError("unknown statistic kind");
}

double mean(std::span<const double> x) {
    require_size(x, 1, "mean");
    double sum = 0.0;
    for (const double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    require_size(x, 2, "sample_variance");
    const double m = mean(x);
    double ss = 0.0;
    for (const double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double median(std::span<const double> x) {
    require_size(x, 1, "median");
    std::vector<double> v(x.begin(), x.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double empirical_quantile(std::span<const double> x, double level) {
    require_size(x, 1, "empirical_quantile");
    require_level(level);
    const auto v = sorted_copy(x);
    // 0-based position of the 1-based rank h = (n-1)*level + 1.
    const double pos = static_cast<double>(v.size() - 1) * level;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InputError("correlation: series lengths differ");
    require_size(x, 2, "correlation");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) noexcept {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_inverse_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("normal_inverse_cdf: probability must lie in (0, 1), got " + std::to_string(p));
    }
    if (p == 0.5) return 0.0;
    // Solve in the lower tail and reflect, so that p and 1-p map to exact negatives.
    const bool upper = p > 0.5;
    const double tail = upper ? 1.0 - p : p;
    double x = acklam(tail);
    const double e = normal_cdf(x) - tail;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return upper ? -x : x;
}

}  // namespace nvinfo
