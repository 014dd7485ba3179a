#pragma once

#include "nvinfo/bootstrap.hpp"
#include "nvinfo/combine.hpp"
#include "nvinfo/simulation.hpp"
#include "nvinfo/statistics.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace nvinfo {

/// Everything `nvinfo estimate` needs besides the data.
struct EstimateConfig {
    Problem problem;
    Method method = Method::kMvar;
    BootstrapSettings bootstrap;
    EstimatorOptions options;
};

/// Rounds to 10 significant digits; reports are written from these values so
/// their text form stays short and stable.
[[nodiscard]] double round_significant(double value, int digits = 10);

[[nodiscard]] std::string_view to_string(StatisticKind kind);
[[nodiscard]] std::string_view to_string(Method method);
[[nodiscard]] std::string_view to_string(CovarianceScale scale);
[[nodiscard]] StatisticKind parse_statistic_kind(std::string_view text);
[[nodiscard]] Method parse_method(std::string_view text);
[[nodiscard]] CovarianceScale parse_covariance_scale(std::string_view text);

// All from_json functions throw InputError naming the offending field.
[[nodiscard]] nlohmann::json to_json(const StatisticDescriptor& s);
[[nodiscard]] StatisticDescriptor statistic_from_json(const nlohmann::json& j, const std::string& where = "statistic");

[[nodiscard]] nlohmann::json to_json(const AdditionalSource& s);
[[nodiscard]] AdditionalSource source_from_json(const nlohmann::json& j, const std::string& where);

[[nodiscard]] nlohmann::json to_json(const EstimateConfig& c);
[[nodiscard]] EstimateConfig estimate_config_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const Scenario& s);
[[nodiscard]] Scenario scenario_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const CombinedEstimate& e);
[[nodiscard]] nlohmann::json to_json(const ScenarioMetrics& m);
[[nodiscard]] nlohmann::json to_json(const std::vector<ConvergenceRow>& rows);

/// Parses JSON text; syntax errors become InputError with the byte offset.
[[nodiscard]] nlohmann::json parse_json_text(std::string_view text, const std::string& origin);

}  // namespace nvinfo
