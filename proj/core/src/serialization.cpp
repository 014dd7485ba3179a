#include "nvinfo/serialization.hpp"

#include "nvinfo/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace nvinfo {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw InputError(where + ": expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw InputError(where + "." + key + ": missing required field");
    return *it;
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw InputError(field + ": expected a number");
    return j.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& field) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        throw InputError(field + ": expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& field) {
    if (j.is_boolean()) return j.get<bool>();
    // 0/1 flags are accepted as in the reference R interface.
    if (j.is_number_integer() && (j.get<std::int64_t>() == 0 || j.get<std::int64_t>() == 1)) {
        return j.get<std::int64_t>() == 1;
    }
    throw InputError(field + ": expected a boolean (or 0/1)");
}

std::string get_string(const json& j, const std::string& field) {
    if (!j.is_string()) throw InputError(field + ": expected a string");
    return j.get<std::string>();
}

template <typename Fn>
auto with_field(const std::string& field, Fn&& fn) {
    try {
        return fn();
    } catch (const InputError& e) {
        throw InputError(field + ": " + e.what());
    }
}

json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_significant(v);
}

json numbers(const std::vector<double>& v) {
    json arr = json::array();
    for (const double x : v) arr.push_back(number(x));
    return arr;
}

json metrics_json(const EstimatorMetrics& m) {
    return {{"mean", number(m.mean)},
            {"bias", number(m.bias)},
            {"variance", number(m.variance)},
            {"mse", number(m.mse)},
            {"mean_reported_var", number(m.mean_reported_var)}};
}

}  // namespace

double round_significant(double value, int digits) {
    if (!std::isfinite(value) || value == 0.0) return value;
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
    return std::strtod(buffer, nullptr);
}

std::string_view to_string(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::kMean: return "mean";
        case StatisticKind::kMedian: return "median";
        case StatisticKind::kEmpiricalQuantile: return "empirical_quantile";
        case StatisticKind::kNormalQuantile: return "normal_quantile";
    }
    return "unknown";
}

std::string_view to_string(Method method) { return method == Method::kMvar ? "mvar" : "mmse"; }

std::string_view to_string(CovarianceScale scale) {
    return scale == CovarianceScale::kPerObservation ? "per_observation" : "sampling";
}

StatisticKind parse_statistic_kind(std::string_view text) {
    if (text == "mean") return StatisticKind::kMean;
    if (text == "median") return StatisticKind::kMedian;
    if (text == "empirical_quantile") return StatisticKind::kEmpiricalQuantile;
    if (text == "normal_quantile") return StatisticKind::kNormalQuantile;
    throw InputError("unknown statistic kind '" + std::string(text) +
                     "' (expected mean, median, empirical_quantile or normal_quantile)");
}

Method parse_method(std::string_view text) {
    if (text == "mvar") return Method::kMvar;
    if (text == "mmse") return Method::kMmse;
    throw InputError("unknown method '" + std::string(text) + "' (expected mvar or mmse)");
}

CovarianceScale parse_covariance_scale(std::string_view text) {
    if (text == "per_observation") return CovarianceScale::kPerObservation;
    if (text == "sampling") return CovarianceScale::kSampling;
    throw InputError("unknown covariance scale '" + std::string(text) + "' (expected per_observation or sampling)");
}

json to_json(const StatisticDescriptor& s) {
    json j{{"kind", to_string(s.kind)}, {"column", s.column}};
    if (s.level) j["level"] = *s.level;
    return j;
}

StatisticDescriptor statistic_from_json(const json& j, const std::string& where) {
    StatisticDescriptor s;
    s.kind = with_field(where + ".kind", [&] { return parse_statistic_kind(get_string(require(j, "kind", where), "")); });
    s.column = get_string(require(j, "column", where), where + ".column");
    if (const auto it = j.find("level"); it != j.end() && !it->is_null()) {
        s.level = get_number(*it, where + ".level");
    }
    with_field(where, [&] {
        s.validate();
        return 0;
    });
    return s;
}

json to_json(const AdditionalSource& s) {
    return {{"statistic", to_json(s.statistic)},
            {"reported_value", s.reported_value},
            {"reported_variance", s.reported_variance},
            {"biased", s.biased}};
}

AdditionalSource source_from_json(const json& j, const std::string& where) {
    AdditionalSource s;
    s.statistic = statistic_from_json(require(j, "statistic", where), where + ".statistic");
    s.reported_value = get_number(require(j, "reported_value", where), where + ".reported_value");
    s.reported_variance = get_number(require(j, "reported_variance", where), where + ".reported_variance");
    if (!(s.reported_variance >= 0.0)) throw InputError(where + ".reported_variance: must be >= 0");
    if (const auto it = j.find("biased"); it != j.end()) s.biased = get_bool(*it, where + ".biased");
    return s;
}

json to_json(const EstimateConfig& c) {
    json sources = json::array();
    for (const auto& s : c.problem.sources) sources.push_back(to_json(s));
    return {{"target", to_json(c.problem.target)},
            {"sources", sources},
            {"method", to_string(c.method)},
            {"nboots", c.bootstrap.nboots},
            {"seed", c.bootstrap.seed},
            {"eig_cutoff", c.options.eig_cutoff},
            {"cov_scale", to_string(c.options.scale)},
            {"threads", c.bootstrap.threads}};
}

EstimateConfig estimate_config_from_json(const json& j) {
    const std::string where = "config";
    if (!j.is_object()) throw InputError("config: expected a JSON object");
    EstimateConfig c;
    c.problem.target = statistic_from_json(require(j, "target", where), "target");
    const json& sources = require(j, "sources", where);
    if (!sources.is_array()) throw InputError("sources: expected an array");
    if (sources.empty()) throw InputError("sources: at least one additional source required");
    for (std::size_t k = 0; k < sources.size(); ++k) {
        c.problem.sources.push_back(source_from_json(sources[k], "sources[" + std::to_string(k) + "]"));
    }
    if (const auto it = j.find("method"); it != j.end()) {
        c.method = with_field("method", [&] { return parse_method(get_string(*it, "")); });
    }
    if (const auto it = j.find("nboots"); it != j.end()) c.bootstrap.nboots = get_unsigned(*it, "nboots");
    if (const auto it = j.find("seed"); it != j.end()) c.bootstrap.seed = get_unsigned(*it, "seed");
    if (const auto it = j.find("threads"); it != j.end()) {
        c.bootstrap.threads = static_cast<unsigned>(get_unsigned(*it, "threads"));
    }
    if (const auto it = j.find("eig_cutoff"); it != j.end()) c.options.eig_cutoff = get_number(*it, "eig_cutoff");
    if (const auto it = j.find("cov_scale"); it != j.end()) {
        c.options.scale = with_field("cov_scale", [&] { return parse_covariance_scale(get_string(*it, "")); });
    }
    with_field("nboots", [&] {
        c.bootstrap.validate();
        return 0;
    });
    if (!(c.options.eig_cutoff > 0.0 && c.options.eig_cutoff <= 1.0)) {
        throw InputError("eig_cutoff: must lie in (0, 1]");
    }
    return c;
}

json to_json(const Scenario& s) {
    json sources = json::array();
    for (const auto& src : s.sources) {
        json js{{"kind", to_string(src.kind)},
                {"bias", src.bias},
                {"reported_variance", src.reported_variance},
                {"biased", src.biased}};
        if (src.level) js["level"] = *src.level;
        sources.push_back(js);
    }
    return {{"n", s.n},
            {"mu_a", s.mu_a},
            {"mu_b", s.mu_b},
            {"sigma_a", s.sigma_a},
            {"sigma_b", s.sigma_b},
            {"rho", s.rho},
            {"fractile_level", s.fractile_level},
            {"sources", sources},
            {"replications", s.replications},
            {"base_seed", s.base_seed},
            {"nboots", s.nboots},
            {"eig_cutoff", s.eig_cutoff},
            {"cov_scale", to_string(s.scale)},
            {"threads", s.threads}};
}

Scenario scenario_from_json(const json& j) {
    const std::string where = "scenario";
    if (!j.is_object()) throw InputError("scenario: expected a JSON object");
    Scenario s;
    s.n = get_unsigned(require(j, "n", where), "n");
    s.mu_a = get_number(require(j, "mu_a", where), "mu_a");
    s.mu_b = get_number(require(j, "mu_b", where), "mu_b");
    s.sigma_a = get_number(require(j, "sigma_a", where), "sigma_a");
    s.sigma_b = get_number(require(j, "sigma_b", where), "sigma_b");
    s.rho = get_number(require(j, "rho", where), "rho");
    s.fractile_level = get_number(require(j, "fractile_level", where), "fractile_level");
    const json& sources = require(j, "sources", where);
    if (!sources.is_array()) throw InputError("sources: expected an array");
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const std::string w = "sources[" + std::to_string(k) + "]";
        const json& js = sources[k];
        SimulatedSource src;
        src.kind = with_field(w + ".kind", [&] { return parse_statistic_kind(get_string(require(js, "kind", w), "")); });
        if (const auto it = js.find("level"); it != js.end() && !it->is_null()) src.level = get_number(*it, w + ".level");
        if (const auto it = js.find("bias"); it != js.end()) src.bias = get_number(*it, w + ".bias");
        src.reported_variance = get_number(require(js, "reported_variance", w), w + ".reported_variance");
        if (const auto it = js.find("biased"); it != js.end()) src.biased = get_bool(*it, w + ".biased");
        s.sources.push_back(src);
    }
    if (const auto it = j.find("replications"); it != j.end()) s.replications = get_unsigned(*it, "replications");
    if (const auto it = j.find("base_seed"); it != j.end()) s.base_seed = get_unsigned(*it, "base_seed");
    if (const auto it = j.find("nboots"); it != j.end()) s.nboots = get_unsigned(*it, "nboots");
    if (const auto it = j.find("eig_cutoff"); it != j.end()) s.eig_cutoff = get_number(*it, "eig_cutoff");
    if (const auto it = j.find("cov_scale"); it != j.end()) {
        s.scale = with_field("cov_scale", [&] { return parse_covariance_scale(get_string(*it, "")); });
    }
    if (const auto it = j.find("threads"); it != j.end()) s.threads = static_cast<unsigned>(get_unsigned(*it, "threads"));
    s.validate();
    return s;
}

json to_json(const CombinedEstimate& e) {
    return {{"method", to_string(e.method)},
            {"theta_est", number(e.theta_est)},
            {"theta_est_var", number(e.theta_est_var)},
            {"theta_hat", number(e.theta_hat)},
            {"theta_hat_var", number(e.theta_hat_var)},
            {"eta_hat", numbers(e.eta_hat)},
            {"delta_hat", numbers(e.delta_hat)},
            {"correction", number(e.correction)},
            {"relevance", number(e.relevance)},
            {"weights", numbers(e.weights)},
            {"eigenvalues", numbers(e.eigenvalues)},
            {"retained_eigs", e.retained_eigs},
            {"variance_clamped", e.variance_clamped}};
}

json to_json(const ScenarioMetrics& m) {
    return {{"true_theta", number(m.true_theta)},
            {"replications", m.replications},
            {"theta_hat", metrics_json(m.theta_hat)},
            {"mvar", metrics_json(m.mvar)},
            {"mmse", metrics_json(m.mmse)},
            {"fixed_delta", metrics_json(m.fixed_delta)},
            {"mse_ratio_mvar", number(m.mse_ratio_mvar)},
            {"mse_ratio_mmse", number(m.mse_ratio_mmse)}};
}

json to_json(const std::vector<ConvergenceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"n", r.n},
                       {"scaled_discrepancy", number(r.scaled_discrepancy)},
                       {"n_var_theta_hat", number(r.n_var_theta_hat)},
                       {"n_var_mvar", number(r.n_var_mvar)},
                       {"n_var_mmse", number(r.n_var_mmse)}});
    }
    return arr;
}

json parse_json_text(std::string_view text, const std::string& origin) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError(origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

}  // namespace nvinfo
