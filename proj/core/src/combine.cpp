#include "nvinfo/combine.hpp"

#include "nvinfo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nvinfo {

void Problem::validate(const Dataset& d) const {
    target.validate();
    if (!d.has_column(target.column)) throw InputError("target: unknown column '" + target.column + "'");
    if (sources.empty()) throw InputError("at least one additional source required");
    for (std::size_t j = 0; j < sources.size(); ++j) {
        const auto& src = sources[j];
        const std::string where = "sources[" + std::to_string(j) + "]";
        src.statistic.validate();
        if (!d.has_column(src.statistic.column)) {
            throw InputError(where + ".statistic: unknown column '" + src.statistic.column + "'");
        }
        if (!std::isfinite(src.reported_value)) throw InputError(where + ".reported_value must be finite");
        if (!(src.reported_variance >= 0.0) || !std::isfinite(src.reported_variance)) {
            throw InputError(where + ".reported_variance must be finite and >= 0");
        }
        for (std::size_t k = 0; k < j; ++k) {
            if (sources[k].statistic == src.statistic && sources[k].reported_value == src.reported_value) {
                throw InputError(where + " duplicates sources[" + std::to_string(k) + "]");
            }
        }
    }
}

double combine_with_lambda(double theta_hat, std::span<const double> lambda, std::span<const double> delta_hat) {
    if (lambda.size() != delta_hat.size()) {
        throw InputError("combine_with_lambda: lambda has " + std::to_string(lambda.size()) +
                         " entries, delta_hat has " + std::to_string(delta_hat.size()));
    }
    return theta_hat + std::inner_product(lambda.begin(), lambda.end(), delta_hat.begin(), 0.0);
}

double relevance_form(std::span<const double> c, const SymMatrix& v_inv) {
    if (c.size() != v_inv.dim()) throw InputError("relevance_form: dimension mismatch");
    return v_inv.quadratic_form(c);
}

CombinedEstimate combine(const CombineInputs& in) {
    const BootstrapCov& cov = *in.cov;
    const std::size_t m = in.delta_hat.size();
    if (cov.cov_theta_eta.size() != m || cov.cov_eta.dim() != m || in.reported_variances.size() != m ||
        in.bias.size() != m) {
        throw InputError("combine: inconsistent source dimensions");
    }

    std::vector<double> c = cov.cov_theta_eta;
    for (double& x : c) x *= in.scale_factor;
    SymMatrix v = cov.cov_eta.scaled(in.scale_factor) + SymMatrix::diagonal(in.reported_variances);
    v.add_outer(in.bias, in.scale_factor);

    const auto pinv = spectral_pseudo_inverse_detail(v, in.eig_cutoff);
    const auto v_inv_c = pinv.inverse.multiply(c);

    CombinedEstimate out;
    out.theta_hat = in.theta_hat;
    out.theta_hat_var = cov.var_theta * in.scale_factor;
    out.delta_hat = in.delta_hat;
    out.weights.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.weights[j] = -v_inv_c[j];
    out.correction = std::inner_product(v_inv_c.begin(), v_inv_c.end(), in.delta_hat.begin(), 0.0);
    out.theta_est = in.theta_hat - out.correction;
    out.relevance = std::max(0.0, std::inner_product(c.begin(), c.end(), v_inv_c.begin(), 0.0));
    const double var = out.theta_hat_var - out.relevance;
    out.variance_clamped = var < 0.0;
    out.theta_est_var = std::max(0.0, var);
    out.retained_eigs = pinv.spectrum.retained;
    out.eigenvalues = pinv.spectrum.eigenvalues;
    return out;
}

CombinedEstimate estimate(Method method, const Dataset& d, const Problem& p, const BootstrapSettings& s,
                          const EstimatorOptions& options) {
    p.validate(d);
    s.validate();

    const double theta_hat = eval_statistic(p.target, d);
    std::vector<StatisticDescriptor> statistics;
    std::vector<double> eta_hat, delta_hat, reported_variances, bias;
    for (const auto& src : p.sources) {
        statistics.push_back(src.statistic);
        const double eta = eval_statistic(src.statistic, d);
        eta_hat.push_back(eta);
        delta_hat.push_back(eta - src.reported_value);
        reported_variances.push_back(src.reported_variance);
        bias.push_back(method == Method::kMmse && src.biased ? delta_hat.back() : 0.0);
    }

    const BootstrapCov cov = bootstrap_joint(d, p.target, statistics, s);

    CombineInputs in;
    in.theta_hat = theta_hat;
    in.delta_hat = std::move(delta_hat);
    in.reported_variances = std::move(reported_variances);
    in.bias = std::move(bias);
    in.cov = &cov;
    in.scale_factor =
        options.scale == CovarianceScale::kPerObservation ? 1.0 / static_cast<double>(d.n_rows()) : 1.0;
    in.eig_cutoff = options.eig_cutoff;

    CombinedEstimate out = combine(in);
    out.method = method;
    out.eta_hat = std::move(eta_hat);
    return out;
}

CombinedEstimate mvar(const Dataset& d, const Problem& p, const BootstrapSettings& s,
                      const EstimatorOptions& options) {
    return estimate(Method::kMvar, d, p, s, options);
}

CombinedEstimate mmse(const Dataset& d, const Problem& p, const BootstrapSettings& s,
                      const EstimatorOptions& options) {
    return estimate(Method::kMmse, d, p, s, options);
}

}  // namespace nvinfo
