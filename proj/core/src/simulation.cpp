#include "nvinfo/simulation.hpp"

#include "nvinfo/bootstrap.hpp"
#include "nvinfo/errors.hpp"
#include "nvinfo/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace nvinfo {
namespace {

constexpr std::uint64_t kDataStream = 0xda7a;
constexpr std::uint64_t kReportStream = 0x5e9;
constexpr std::uint64_t kBootStream = 0xb007;

struct ReplicateResult {
    double theta_hat = 0.0, theta_hat_var = 0.0;
    double mvar = 0.0, mvar_var = 0.0;
    double mmse = 0.0, mmse_var = 0.0;
    double fixed = 0.0, fixed_var = 0.0;
};

StatisticDescriptor source_statistic(const SimulatedSource& s) {
    return {s.kind, "B", s.level};
}

ReplicateResult run_replicate(const Scenario& s, std::size_t r) {
    const Dataset d = generate_bivariate(s.n, s.mu_a, s.mu_b, s.sigma_a, s.sigma_b, s.rho,
                                         stream_key(s.base_seed, r, kDataStream));
    StreamRng report_rng(stream_key(s.base_seed, r, kReportStream));

    const auto target = StatisticDescriptor::normal_quantile("A", s.fractile_level);
    std::vector<StatisticDescriptor> statistics;
    std::vector<double> delta_hat, variances, bias_hat, bias_true, zeros(s.sources.size(), 0.0);
    for (const auto& src : s.sources) {
        statistics.push_back(source_statistic(src));
        const double reported =
            s.true_source_value(src) + src.bias + std::sqrt(src.reported_variance) * report_rng.normal();
        delta_hat.push_back(eval_statistic(statistics.back(), d) - reported);
        variances.push_back(src.reported_variance);
        bias_hat.push_back(src.biased ? delta_hat.back() : 0.0);
        // E(eta_hat - eta_tilde) = -bias.
        bias_true.push_back(src.biased ? -src.bias : 0.0);
    }

    BootstrapSettings settings;
    settings.nboots = s.nboots;
    settings.seed = stream_key(s.base_seed, r, kBootStream);
    settings.threads = 1;
    const BootstrapCov cov = bootstrap_joint(d, target, statistics, settings);

    CombineInputs in;
    in.theta_hat = eval_statistic(target, d);
    in.delta_hat = delta_hat;
    in.reported_variances = variances;
    in.cov = &cov;
    in.scale_factor = s.scale == CovarianceScale::kPerObservation ? 1.0 / static_cast<double>(s.n) : 1.0;
    in.eig_cutoff = s.eig_cutoff;

    ReplicateResult out;
    in.bias = zeros;
    const auto mv = combine(in);
    in.bias = bias_hat;
    const auto ms = combine(in);
    in.bias = bias_true;
    const auto fx = combine(in);

    out.theta_hat = mv.theta_hat;
    out.theta_hat_var = mv.theta_hat_var;
    out.mvar = mv.theta_est;
    out.mvar_var = mv.theta_est_var;
    out.mmse = ms.theta_est;
    out.mmse_var = ms.theta_est_var;
    out.fixed = fx.theta_est;
    out.fixed_var = fx.theta_est_var;
    return out;
}

std::vector<ReplicateResult> run_replicates(const Scenario& s) {
    std::vector<ReplicateResult> results(s.replications);
    unsigned workers = s.threads ? s.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, s.replications));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t r = next++; r < s.replications && !failed; r = next++) {
            try {
                results[r] = run_replicate(s, r);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
    return results;
}

double population_variance(const std::vector<double>& x) {
    double m = 0.0;
    for (const double v : x) m += v;
    m /= static_cast<double>(x.size());
    double ss = 0.0;
    for (const double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size());
}

}  // namespace

void Scenario::validate() const {
    if (n < 3) throw InputError("scenario.n must be at least 3");
    if (!(std::abs(rho) < 1.0)) throw InputError("scenario.rho must satisfy |rho| < 1");
    if (!(sigma_a > 0.0) || !(sigma_b > 0.0)) throw InputError("scenario sds must be positive");
    if (!(fractile_level > 0.0 && fractile_level < 1.0)) {
        throw InputError("scenario.fractile_level must lie in (0, 1)");
    }
    if (replications < 100) throw InputError("scenario.replications must be at least 100");
    if (nboots < 2) throw InputError("scenario.nboots must be at least 2");
    if (!(eig_cutoff > 0.0 && eig_cutoff <= 1.0)) throw InputError("scenario.eig_cutoff must lie in (0, 1]");
    if (sources.empty()) throw InputError("scenario needs at least one source");
    for (std::size_t j = 0; j < sources.size(); ++j) {
        const std::string where = "scenario.sources[" + std::to_string(j) + "]";
        source_statistic(sources[j]).validate();
        if (!(sources[j].reported_variance >= 0.0)) throw InputError(where + ".reported_variance must be >= 0");
        if (!std::isfinite(sources[j].bias)) throw InputError(where + ".bias must be finite");
    }
}

double Scenario::true_theta() const { return mu_a + sigma_a * normal_inverse_cdf(fractile_level); }

double Scenario::true_source_value(const SimulatedSource& s) const {
    switch (s.kind) {
        case StatisticKind::kMean:
        case StatisticKind::kMedian: return mu_b;
        case StatisticKind::kEmpiricalQuantile:
        case StatisticKind::kNormalQuantile: return mu_b + sigma_b * normal_inverse_cdf(*s.level);
    }
    return mu_b;
}

Dataset generate_bivariate(std::size_t n, double mu_a, double mu_b, double sigma_a, double sigma_b, double rho,
                           std::uint64_t key) {
    StreamRng rng(key);
    const double orth = std::sqrt(1.0 - rho * rho);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        a[i] = mu_a + sigma_a * z1;
        b[i] = mu_b + sigma_b * (rho * z1 + orth * z2);
    }
    return Dataset({"A", "B"}, {std::move(a), std::move(b)});
}

EstimatorMetrics summarize(const std::vector<double>& estimates, double truth,
                           const std::vector<double>& reported_vars) {
    EstimatorMetrics m;
    const auto r = static_cast<double>(estimates.size());
    for (const double e : estimates) m.mean += e;
    m.mean /= r;
    m.bias = m.mean - truth;
    m.variance = population_variance(estimates);
    for (const double e : estimates) m.mse += (e - truth) * (e - truth);
    m.mse /= r;
    for (const double v : reported_vars) m.mean_reported_var += v;
    m.mean_reported_var /= static_cast<double>(reported_vars.size());
    return m;
}

ScenarioMetrics run_scenario(const Scenario& s) {
    s.validate();
    const auto results = run_replicates(s);

    std::vector<double> th, thv, mv, mvv, ms, msv, fx, fxv;
    for (const auto& r : results) {
        th.push_back(r.theta_hat);
        thv.push_back(r.theta_hat_var);
        mv.push_back(r.mvar);
        mvv.push_back(r.mvar_var);
        ms.push_back(r.mmse);
        msv.push_back(r.mmse_var);
        fx.push_back(r.fixed);
        fxv.push_back(r.fixed_var);
    }
    ScenarioMetrics out;
    out.true_theta = s.true_theta();
    out.replications = s.replications;
    out.theta_hat = summarize(th, out.true_theta, thv);
    out.mvar = summarize(mv, out.true_theta, mvv);
    out.mmse = summarize(ms, out.true_theta, msv);
    out.fixed_delta = summarize(fx, out.true_theta, fxv);
    out.mse_ratio_mvar = out.mvar.mse / out.theta_hat.mse;
    out.mse_ratio_mmse = out.mmse.mse / out.theta_hat.mse;
    return out;
}

std::vector<ConvergenceRow> convergence_sweep(const Scenario& s, const std::vector<std::size_t>& n_grid) {
    if (n_grid.size() < 3) throw InputError("convergence_sweep needs at least 3 sample sizes");
    if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
        std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end()) {
        throw InputError("convergence_sweep sample sizes must be strictly increasing");
    }

    std::vector<ConvergenceRow> rows;
    for (const std::size_t n : n_grid) {
        Scenario biased = s;
        biased.n = n;
        biased.validate();
        Scenario unbiased = biased;
        for (auto& src : unbiased.sources) src.bias = 0.0;

        const double root_n = std::sqrt(static_cast<double>(n));
        ConvergenceRow row;
        row.n = n;

        const auto biased_results = run_replicates(biased);
        std::vector<double> scaled;
        for (const auto& r : biased_results) scaled.push_back(root_n * std::abs(r.mmse - r.theta_hat));
        row.scaled_discrepancy = median(scaled);

        const auto unbiased_results = run_replicates(unbiased);
        std::vector<double> th, mv, ms;
        for (const auto& r : unbiased_results) {
            th.push_back(r.theta_hat);
            mv.push_back(r.mvar);
            ms.push_back(r.mmse);
        }
        const auto nd = static_cast<double>(n);
        row.n_var_theta_hat = nd * population_variance(th);
        row.n_var_mvar = nd * population_variance(mv);
        row.n_var_mmse = nd * population_variance(ms);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace nvinfo
