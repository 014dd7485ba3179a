#include "cli_commands.hpp"

#include "nvinfo/combine.hpp"
#include "nvinfo/dataset.hpp"
#include "nvinfo/errors.hpp"
#include "nvinfo/newsvendor.hpp"
#include "nvinfo/serialization.hpp"
#include "nvinfo/simulation.hpp"
#include "nvinfo/statistics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nvinfo::cli {
namespace {

using nlohmann::json;

std::string read_text_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(std::string("cannot open ") + what + " file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s + ")";
}

// Runs `body` against a buffer that reaches `out` only if it completes, and
// maps exceptions to exit codes.
template <typename Body>
int guarded(std::ostream& out, std::ostream& err, Body&& body) {
    std::ostringstream buffer;
    try {
        body(buffer);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }
    out << buffer.str();
    out.flush();
    return kOk;
}

void row(std::ostream& os, const std::string& label, const std::string& value) {
    os << std::left << std::setw(18) << label << value << '\n';
}

json load_json_file(const std::string& path, const char* what) {
    return parse_json_text(read_text_file(path, what), path);
}

}  // namespace

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(out, err, [&](std::ostream& os) {
        EstimateConfig config = estimate_config_from_json(load_json_file(args.config_path, "config"));
        if (args.method) config.method = parse_method(*args.method);
        if (args.nboots) config.bootstrap.nboots = *args.nboots;
        if (args.seed) config.bootstrap.seed = *args.seed;
        if (args.threads) config.bootstrap.threads = *args.threads;
        if (args.eig_cutoff) {
            if (!(*args.eig_cutoff > 0.0 && *args.eig_cutoff <= 1.0)) {
                throw InputError("eig_cutoff: must lie in (0, 1]");
            }
            config.options.eig_cutoff = *args.eig_cutoff;
        }
        if (args.cov_scale) config.options.scale = parse_covariance_scale(*args.cov_scale);
        config.bootstrap.validate();

        const Dataset data = load_csv(args.data_path);
        config.problem.validate(data);
        const auto result = estimate(config.method, data, config.problem, config.bootstrap, config.options);

        if (args.output == OutputFormat::kJson) {
            json report = to_json(result);
            report["seed"] = config.bootstrap.seed;
            report["nboots"] = config.bootstrap.nboots;
            report["eig_cutoff"] = config.options.eig_cutoff;
            report["cov_scale"] = to_string(config.options.scale);
            os << report.dump(2) << '\n';
            return;
        }
        row(os, "method", std::string(to_string(result.method)));
        row(os, "theta_est", fmt(result.theta_est));
        row(os, "theta_est_var", fmt(result.theta_est_var));
        row(os, "theta_est_sd", fmt(std::sqrt(result.theta_est_var)));
        row(os, "theta_hat", fmt(result.theta_hat));
        row(os, "theta_hat_var", fmt(result.theta_hat_var));
        row(os, "theta_hat_sd", fmt(std::sqrt(result.theta_hat_var)));
        row(os, "eta_hat", fmt_list(result.eta_hat));
        row(os, "delta_hat", fmt_list(result.delta_hat));
        row(os, "correction", fmt(result.correction));
        row(os, "relevance", fmt(result.relevance));
        row(os, "weights", fmt_list(result.weights));
        row(os, "eigenvalues", fmt_list(result.eigenvalues));
        row(os, "retained_eigs", std::to_string(result.retained_eigs));
        if (result.variance_clamped) row(os, "note", "negative variance estimate clamped to 0");
        row(os, "seed", std::to_string(config.bootstrap.seed));
        row(os, "nboots", std::to_string(config.bootstrap.nboots));
        row(os, "eig_cutoff", fmt(config.options.eig_cutoff));
        row(os, "cov_scale", std::string(to_string(config.options.scale)));
    });
}

int cmd_newsvendor(const NewsvendorArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(out, err, [&](std::ostream& os) {
        if (!(args.cost > 0.0 && args.price > args.cost)) {
            throw InputError("prices: require price > cost > 0 (got price " + fmt(args.price) + ", cost " +
                             fmt(args.cost) + ")");
        }
        DemandModel model;
        if (args.model == "normal") {
            model = DemandModel::kNormal;
        } else if (args.model == "empirical") {
            model = DemandModel::kEmpirical;
        } else {
            throw InputError("model: expected normal or empirical, got '" + args.model + "'");
        }
        const Dataset data = load_csv(args.data_path);
        NewsvendorInstance inst{args.price, args.cost, args.column.value_or(data.names().front())};
        const double exact = critical_fractile(inst.unit_price, inst.unit_cost);
        const double level = round_fractile(exact, args.fractile_digits);
        const double q = order_quantity(data, inst, model, args.fractile_digits);

        const auto demand = data.column(inst.demand_column);
        const double mu = mean(demand);
        const double sd = sample_sd(demand);
        const bool has_profit = sd > 0.0;
        const double profit = has_profit ? expected_profit(inst, q, mu, sd) : 0.0;

        if (args.output == OutputFormat::kJson) {
            json report{{"column", inst.demand_column},
                        {"price", inst.unit_price},
                        {"cost", inst.unit_cost},
                        {"model", args.model},
                        {"critical_fractile", round_significant(exact)},
                        {"fractile_level", round_significant(level)},
                        {"order_quantity", round_significant(q)}};
            report["expected_profit_normal"] = has_profit ? json(round_significant(profit)) : json(nullptr);
            os << report.dump(2) << '\n';
            return;
        }
        row(os, "column", inst.demand_column);
        row(os, "critical_fractile", fmt(exact));
        row(os, "fractile_level", fmt(level));
        row(os, "model", args.model);
        row(os, "order_quantity", fmt(q));
        if (has_profit) row(os, "expected_profit", fmt(profit) + " (normal demand model)");
    });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(out, err, [&](std::ostream& os) {
        const Scenario scenario = scenario_from_json(load_json_file(args.scenario_path, "scenario"));
        if (!args.sweep.empty()) {
            const auto rows = convergence_sweep(scenario, args.sweep);
            if (args.output == OutputFormat::kJson) {
                os << json{{"convergence", to_json(rows)}}.dump(2) << '\n';
                return;
            }
            os << std::right << std::setw(8) << "n" << std::setw(20) << "sqrt(n)|mmse-hat|" << std::setw(16)
               << "n*var(hat)" << std::setw(16) << "n*var(mvar)" << std::setw(16) << "n*var(mmse)" << '\n';
            for (const auto& r : rows) {
                os << std::setw(8) << r.n << std::setw(20) << fmt(r.scaled_discrepancy) << std::setw(16)
                   << fmt(r.n_var_theta_hat) << std::setw(16) << fmt(r.n_var_mvar) << std::setw(16)
                   << fmt(r.n_var_mmse) << '\n';
            }
            return;
        }
        const auto metrics = run_scenario(scenario);
        if (args.output == OutputFormat::kJson) {
            os << to_json(metrics).dump(2) << '\n';
            return;
        }
        os << "true theta " << fmt(metrics.true_theta) << ", " << metrics.replications << " replications\n";
        os << std::left << std::setw(13) << "estimator" << std::right << std::setw(16) << "mean" << std::setw(16)
           << "bias" << std::setw(16) << "variance" << std::setw(16) << "mse" << std::setw(18) << "mean_rep_var"
           << '\n';
        const std::pair<const char*, const EstimatorMetrics*> table[] = {{"theta_hat", &metrics.theta_hat},
                                                                         {"mvar", &metrics.mvar},
                                                                         {"mmse", &metrics.mmse},
                                                                         {"fixed_delta", &metrics.fixed_delta}};
        for (const auto& [name, m] : table) {
            os << std::left << std::setw(13) << name << std::right << std::setw(16) << fmt(m->mean)
               << std::setw(16) << fmt(m->bias) << std::setw(16) << fmt(m->variance) << std::setw(16)
               << fmt(m->mse) << std::setw(18) << fmt(m->mean_reported_var) << '\n';
        }
        os << "mse ratio mvar/theta_hat " << fmt(metrics.mse_ratio_mvar) << '\n';
        os << "mse ratio mmse/theta_hat " << fmt(metrics.mse_ratio_mmse) << '\n';
    });
}

int cmd_describe(const DescribeArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(out, err, [&](std::ostream& os) {
        const Dataset data = load_csv(args.data_path);
        const auto& names = data.names();
        const std::size_t k = names.size();
        std::vector<std::vector<double>> corr(k, std::vector<double>(k, 1.0));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                corr[i][j] = corr[j][i] = correlation(data.column(i), data.column(j));
            }
        }

        if (args.output == OutputFormat::kJson) {
            json columns = json::array();
            for (std::size_t i = 0; i < k; ++i) {
                const auto x = data.column(i);
                columns.push_back({{"name", names[i]},
                                   {"n", x.size()},
                                   {"mean", round_significant(mean(x))},
                                   {"variance", round_significant(sample_variance(x))},
                                   {"median", round_significant(median(x))},
                                   {"min", *std::min_element(x.begin(), x.end())},
                                   {"max", *std::max_element(x.begin(), x.end())}});
            }
            json matrix = json::array();
            for (const auto& r : corr) {
                json jr = json::array();
                for (const double v : r) jr.push_back(std::isfinite(v) ? json(round_significant(v)) : json(nullptr));
                matrix.push_back(jr);
            }
            os << json{{"columns", columns}, {"correlation", matrix}}.dump(2) << '\n';
            return;
        }
        os << std::left << std::setw(10) << "column" << std::right << std::setw(6) << "n" << std::setw(16) << "mean"
           << std::setw(16) << "variance" << std::setw(12) << "median" << std::setw(12) << "min" << std::setw(12)
           << "max" << '\n';
        for (std::size_t i = 0; i < k; ++i) {
            const auto x = data.column(i);
            os << std::left << std::setw(10) << names[i] << std::right << std::setw(6) << x.size() << std::setw(16)
               << fmt(mean(x)) << std::setw(16) << fmt(sample_variance(x)) << std::setw(12) << fmt(median(x))
               << std::setw(12) << fmt(*std::min_element(x.begin(), x.end())) << std::setw(12)
               << fmt(*std::max_element(x.begin(), x.end())) << '\n';
        }
        os << "\ncorrelation\n" << std::left << std::setw(10) << "";
        for (const auto& name : names) os << std::right << std::setw(12) << name;
        os << '\n';
        for (std::size_t i = 0; i < k; ++i) {
            os << std::left << std::setw(10) << names[i];
            for (std::size_t j = 0; j < k; ++j) os << std::right << std::setw(12) << fmt(corr[i][j]);
            os << '\n';
        }
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Newsvendor inventory estimation with uncertain additional information"};
    app.require_subcommand(1);

    const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::kJson}, {"text", OutputFormat::kText}};

    EstimateArgs est;
    auto* estimate_cmd = app.add_subcommand("estimate", "Combine the empirical estimate with additional sources");
    estimate_cmd->add_option("--data", est.data_path, "CSV file of historical sales")->required();
    estimate_cmd->add_option("--config", est.config_path, "JSON estimation config")->required();
    estimate_cmd->add_option("--method", est.method, "mvar or mmse (overrides config)");
    estimate_cmd->add_option("--nboots", est.nboots, "Bootstrap resamples (overrides config)");
    estimate_cmd->add_option("--seed", est.seed, "Bootstrap seed (overrides config)");
    estimate_cmd->add_option("--eig-cutoff", est.eig_cutoff, "Retained spectrum proportion in (0, 1]");
    estimate_cmd->add_option("--cov-scale", est.cov_scale, "per_observation or sampling");
    estimate_cmd->add_option("--threads", est.threads, "Bootstrap worker threads (0 = all cores)");
    estimate_cmd->add_option("--output", est.output, "json or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    NewsvendorArgs nv;
    auto* newsvendor_cmd = app.add_subcommand("newsvendor", "Critical fractile and optimal order quantity");
    newsvendor_cmd->add_option("--data", nv.data_path, "CSV file of historical sales")->required();
    newsvendor_cmd->add_option("--price", nv.price, "Unit selling price")->required();
    newsvendor_cmd->add_option("--cost", nv.cost, "Unit purchase cost")->required();
    newsvendor_cmd->add_option("--model", nv.model, "normal or empirical")->capture_default_str();
    newsvendor_cmd->add_option("--column", nv.column, "Demand column (default: first column)");
    newsvendor_cmd->add_option("--fractile-digits", nv.fractile_digits, "Decimals the fractile is rounded to (0 = exact)")
        ->capture_default_str();
    newsvendor_cmd->add_option("--output", nv.output, "json or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo comparison of the estimators");
    simulate_cmd->add_option("--scenario", sim.scenario_path, "JSON scenario file")->required();
    simulate_cmd->add_option("--sweep", sim.sweep, "Sample sizes for a convergence sweep")->delimiter(',');
    simulate_cmd->add_option("--output", sim.output, "json or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    DescribeArgs desc;
    auto* describe_cmd = app.add_subcommand("describe", "Per-column summary statistics and correlations");
    describe_cmd->add_option("--data", desc.data_path, "CSV file")->required();
    describe_cmd->add_option("--output", desc.output, "json or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    if (*estimate_cmd) return cmd_estimate(est, out, err);
    if (*newsvendor_cmd) return cmd_newsvendor(nv, out, err);
    if (*simulate_cmd) return cmd_simulate(sim, out, err);
    return cmd_describe(desc, out, err);
}

}  // namespace nvinfo::cli
