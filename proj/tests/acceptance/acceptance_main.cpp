// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "cli_commands.hpp"
#include "nvinfo/combine.hpp"
#include "nvinfo/newsvendor.hpp"
#include "nvinfo/serialization.hpp"
#include "nvinfo/simulation.hpp"
#include "nvinfo/statistics.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

namespace {

using namespace nvinfo;
using testing::fixture;
using testing::sales_table;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool within_abs(double v, double want, double tol) { return std::abs(v - want) <= tol; }
bool within_rel(double v, double want, double rel) { return std::abs(v / want - 1.0) <= rel; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

EstimateConfig config(const std::string& name) {
    return estimate_config_from_json(parse_json_text(slurp(fixture(name)), name));
}

Scenario scenario(const std::string& name) { return scenario_from_json(parse_json_text(slurp(fixture(name)), name)); }

CombinedEstimate run_config(const std::string& name) {
    const EstimateConfig c = config(name);
    return estimate(c.method, sales_table(), c.problem, c.bootstrap, c.options);
}

int failures = 0;

void check(const std::string& id, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s  %-48s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string cli_json(const std::string& config_name, unsigned threads) {
    cli::EstimateArgs a;
    a.data_path = fixture("sales_ab.csv");
    a.config_path = fixture(config_name);
    a.threads = threads;
    std::ostringstream out, err;
    if (cli::cmd_estimate(a, out, err) != cli::kOk) throw std::runtime_error(err.str());
    return out.str();
}

}  // namespace

int main() {
    const auto a = sales_table().column("A");
    const auto b = sales_table().column("B");

    // Deterministic fixtures.
    check("fixture.mean_var_A", [&] {
        const double m = mean(a), v = sample_variance(a);
        return Outcome{within_abs(m, 4095.694, 0.001) && within_abs(v, 1791703, 1.0),
                       "mean=" + num(m) + " var=" + num(v)};
    });
    check("fixture.normal_quantile_A", [&] {
        const double q = eval_statistic(StatisticDescriptor::normal_quantile("A", 0.2326), sales_table());
        return Outcome{within_abs(q, 3118.14, 0.01), "q=" + num(q)};
    });
    check("fixture.empirical_quantile_A", [&] {
        const double q = eval_statistic(StatisticDescriptor::empirical_quantile("A", 0.2326), sales_table());
        return Outcome{within_abs(q, 2859.34, 0.01), "q=" + num(q)};
    });
    check("fixture.critical_fractile", [&] {
        const double f = critical_fractile(860, 660);
        return Outcome{within_abs(f, 0.23256, 1e-5), "f=" + num(f)};
    });
    check("fixture.mean_median_B_discrepancy", [&] {
        const double m = mean(b), med = median(b);
        const double d1 = m - 115.3846, d2 = med - 100.0;
        return Outcome{m == 128.0 && med == 103.5 && within_abs(d1, 12.6154, 1e-4) && within_abs(d2, 3.5, 1e-4),
                       "mean=" + num(m) + " median=" + num(med) + " delta=(" + num(d1) + ", " + num(d2) + ")"};
    });
    check("fixture.correlation_AB", [&] {
        const double r = correlation(a, b);
        return Outcome{within_abs(r, 0.936, 0.001), "r=" + num(r)};
    });

    // Bootstrap reproductions.
    check("bootstrap.median_B_variance", [&] {
        BootstrapSettings s;
        s.nboots = 10000;
        s.seed = 123;
        const auto med = StatisticDescriptor::median("B");
        const double v = bootstrap_joint(sales_table(), med, {med}, s).var_theta * 36.0;
        return Outcome{within_rel(v, 3227.319, 0.15), "36*var=" + num(v)};
    });
    check("estimate.scenario1_mvar", [&] {
        const auto r = run_config("scenario1_mvar.json");
        return Outcome{within_rel(r.theta_est, 3072.728, 0.02) && within_rel(r.theta_est_var, 904.6197, 0.20) &&
                           r.theta_est_var < r.theta_hat_var,
                       "est=" + num(r.theta_est) + " var=" + num(r.theta_est_var) + " hat_var=" + num(r.theta_hat_var)};
    });
    check("estimate.scenario2_mvar", [&] {
        const auto r = run_config("scenario2_mvar.json");
        return Outcome{within_rel(r.theta_est, 2962.054, 0.02) && within_rel(r.theta_est_var, 629.5974, 0.20),
                       "est=" + num(r.theta_est) + " var=" + num(r.theta_est_var)};
    });
    check("estimate.gross_bias_mmse", [&] {
        const auto r = run_config("gross_bias_mmse.json");
        return Outcome{within_abs(r.theta_est, 3118.14, 20.0) && r.theta_est_var < r.theta_hat_var,
                       "est=" + num(r.theta_est) + " var=" + num(r.theta_est_var) + " hat_var=" + num(r.theta_hat_var)};
    });
    check("estimate.small_bias_mmse", [&] {
        const auto r = run_config("small_bias_mmse.json");
        return Outcome{within_rel(r.theta_est, 3114.023, 0.01) && within_rel(r.theta_est_var, 647.4465, 0.25),
                       "est=" + num(r.theta_est) + " var=" + num(r.theta_est_var)};
    });

    // Properties.
    check("property.variance_dominance_100", [&] {
        StreamRng rng(777);
        const std::vector<StatisticDescriptor> pool{StatisticDescriptor::mean("A"), StatisticDescriptor::mean("B"),
                                                    StatisticDescriptor::median("B"),
                                                    StatisticDescriptor::empirical_quantile("B", 0.3),
                                                    StatisticDescriptor::normal_quantile("B", 0.7)};
        int bad = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const Dataset d = generate_bivariate(20 + rng.below(100), 100.0 * rng.normal(), 10.0 * rng.normal(),
                                                 1.0 + 20.0 * rng.uniform(), 0.5 + 5.0 * rng.uniform(),
                                                 -0.95 + 1.9 * rng.uniform(), rng.next());
            Problem p;
            p.target = StatisticDescriptor::normal_quantile("A", 0.05 + 0.9 * rng.uniform());
            const std::size_t m = 1 + rng.below(3);
            for (std::size_t j = 0; j < m; ++j) {
                p.sources.push_back({pool[rng.below(pool.size())], 10.0 * rng.normal() + 0.01 * j, rng.uniform(),
                                     rng.below(2) == 1});
            }
            BootstrapSettings s;
            s.nboots = 200;
            s.seed = rng.next();
            const auto r = mvar(d, p, s);
            if (!(r.theta_est_var <= r.theta_hat_var)) ++bad;
        }
        return Outcome{bad == 0, std::to_string(bad) + " violations"};
    });
    check("property.fixed_point_and_mvar_mmse_equivalence", [&] {
        EstimateConfig c = config("scenario1_mvar.json");
        c.bootstrap.nboots = 1000;
        c.problem.sources[0].reported_value = 128.0;
        c.problem.sources[1].reported_value = 103.5;
        c.problem.sources[0].biased = true;
        bool ok = true;
        for (const auto method : {Method::kMvar, Method::kMmse}) {
            const auto r = estimate(method, sales_table(), c.problem, c.bootstrap, c.options);
            ok = ok && r.theta_est == r.theta_hat;
        }
        const EstimateConfig u = config("scenario1_mvar.json");
        const auto x = mvar(sales_table(), u.problem, u.bootstrap, u.options);
        const auto y = mmse(sales_table(), u.problem, u.bootstrap, u.options);
        ok = ok && x.theta_est == y.theta_est && x.theta_est_var == y.theta_est_var;
        return Outcome{ok, ok ? "exact" : "mismatch"};
    });
    check("property.pseudo_inverse_vs_gauss_jordan_100", [&] {
        StreamRng rng(4242);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t m = 1 + rng.below(8);
            const SymMatrix mat = testing::random_spd(m, rng);
            const auto oracle = testing::gauss_jordan_inverse(mat.row_major(), m);
            const auto inv = spectral_pseudo_inverse(mat, 1.0).row_major();
            for (std::size_t k = 0; k < m * m; ++k) worst = std::max(worst, std::abs(inv[k] - oracle[k]));
        }
        return Outcome{worst <= 1e-8, "max_abs_err=" + num(worst)};
    });
    check("property.estimate_json_deterministic", [&] {
        const std::string one = cli_json("gross_bias_mmse.json", 1);
        const std::string again = cli_json("gross_bias_mmse.json", 1);
        const std::string par = cli_json("gross_bias_mmse.json", 4);
        const std::string par_again = cli_json("gross_bias_mmse.json", 4);
        const bool ok = one == again && par == par_again && one == par;
        return Outcome{ok, ok ? "byte-identical" : "outputs differ"};
    });
    check("mcsim.unbiased_mse_ratio", [&] {
        const auto m = run_scenario(scenario("sim_unbiased.json"));
        return Outcome{m.replications == 1000 && m.mse_ratio_mvar < 0.95, "ratio=" + num(m.mse_ratio_mvar)};
    });
    check("mcsim.gross_bias_mmse_beats_mvar", [&] {
        const auto m = run_scenario(scenario("sim_gross_bias.json"));
        return Outcome{m.mmse.mse < m.mvar.mse, "mse_mmse=" + num(m.mmse.mse) + " mse_mvar=" + num(m.mvar.mse)};
    });
    check("mcsim.convergence_sweep_decreasing", [&] {
        Scenario s = scenario("sim_gross_bias.json");
        s.replications = 200;
        const auto rows = convergence_sweep(s, {100, 400, 1600});
        const bool ok = rows.size() == 3 && rows[0].scaled_discrepancy > rows[1].scaled_discrepancy &&
                        rows[1].scaled_discrepancy > rows[2].scaled_discrepancy;
        std::string detail;
        for (const auto& r : rows) detail += num(r.scaled_discrepancy) + " ";
        return Outcome{ok, detail};
    });

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
