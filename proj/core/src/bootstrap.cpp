#include "nvinfo/bootstrap.hpp"

#include "nvinfo/errors.hpp"
#include "nvinfo/random.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace nvinfo {
namespace {

std::vector<double> evaluate_replicate(const Dataset& d, const std::vector<StatisticDescriptor>& statistics,
                                       std::uint64_t seed, std::size_t replicate) {
    for (int attempt = 0; attempt < kMaxReplicateRetries; ++attempt) {
        const auto indices = draw_indices(d.n_rows(), stream_key(seed, replicate, static_cast<std::uint64_t>(attempt)));
        const Dataset resample = resample_rows(d, indices);
        try {
            std::vector<double> values;
            values.reserve(statistics.size());
            for (const auto& s : statistics) values.push_back(eval_statistic(s, resample));
            return values;
        } catch (const NumericError&) {
            // Statistic undefined on this resample; redraw from the next sub-stream.
        }
    }
    throw NumericError("bootstrap replicate " + std::to_string(replicate) + " failed " +
                       std::to_string(kMaxReplicateRetries) +
                       " consecutive resamples (statistic undefined on resampled data)");
}

}  // namespace

void BootstrapSettings::validate() const {
    if (nboots < 2) throw InputError("nboots must be at least 2, got " + std::to_string(nboots));
}

std::vector<std::size_t> draw_indices(std::size_t n, std::uint64_t key) {
    StreamRng rng(key);
    std::vector<std::size_t> indices(n);
    for (auto& idx : indices) idx = static_cast<std::size_t>(rng.below(n));
    return indices;
}

std::vector<std::vector<double>> bootstrap_replicates(const Dataset& d,
                                                      const std::vector<StatisticDescriptor>& statistics,
                                                      const BootstrapSettings& settings) {
    settings.validate();
    for (const auto& s : statistics) {
        s.validate();
        (void)d.column(s.column);
    }

    std::vector<std::vector<double>> table(settings.nboots);
    unsigned workers = settings.threads ? settings.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, settings.nboots));

    if (workers <= 1) {
        for (std::size_t b = 0; b < settings.nboots; ++b) {
            table[b] = evaluate_replicate(d, statistics, settings.seed, b);
        }
        return table;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t b = next++; b < settings.nboots && !failed; b = next++) {
                    try {
                        table[b] = evaluate_replicate(d, statistics, settings.seed, b);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        failed = true;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
    return table;
}

BootstrapCov bootstrap_joint(const Dataset& d, const StatisticDescriptor& target,
                             const std::vector<StatisticDescriptor>& sources, const BootstrapSettings& settings) {
    std::vector<StatisticDescriptor> statistics;
    statistics.reserve(sources.size() + 1);
    statistics.push_back(target);
    statistics.insert(statistics.end(), sources.begin(), sources.end());

    const auto table = bootstrap_replicates(d, statistics, settings);
    const std::size_t k = statistics.size();
    const auto nb = static_cast<double>(table.size());

    // Reduction runs serially in replicate order, so the result is independent
    // of how replicates were scheduled.
    std::vector<double> means(k, 0.0);
    for (const auto& row : table) {
        for (std::size_t j = 0; j < k; ++j) means[j] += row[j];
    }
    for (double& m : means) m /= nb;

    std::vector<double> cov(k * k, 0.0);
    for (const auto& row : table) {
        for (std::size_t i = 0; i < k; ++i) {
            const double di = row[i] - means[i];
            for (std::size_t j = i; j < k; ++j) cov[i * k + j] += di * (row[j] - means[j]);
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            cov[i * k + j] /= nb - 1.0;
            cov[j * k + i] = cov[i * k + j];
        }
    }

    BootstrapCov out;
    out.var_theta = cov[0];
    const std::size_t m = sources.size();
    out.cov_theta_eta.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.cov_theta_eta[j] = cov[j + 1];
    if (m > 0) {
        std::vector<double> eta(m * m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) eta[i * m + j] = cov[(i + 1) * k + (j + 1)];
        }
        out.cov_eta = SymMatrix(m, std::move(eta));
    }
    return out;
}

}  // namespace nvinfo
