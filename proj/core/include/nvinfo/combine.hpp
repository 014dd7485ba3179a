#pragma once

#include "nvinfo/bootstrap.hpp"
#include "nvinfo/dataset.hpp"
#include "nvinfo/spectral.hpp"
#include "nvinfo/statistics.hpp"

#include <span>
#include <vector>

namespace nvinfo {

/// One piece of external information: a statistic of the empirical data
/// whose value was reported by an outside source, with the variance of that
/// report.
struct AdditionalSource {
    StatisticDescriptor statistic;
    double reported_value = 0.0;
    double reported_variance = 0.0;
    bool biased = false;  ///< source may be biased; enters the MMSE bias penalty
};

struct Problem {
    StatisticDescriptor target;
    std::vector<AdditionalSource> sources;

    /// Structural checks (m >= 1, variances >= 0, no duplicate
    /// (statistic, reported_value) pairs, columns exist). Throws InputError.
    void validate(const Dataset& d) const;
};

enum class Method { kMvar, kMmse };

/// Scale applied to the empirically estimated second moments (bootstrap
/// covariances and the MMSE bias outer product) before they are combined
/// with the reported variances.
///
///   kPerObservation  every empirical moment is divided by the sample size n;
///                    reported variances are used as given. This is the
///                    convention of the reference R implementation and
///                    reproduces its published output.
///   kSampling        empirical moments are used unscaled, i.e. reported
///                    variances are on the same scale as the bootstrap
///                    variance of the empirical estimator.
enum class CovarianceScale { kPerObservation, kSampling };

struct EstimatorOptions {
    double eig_cutoff = 1.0;
    CovarianceScale scale = CovarianceScale::kPerObservation;
};

struct CombinedEstimate {
    Method method = Method::kMvar;
    double theta_est = 0.0;
    double theta_est_var = 0.0;
    double theta_hat = 0.0;
    double theta_hat_var = 0.0;
    std::vector<double> eta_hat;
    std::vector<double> delta_hat;  ///< eta_hat - reported values
    double correction = 0.0;        ///< theta_hat - theta_est
    double relevance = 0.0;         ///< c V^- c^T, the variance removed
    std::size_t retained_eigs = 0;
    std::vector<double> eigenvalues;  ///< of V, clamped, descending
    std::vector<double> weights;      ///< Lambda = -c V^-; theta_est = theta_hat + Lambda . delta_hat
    bool variance_clamped = false;    ///< theta_est_var was negative before clamping to 0
};

/// theta_hat + lambda . delta_hat for an arbitrary member of the linear class.
[[nodiscard]] double combine_with_lambda(double theta_hat, std::span<const double> lambda,
                                         std::span<const double> delta_hat);

/// c V^- c^T. Throws InputError on a dimension mismatch.
[[nodiscard]] double relevance_form(std::span<const double> c, const SymMatrix& v_inv);

/// Minimum-variance combination assuming all sources are unbiased.
[[nodiscard]] CombinedEstimate mvar(const Dataset& d, const Problem& p, const BootstrapSettings& s,
                                    const EstimatorOptions& options = {});

/// Minimum-MSE combination: sources flagged biased add their estimated
/// discrepancy outer product to the matrix being inverted.
[[nodiscard]] CombinedEstimate mmse(const Dataset& d, const Problem& p, const BootstrapSettings& s,
                                    const EstimatorOptions& options = {});

[[nodiscard]] CombinedEstimate estimate(Method method, const Dataset& d, const Problem& p,
                                        const BootstrapSettings& s, const EstimatorOptions& options = {});

/// Combination step on precomputed inputs. `bias` is the vector whose outer
/// product is added to the matrix being inverted (all zeros for MVAR).
/// Scaling by `scale_factor` applies to `cov` and the bias outer product, not
/// to the reported variances.
struct CombineInputs {
    double theta_hat = 0.0;
    std::vector<double> delta_hat;
    std::vector<double> reported_variances;
    std::vector<double> bias;
    const BootstrapCov* cov = nullptr;
    double scale_factor = 1.0;
    double eig_cutoff = 1.0;
};
[[nodiscard]] CombinedEstimate combine(const CombineInputs& in);

}  // namespace nvinfo
