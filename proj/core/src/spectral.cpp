#include "nvinfo/spectral.hpp"

#include "nvinfo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nvinfo {

namespace {
constexpr std::size_t kMaxDim = 64;
constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr double kEigenFloor = 1e-12;
}  // namespace

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
    if (dim == 0) throw InputError("matrix dimension must be at least 1");
}

SymMatrix::SymMatrix(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), data_(std::move(row_major)) {
    if (dim == 0) throw InputError("matrix dimension must be at least 1");
    if (data_.size() != dim * dim) throw InputError("matrix data size does not match dimension");
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            const double avg = 0.5 * (data_[i * dim_ + j] + data_[j * dim_ + i]);
            data_[i * dim_ + j] = avg;
            data_[j * dim_ + i] = avg;
        }
    }
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
    SymMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
    return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) noexcept {
    data_[i * dim_ + j] = value;
    data_[j * dim_ + i] = value;
}

void SymMatrix::add_outer(std::span<const double> v, double scale) {
    if (v.size() != dim_) throw InputError("outer product dimension mismatch");
    for (std::size_t i = 0; i < dim_; ++i) {
        data_[i * dim_ + i] += scale * v[i] * v[i];
        for (std::size_t j = i + 1; j < dim_; ++j) {
            const double term = scale * v[i] * v[j];
            data_[i * dim_ + j] += term;
            data_[j * dim_ + i] += term;
        }
    }
}

SymMatrix SymMatrix::scaled(double factor) const {
    SymMatrix out = *this;
    for (double& x : out.data_) x *= factor;
    return out;
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
    if (other.dim_ != dim_) throw InputError("matrix sum dimension mismatch");
    SymMatrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += other.data_[k];
    return out;
}

std::vector<double> SymMatrix::multiply(std::span<const double> v) const {
    if (v.size() != dim_) throw InputError("matrix-vector dimension mismatch");
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) out[i] += data_[i * dim_ + j] * v[j];
    }
    return out;
}

double SymMatrix::quadratic_form(std::span<const double> v) const { return bilinear_form(v, v); }

double SymMatrix::bilinear_form(std::span<const double> u, std::span<const double> v) const {
    if (u.size() != dim_) throw InputError("bilinear form dimension mismatch");
    const auto av = multiply(v);
    return std::inner_product(u.begin(), u.end(), av.begin(), 0.0);
}

double SymMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const double x : data_) m = std::max(m, std::abs(x));
    return m;
}

SpectralDecomposition sym_eigen(const SymMatrix& a) {
    const std::size_t n = a.dim();
    if (n > kMaxDim) {
        throw InputError("sym_eigen supports dim <= 64, got " + std::to_string(n));
    }
    std::vector<double> m = a.row_major();
    if (!std::all_of(m.begin(), m.end(), [](double x) { return std::isfinite(x); })) {
        throw NumericError("sym_eigen: matrix has non-finite entries");
    }
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto at = [n](std::vector<double>& x, std::size_t i, std::size_t j) -> double& { return x[i * n + j]; };

    double frobenius2 = 0.0;
    for (const double x : m) frobenius2 += x * x;
    const double threshold2 = kOffDiagonalTolerance * kOffDiagonalTolerance * frobenius2;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) off2 += at(m, i, j) * at(m, i, j);
            }
        }
        if (off2 <= threshold2) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(m, p, q);
                if (apq == 0.0) continue;
                const double app = at(m, p, p);
                const double aqq = at(m, q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = at(m, k, p);
                    const double mkq = at(m, k, q);
                    at(m, k, p) = c * mkp - s * mkq;
                    at(m, k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = at(m, p, k);
                    const double mqk = at(m, q, k);
                    at(m, p, k) = c * mpk - s * mqk;
                    at(m, q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = at(v, k, p);
                    const double vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return at(m, x, x) > at(m, y, y); });

    SpectralDecomposition out;
    out.retained = n;
    for (const std::size_t k : order) {
        out.eigenvalues.push_back(at(m, k, k));
        std::vector<double> vec(n);
        for (std::size_t i = 0; i < n; ++i) vec[i] = at(v, i, k);
        out.eigenvectors.push_back(std::move(vec));
    }
    return out;
}

PseudoInverse spectral_pseudo_inverse_detail(const SymMatrix& a, double eig_cutoff) {
    if (!(eig_cutoff > 0.0 && eig_cutoff <= 1.0)) {
        throw InputError("eig_cutoff must lie in (0, 1], got " + std::to_string(eig_cutoff));
    }
    auto spectrum = sym_eigen(a);
    for (double& lambda : spectrum.eigenvalues) lambda = std::max(lambda, 0.0);

    const double total = std::accumulate(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), 0.0);
    if (!(total > 0.0)) throw NumericError("covariance matrix has no positive spectrum");

    const double lambda_max = spectrum.eigenvalues.front();
    const double target = eig_cutoff * total - 1e-12 * total;
    std::size_t prefix = 0;
    double cumulative = 0.0;
    while (prefix < spectrum.eigenvalues.size()) {
        cumulative += spectrum.eigenvalues[prefix];
        ++prefix;
        if (cumulative >= target) break;
    }
    std::size_t retained = 0;
    while (retained < prefix && spectrum.eigenvalues[retained] > kEigenFloor * lambda_max) ++retained;
    spectrum.retained = retained;

    SymMatrix inverse(a.dim());
    for (std::size_t k = 0; k < retained; ++k) {
        inverse.add_outer(spectrum.eigenvectors[k], 1.0 / spectrum.eigenvalues[k]);
    }
    return {std::move(inverse), std::move(spectrum)};
}

SymMatrix spectral_pseudo_inverse(const SymMatrix& a, double eig_cutoff) {
    return spectral_pseudo_inverse_detail(a, eig_cutoff).inverse;
}

}  // namespace nvinfo
