#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nvinfo {

/// Dense symmetric m x m matrix, row-major. Symmetrized on construction as
/// (A + A^T) / 2.
class SymMatrix {
public:
    explicit SymMatrix(std::size_t dim);
    SymMatrix(std::size_t dim, std::vector<double> row_major);

    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(std::span<const double> diag);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * dim_ + j];
    }
    /// Sets both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value) noexcept;
    void add_outer(std::span<const double> v, double scale = 1.0);

    [[nodiscard]] SymMatrix scaled(double factor) const;
    [[nodiscard]] SymMatrix operator+(const SymMatrix& other) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> v) const;
    [[nodiscard]] double quadratic_form(std::span<const double> v) const;
    [[nodiscard]] double bilinear_form(std::span<const double> u, std::span<const double> v) const;
    [[nodiscard]] double max_abs() const noexcept;
    [[nodiscard]] const std::vector<double>& row_major() const noexcept { return data_; }

private:
    std::size_t dim_;
    std::vector<double> data_;
};

struct SpectralDecomposition {
    std::vector<double> eigenvalues;                ///< descending
    std::vector<std::vector<double>> eigenvectors;  ///< eigenvectors[k] pairs with eigenvalues[k]
    std::size_t retained = 0;                       ///< set by the pseudo-inverse cutoff; dim otherwise
};

/// Cyclic Jacobi eigendecomposition. Sweeps until the off-diagonal norm drops
/// below 1e-12 of the Frobenius norm (at most 100 sweeps). Requires dim <= 64
/// and finite entries.
[[nodiscard]] SpectralDecomposition sym_eigen(const SymMatrix& a);

struct PseudoInverse {
    SymMatrix inverse;
    SpectralDecomposition spectrum;  ///< eigenvalues after clamping negatives to zero
};

/// Inverts `a` on the leading eigen-subspace carrying at least `eig_cutoff`
/// of the (clamped) spectrum mass. Eigenvalues at or below 1e-12 * lambda_max
/// are never inverted. Throws NumericError if no eigenvalue is positive.
[[nodiscard]] PseudoInverse spectral_pseudo_inverse_detail(const SymMatrix& a, double eig_cutoff);
[[nodiscard]] SymMatrix spectral_pseudo_inverse(const SymMatrix& a, double eig_cutoff);

}  // namespace nvinfo
