#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nvinfo {

/// Immutable table of named numeric columns, all of equal length.
///
/// Invariants enforced at construction: at least one column, unique column
/// names, equal column lengths, at least two rows, all values finite.
class Dataset {
public:
    Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns);

    [[nodiscard]] std::size_t n_rows() const noexcept { return n_rows_; }
    [[nodiscard]] std::size_t n_columns() const noexcept { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }

    [[nodiscard]] bool has_column(std::string_view name) const noexcept;
    /// Throws InputError for an unknown column.
    [[nodiscard]] std::span<const double> column(std::string_view name) const;
    [[nodiscard]] std::span<const double> column(std::size_t index) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::size_t n_rows_ = 0;
};

/// Parses comma-separated numeric text with a header line. Errors carry the
/// 1-based line number of the offending line.
[[nodiscard]] Dataset parse_csv(std::istream& in);
[[nodiscard]] Dataset load_csv(const std::filesystem::path& path);

/// Writes the dataset with round-trip (17 significant digit) precision.
void write_csv(const Dataset& d, std::ostream& out);

/// Row k of the result is row indices[k] of `d`. The result may have any
/// length >= 2 (the Dataset invariant).
[[nodiscard]] Dataset resample_rows(const Dataset& d, std::span<const std::size_t> indices);

}  // namespace nvinfo
