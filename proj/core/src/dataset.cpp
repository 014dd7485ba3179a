#include "nvinfo/dataset.hpp"

#include "nvinfo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

namespace nvinfo {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

double parse_number(std::string_view field, std::size_t line_no) {
    if (field.empty()) throw InputError(at_line(line_no) + "empty cell");
    // from_chars rejects a leading '+', accept it for friendliness.
    if (field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw InputError(at_line(line_no) + "non-numeric cell '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        throw InputError(at_line(line_no) + "non-finite cell '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
    if (names_.empty()) throw InputError("dataset has no columns");
    if (names_.size() != columns_.size()) {
        throw InputError("dataset column-name count does not match column count");
    }
    std::set<std::string_view> seen;
    for (const auto& name : names_) {
        if (!seen.insert(name).second) throw InputError("duplicate column name '" + name + "'");
    }
    n_rows_ = columns_.front().size();
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (columns_[j].size() != n_rows_) {
            throw InputError("column '" + names_[j] + "' has " + std::to_string(columns_[j].size()) +
                             " rows, expected " + std::to_string(n_rows_));
        }
        if (!std::all_of(columns_[j].begin(), columns_[j].end(), [](double v) { return std::isfinite(v); })) {
            throw InputError("column '" + names_[j] + "' contains a non-finite value");
        }
    }
    if (n_rows_ < 2) {
        throw InputError("dataset needs at least 2 rows, got " + std::to_string(n_rows_));
    }
}

bool Dataset::has_column(std::string_view name) const noexcept {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> Dataset::column(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InputError("unknown column '" + std::string(name) + "'");
    return columns_[static_cast<std::size_t>(it - names_.begin())];
}

std::span<const double> Dataset::column(std::size_t index) const {
    if (index >= columns_.size()) throw InputError("column index out of range");
    return columns_[index];
}

Dataset parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        for (const auto field : split_fields(line)) {
            if (field.empty()) throw InputError(at_line(line_no) + "empty column name in header");
            if (std::find(names.begin(), names.end(), field) != names.end()) {
                throw InputError(at_line(line_no) + "duplicate column name '" + std::string(field) + "'");
            }
            names.emplace_back(field);
        }
        break;
    }
    if (names.empty()) throw InputError("missing header line");

    std::vector<std::vector<double>> columns(names.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != names.size()) {
            throw InputError(at_line(line_no) + "ragged row: expected " + std::to_string(names.size()) +
                             " fields, got " + std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            columns[j].push_back(parse_number(fields[j], line_no));
        }
    }
    if (columns.front().empty()) throw InputError("zero data rows");
    if (columns.front().size() < 2) throw InputError("need at least 2 data rows, got 1");
    return Dataset(std::move(names), std::move(columns));
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open data file '" + path.string() + "'");
    try {
        return parse_csv(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_csv(const Dataset& d, std::ostream& out) {
    const auto& names = d.names();
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << d.column(j)[i];
        out << '\n';
    }
    out.precision(old_precision);
}

Dataset resample_rows(const Dataset& d, std::span<const std::size_t> indices) {
    const std::size_t n = d.n_rows();
    std::vector<std::vector<double>> columns(d.n_columns());
    for (std::size_t j = 0; j < d.n_columns(); ++j) {
        const auto source = d.column(j);
        auto& target = columns[j];
        target.reserve(indices.size());
        for (const std::size_t idx : indices) {
            if (idx >= n) {
                throw InputError("resample index " + std::to_string(idx) + " out of range [0, " +
                                 std::to_string(n) + ")");
            }
            target.push_back(source[idx]);
        }
    }
    return Dataset(d.names(), std::move(columns));
}

}  // namespace nvinfo
