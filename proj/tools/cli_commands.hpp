#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nvinfo::cli {

enum ExitCode : int { kOk = 0, kNumericFailure = 1, kInvalidInput = 2 };

enum class OutputFormat { kJson, kText };

struct EstimateArgs {
    std::string data_path;
    std::string config_path;
    std::optional<std::string> method;
    std::optional<std::size_t> nboots;
    std::optional<std::uint64_t> seed;
    std::optional<double> eig_cutoff;
    std::optional<std::string> cov_scale;
    std::optional<unsigned> threads;
    OutputFormat output = OutputFormat::kJson;
};

struct NewsvendorArgs {
    std::string data_path;
    double price = 0.0;
    double cost = 0.0;
    std::string model = "normal";
    std::optional<std::string> column;  ///< defaults to the first column
    int fractile_digits = 4;
    OutputFormat output = OutputFormat::kText;
};

struct SimulateArgs {
    std::string scenario_path;
    std::vector<std::size_t> sweep;  ///< non-empty: run convergence_sweep over these sizes
    OutputFormat output = OutputFormat::kJson;
};

struct DescribeArgs {
    std::string data_path;
    OutputFormat output = OutputFormat::kText;
};

// Each command writes its report to `out` only on success; diagnostics go to
// `err`. The return value is the process exit code.
int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err);
int cmd_newsvendor(const NewsvendorArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_describe(const DescribeArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a command.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nvinfo::cli
