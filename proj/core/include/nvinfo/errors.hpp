#pragma once

#include <stdexcept>
#include <string>

namespace nvinfo {

/// Invalid user input: malformed files, bad configuration, violated preconditions.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric procedure could not produce a result (degenerate spectrum,
/// exhausted bootstrap retries, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nvinfo
