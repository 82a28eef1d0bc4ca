#pragma once

#include <stdexcept>
#include <string>

namespace sfair {

// Bad user input: malformed files, out-of-range options. CLI exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inconsistent artifacts: checkpoint/dataset shape mismatch. CLI exit code 3.
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric failure: divergence, non-convergence. CLI exit code 4.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sfair
