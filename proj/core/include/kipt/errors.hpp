#pragma once

#include <stdexcept>
#include <string>

namespace kipt {

/// Caller violated an API precondition (bad shape, bad index, bad argument).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input lies outside the mathematical domain of the operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Extending a factorization hit a non-positive (or below-threshold) pivot.
struct SingularExtension : std::runtime_error {
    SingularExtension(int block_index, int pivot_index, double pivot)
        : std::runtime_error("singular extension: block " + std::to_string(block_index) +
                             ", pivot " + std::to_string(pivot_index) + " = " +
                             std::to_string(pivot)),
          block_index(block_index),
          pivot_index(pivot_index),
          pivot(pivot) {}

    int block_index;   ///< index of the block (point) whose append failed
    int pivot_index;   ///< offending pivot within the block
    double pivot;      ///< its value
};

/// Invalid experiment configuration (unknown key, bad value, registry miss).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kipt
