#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spsense {

// Inconsistent dimensions between operands.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input that makes an operation meaningless (zero row, zero operator norm).
struct DegenerateInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Adaptive run produced a non-finite estimate. Carries the iteration index.
struct DivergenceError : std::runtime_error {
    DivergenceError(std::int64_t iter, const std::string& what_arg)
        : std::runtime_error(what_arg), iteration(iter) {}
    std::int64_t iteration;
};

// Closed-form evaluation hit a vanishing denominator.
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace spsense
