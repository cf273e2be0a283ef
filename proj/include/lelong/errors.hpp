#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lelong {

// Raised when caller-supplied data violates an operation's precondition.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The exponent data leaves coordinate `axis` unconstrained, so the weight
// has a pole along a whole coordinate subspace rather than only at 0.
class DegenerateIndicator : public InputError {
public:
    explicit DegenerateIndicator(std::size_t axis)
        : InputError("degenerate indicator: Phi independent-direction " + std::to_string(axis + 1)),
          axis_(axis) {}

    std::size_t axis() const noexcept { return axis_; }

private:
    std::size_t axis_;
};

// Numeric procedures that cannot produce an estimate (every node clipped,
// restriction identically -inf, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lelong
