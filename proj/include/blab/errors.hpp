#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace blab {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input text or JSON could not be interpreted.
struct ParseError : Error {
    using Error::Error;
};

/// File could not be read or written.
struct IoError : Error {
    using Error::Error;
};

/// A block fails the exact doubly stochastic precondition.
struct NotDoublyStochastic : Error {
    enum class Axis { Row, Col };
    Axis axis;
    std::uint64_t index;          // 1-based offending row or column
    std::string sum;              // offending sum, formatted

    NotDoublyStochastic(Axis ax, std::uint64_t idx, std::string s)
        : Error((ax == Axis::Row ? "row " : "column ") + std::to_string(idx) +
                " sums to " + s + ", expected 1"),
          axis(ax), index(idx), sum(std::move(s)) {}
};

/// A block fails the doubly substochastic precondition.
struct NotSubstochastic : Error {
    enum class Axis { Row, Col, Entry };
    Axis axis;
    std::uint64_t index;
    std::string value;

    NotSubstochastic(Axis ax, std::uint64_t idx, std::string v)
        : Error((ax == Axis::Entry ? "entry in row "
                 : ax == Axis::Row ? "row "
                                   : "column ") +
                std::to_string(idx) +
                (ax == Axis::Entry ? " is negative: " : " sums to ") + v),
          axis(ax), index(idx), value(std::move(v)) {}
};

/// A requested computation exceeds its enumeration budget.
struct BudgetExceeded : Error {
    using Error::Error;
};

/// The gap lower bound (n - p^2)/n is vacuous because p^2 >= n.
struct PTooLarge : Error {
    using Error::Error;
};

/// No witness columns are available for the gap construction.
struct WitnessUnavailable : Error {
    using Error::Error;
};

/// Internal inconsistency: a doubly stochastic residual admitted no
/// perfect matching on its support.
struct NoPerfectMatching : Error {
    using Error::Error;
};

/// Power iteration failed to converge; carries the last iterate.
struct PowerIterationNoConvergence : Error {
    double last_estimate;
    explicit PowerIterationNoConvergence(double last)
        : Error("power iteration did not converge; last estimate " +
                std::to_string(last)),
          last_estimate(last) {}
};

}  // namespace blab
