#pragma once

#include <stdexcept>
#include <string>

namespace rwre {

/// Raised for inputs outside an operation's domain (bad probabilities,
/// non-stochastic matrices, infeasible moment tuples, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative numerical method fails to converge.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string &what, double last_iterate)
        : std::runtime_error(what), last_iterate_(last_iterate) {}

    double last_iterate() const noexcept { return last_iterate_; }

private:
    double last_iterate_;
};

} // namespace rwre
