#pragma once

#include <stdexcept>
#include <string>

namespace orcpool {

// Malformed input: bad edges, schema violations, unreadable files.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Out-of-range or inconsistent parameters for an operation.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation requires data the object does not carry (e.g. attributes).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Solver failure, infeasible marginals, NaN during training.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace orcpool
