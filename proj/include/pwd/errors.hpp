#pragma once

#include <stdexcept>
#include <string>

namespace pwd {

// Base class for all library failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid scalar argument or parameter (non-finite input, nonpositive lambda, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed or inadmissible data (CSV problems, too few samples, duplicate ids).
class DataError : public Error {
public:
    using Error::Error;
};

// A fit ran out of iterations. Carries the last iterate so callers can inspect it.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double alpha, double beta)
        : Error(what), alpha(alpha), beta(beta) {}
    double alpha;
    double beta;
};

// Structurally degenerate fit: rank-deficient data, zero variance scaling,
// exactly zero slope.
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

// A leave-one-out refit failed inside the jackknife.
class InferenceError : public Error {
public:
    InferenceError(const std::string& what, int failing_index)
        : Error(what), failing_index(failing_index) {}
    int failing_index;
};

}  // namespace pwd
