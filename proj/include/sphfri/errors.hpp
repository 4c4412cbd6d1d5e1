#pragma once

#include <exception>
#include <string>
#include <utility>

namespace sphfri {

// Base for numerical failures raised by the library. Recovery tags errors with
// the pipeline stage they escaped from, so callers see where things broke
// without losing the concrete error type.
class Error : public std::exception {
public:
    explicit Error(std::string message) : message_(std::move(message)) {}

    const char* what() const noexcept override { return message_.c_str(); }

    void tag_stage(const std::string& stage) {
        message_ = "[" + stage + "] " + message_;
    }

private:
    std::string message_;
};

// Triangular solve hit a zero diagonal entry.
class SingularDiagonalError : public Error {
public:
    using Error::Error;
};

// Vandermonde nodes coincide, the system is singular.
class DuplicateNodeError : public Error {
public:
    using Error::Error;
};

// The two smallest singular values coincide within tolerance, so the null
// space is not one-dimensional and the filter coefficients are not unique.
class AmbiguousNullSpaceError : public Error {
public:
    using Error::Error;
};

// An end coefficient of the annihilating filter vanished, so the polynomial
// does not have the expected number of finite nonzero roots.
class DegenerateCoefficientError : public Error {
public:
    using Error::Error;
};

// Coefficient bandlimit too small for the requested number of Diracs.
class BandlimitError : public Error {
public:
    using Error::Error;
};

// Not enough sequence values to stack the minimum number of matrix rows.
class InsufficientRowsError : public Error {
public:
    using Error::Error;
};

// A recovered node is zero; its longitude is undefined.
class ZeroNodeError : public Error {
public:
    using Error::Error;
};

// A recovered amplitude is too small to divide by safely.
class SmallAmplitudeError : public Error {
public:
    using Error::Error;
};

// Rejection sampling could not place all Diracs within the attempt budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

// Truth and estimate have different numbers of Diracs.
class CountMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace sphfri
