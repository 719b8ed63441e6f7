#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinflow {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or mutually inconsistent parameters (component counts, charts, ranges).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operation not available on this chart, or a point left the chart.
class DomainError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Iterative method stopped without meeting its tolerance. Carries the
/// residual (or update-norm) history for diagnostics.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

class DivergenceError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class ExtractionError : public Error {
public:
    using Error::Error;
};

class DecayError : public Error {
public:
    using Error::Error;
};

/// A least-squares fit with no usable data (for instance a zero sample).
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace spinflow
