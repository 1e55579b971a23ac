#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anosov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a profile, chart or solution.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A conformal factor that is nonpositive or not finite where it must be valid.
class InvalidChartError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Step-size underflow. Carries the interval that was integrated successfully.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& message, double good_lo, double good_hi)
        : Error(message), good_lo_(good_lo), good_hi_(good_hi) {}

    double good_lo() const noexcept { return good_lo_; }
    double good_hi() const noexcept { return good_hi_; }

private:
    double good_lo_;
    double good_hi_;
};

/// Horizon doubling ran out of window before the slope sequence settled.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, double residual)
        : Error(message), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

using Bracket = std::pair<double, double>;

/// A zero of a Jacobi solution (conjugate point) where the caller required none.
class ConjugatePointError : public Error {
public:
    ConjugatePointError(const std::string& message, std::vector<Bracket> brackets)
        : Error(message), brackets_(std::move(brackets)) {}

    const std::vector<Bracket>& brackets() const noexcept { return brackets_; }

private:
    std::vector<Bracket> brackets_;
};

/// A Riccati quotient f'/f requested across a zero of f.
class PoleError : public Error {
public:
    PoleError(const std::string& message, Bracket bracket) : Error(message), bracket_(bracket) {}

    Bracket bracket() const noexcept { return bracket_; }

private:
    Bracket bracket_;
};

/// Malformed sample data, e.g. a nonpositive value fed to a log fit.
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid run or surface configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace anosov
