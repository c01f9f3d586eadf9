#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pam {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad n, negative t, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// An object is too fine for the grid it is sampled on (mollifier, kernel, wavelet).
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Two operands live on different grids or time meshes.
class GridMismatch : public Error {
public:
    using Error::Error;
};

// Malformed PAMF stream or manifest.
class FormatError : public Error {
public:
    using Error::Error;
};

// A time integrator produced inf/nan.
class NonFiniteError : public Error {
public:
    NonFiniteError(const std::string& what, double time)
        : Error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

// Picard iteration did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

// Invalid experiment configuration; carries the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

}  // namespace pam
