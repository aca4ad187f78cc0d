#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncia {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A precondition on an argument value was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Iterative numerical routine failed to converge, or non-finite data was seen.
class NumericalFailure : public Error {
public:
    explicit NumericalFailure(const std::string& what, std::size_t iterations = 0)
        : Error(what), iterations_(iterations) {}

    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

class SingularMatrix : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

/// ZF over a candidate subset whose stacked channel is too ill-conditioned.
class InfeasibleSubset : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class UndefinedCorrelation : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InvalidPilot : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ProtocolViolation : public Error {
public:
    using Error::Error;
};

class SyncTimeout : public Error {
public:
    using Error::Error;
};

class MissingFeedback : public Error {
public:
    MissingFeedback(const std::string& what, std::vector<std::size_t> users)
        : Error(what), users_(std::move(users)) {}

    const std::vector<std::size_t>& users() const noexcept { return users_; }

private:
    std::vector<std::size_t> users_;
};

} // namespace ncia
