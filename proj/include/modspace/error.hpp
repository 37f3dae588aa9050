#ifndef MODSPACE_ERROR_HPP
#define MODSPACE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace modspace {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (bad exponent, dimension mismatch, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An experiment configuration that fails validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold for the given inputs.
class PreconditionError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw DomainError(message);
    }
}

}  // namespace modspace

#endif  // MODSPACE_ERROR_HPP
