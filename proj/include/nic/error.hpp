#pragma once

#include <stdexcept>
#include <string>

namespace nic {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters for a map, height function, grid or run configuration.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Argument inside the mathematical domain but outside the supported envelope.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A coefficient of an assembled operator is not finite.
class RegularityError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

class SolveError : public Error {
public:
    using Error::Error;
};

} // namespace nic
