#pragma once

#include <stdexcept>
#include <string>

namespace fixpoint {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// A point's structure does not match the space it was used with,
/// e.g. a scalar handed to a sequence space.
class StructureError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the domain of a space or mapping.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested annulus or ball cannot be sampled in the given space.
class SamplerError : public Error {
public:
    using Error::Error;
};

/// A parameter is outside its admissible range (r, lambda, eta, ...).
class ParamError : public Error {
public:
    using Error::Error;
};

}  // namespace fixpoint
