#pragma once

#include <stdexcept>
#include <string>

namespace mmt {

// Base class for all library errors; message carries the failing detail.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside its documented domain (bad index, bad range, ...).
class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& what) : Error(what) {}
};

// A formula was evaluated at a point where a denominator vanishes.
class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& what) : Error(what) {}
};

// An operation was requested in a regime where it is not defined.
class NotApplicableError : public Error {
public:
    explicit NotApplicableError(const std::string& what) : Error(what) {}
};

// An internal cross-check failed (e.g. a mixed probability left [0,1]).
class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& what) : Error(what) {}
};

// A requested artifact (price vector, schedule) cannot be constructed
// without violating a market invariant.
class ConstructionError : public Error {
public:
    explicit ConstructionError(const std::string& what) : Error(what) {}
};

// Numerical routine failed to converge to the requested tolerance.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

// Sampling scheme became too inefficient to be trustworthy.
class EfficiencyError : public Error {
public:
    explicit EfficiencyError(const std::string& what) : Error(what) {}
};

// Scenario file could not be parsed or failed validation.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace mmt
