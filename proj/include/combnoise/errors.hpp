#pragma once

#include <stdexcept>
#include <string>

namespace combnoise {

// Invalid physical or configuration input (bad ranges, inconsistent
// metadata, unsupported options). CLI maps this to exit code 2.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A measurement set that cannot be assembled into a covariance matrix
// (missing, duplicate, or mismatched entries). CLI maps this to exit code 3.
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical procedure failed to meet its certificate (non-convergence,
// non-finite intermediates). CLI maps this to exit code 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace combnoise
