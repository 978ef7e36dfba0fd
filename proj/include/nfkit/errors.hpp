#pragma once

#include <stdexcept>
#include <string>

namespace nfkit {

// Bad argument or violated precondition.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Observation point sits on an element (distance or radius of zero).
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input outside the range a formula is defined for, e.g. D/lambda < 0.5.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Quadrature or root bracketing gave up.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The request cannot be met, e.g. no focal point reachable.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nfkit
