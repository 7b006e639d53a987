#pragma once

#include <stdexcept>
#include <string>

namespace ultimum {

/// Argument outside the domain of an operation (negative z, x <= 0 for W', ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Parameters that violate psi'(0+) < 0, so the ultimate supremum is not finite.
class DegenerateModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical routine failed to meet its own postcondition (bracketing, sign checks).
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too many simulated paths hit the horizon cap before the drawdown cutoff.
class SimulationQualityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ultimum
