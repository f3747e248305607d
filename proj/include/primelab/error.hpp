#pragma once

#include <stdexcept>
#include <string>

namespace primelab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Request exceeds a configured memory or enumeration ceiling.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sieve weights vanish identically (R or N too small).
class DegenerateWeightsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two evaluation routes that must agree did not.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace primelab
