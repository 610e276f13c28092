#pragma once

#include <stdexcept>
#include <string>

namespace spinrelax {

// Invalid user-supplied input: malformed files, bad units, inconsistent configs.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of a model.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Root search bracket that cannot reach the requested target.
// Carries the range of target values achievable inside the bracket.
class BracketError : public InputError {
public:
    BracketError(const std::string& what, double achievable_lo, double achievable_hi)
        : InputError(what), achievable_lo(achievable_lo), achievable_hi(achievable_hi) {}

    double achievable_lo;
    double achievable_hi;
};

}  // namespace spinrelax
