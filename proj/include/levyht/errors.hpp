#pragma once

#include <stdexcept>
#include <string>

namespace levyht {

// Invalid or out-of-range inputs (CLI exit code 2).
class parameter_error : public std::invalid_argument {
public:
    explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Mathematically infeasible request, e.g. thresholds that no rectangle can
// satisfy (CLI exit code 3).
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: divergent quadrature, bracket failure, overflow
// (CLI exit code 4).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace levyht
