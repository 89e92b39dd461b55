#pragma once

#include <stdexcept>
#include <string>

namespace wmgame {

// Bad inputs: out-of-range parameters, malformed config/CSV, invalid
// solver parameters. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Estimation failures: insufficient data, missing anchor point, shape
// mismatches. CLI maps this to exit code 3.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wmgame
