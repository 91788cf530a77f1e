#pragma once

#include <stdexcept>
#include <string>

namespace nlpm {

// Validation failure with a stable machine-readable code ("DisjointWindows",
// "InadmissibleBeta", ...) in front of the human-readable message.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code))
    {
    }
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Solver failures (Newton divergence, continuation stall, singular systems).
class SolverError : public std::runtime_error {
public:
    SolverError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code))
    {
    }
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

} // namespace nlpm
