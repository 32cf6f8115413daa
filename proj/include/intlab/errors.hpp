#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace intlab {

// Exit classification used by the CLI: config errors exit 2, numerical
// failures exit 3.
enum class ErrorClass { config = 2, numerical = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string module, std::string op, const std::string& what)
        : std::runtime_error(what), cls_(cls), module_(std::move(module)), op_(std::move(op)) {}

    ErrorClass error_class() const noexcept { return cls_; }
    const std::string& module_name() const noexcept { return module_; }
    const std::string& operation() const noexcept { return op_; }

private:
    ErrorClass cls_;
    std::string module_;
    std::string op_;
};

// Bad user input, invalid parameter combinations, schema violations.
class ConfigError : public Error {
public:
    ConfigError(std::string module, std::string op, const std::string& what)
        : Error(ErrorClass::config, std::move(module), std::move(op), what) {}
};

// Violated operation precondition detected at runtime.
class ContractError : public Error {
public:
    ContractError(std::string module, std::string op, const std::string& what)
        : Error(ErrorClass::config, std::move(module), std::move(op), what) {}
};

// Base for runtime numerical failures.
class NumericalError : public Error {
public:
    NumericalError(std::string module, std::string op, const std::string& what)
        : Error(ErrorClass::numerical, std::move(module), std::move(op), what) {}
};

// Evaluation blew up (collision, non-finite rhs, ...). Carries the time at
// which the problem was detected when one is meaningful.
class SingularityError : public NumericalError {
public:
    SingularityError(std::string module, std::string op, const std::string& what, double when)
        : NumericalError(std::move(module), std::move(op), what), when_(when) {}
    double when() const noexcept { return when_; }

private:
    double when_;
};

// Requested tolerance not reached within the allotted budget.
class AccuracyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Input left the mathematical domain of the operation.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A field that must be strictly positive was not.
class PositivityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Closed-form parameter derivation refused (separatrix / equilibrium data).
class DegeneracyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Multi-valued profile inversion: a shock has formed.
class ShockFormedError : public NumericalError {
public:
    ShockFormedError(std::string module, std::string op, const std::string& what,
                     std::vector<double> roots)
        : NumericalError(std::move(module), std::move(op), what), roots_(std::move(roots)) {}
    const std::vector<double>& roots() const noexcept { return roots_; }

private:
    std::vector<double> roots_;
};

}  // namespace intlab
