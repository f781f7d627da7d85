#pragma once

#include <stdexcept>
#include <string>

namespace fdaprog {

/// Base error for all modules; `module` names the stage that failed so the
/// CLI can surface "error [module]: message".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error("[" + module + "] " + message), module_(std::move(module)) {}

    const std::string& module() const { return module_; }

private:
    std::string module_;
};

/// Malformed input text (bad field count, non-numeric token, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but violates a structural invariant (non-contiguous cycles, ...).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (singular system, degenerate sample, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Bad configuration key or value.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fdaprog
