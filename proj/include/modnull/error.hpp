#pragma once

#include <stdexcept>
#include <string>

namespace modnull {

/// Base for all library errors. `context` carries a short machine-readable
/// locator (line number, parameter name, size) for the CLI error object.
class Error : public std::runtime_error {
public:
    Error(const std::string& message, std::string context)
        : std::runtime_error(message), context_(std::move(context)) {}

    const std::string& context() const noexcept { return context_; }
    virtual const char* code() const noexcept = 0;

private:
    std::string context_;
};

/// Malformed or inconsistent input: bad files, out-of-range ids, length mismatch.
class InputError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "input_error"; }
};

/// Well-formed input on which the requested quantity is undefined
/// (degenerate distribution, m = 0, parity violation, size guard).
class DomainError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "domain_error"; }
};

}  // namespace modnull
