#pragma once

#include <stdexcept>
#include <string>

namespace rhlab {

/// Process exit codes used by the command-line front end.
enum class ExitCode : int {
    ok = 0,
    config_error = 2,
    numerical_failure = 3,
    resource_guard = 4,
};

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

/// Invalid input: bad configuration, out-of-domain arguments.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ExitCode::config_error, what) {}
};

/// An algorithm failed to produce a trustworthy answer.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ExitCode::numerical_failure, what) {}
};

/// A requested computation exceeds the configured memory or size budget.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(ExitCode::resource_guard, what) {}
};

/// Coulomb softening drives a local transverse frequency imaginary.
class ChainUnstable : public DomainError {
public:
    ChainUnstable(int ion, const std::string& what) : DomainError(what), ion_(ion) {}
    int ion() const noexcept { return ion_; }

private:
    int ion_;
};

}  // namespace rhlab
