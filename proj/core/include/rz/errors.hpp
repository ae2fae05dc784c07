#pragma once

#include <stdexcept>
#include <string>

namespace rz {

/// Invalid physical parameters or an operation evaluated outside its domain.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Analytic band formula hit a negative radicand (coupling above critical).
struct EvanescentMode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Eigenvalues of M*Lambda could not be matched into +/- pairs.
struct PairingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation requires a dynamically stable spectrum but got an unstable one.
struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No minimization restart reached the gradient tolerance.
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Too few usable points for a power-law fit.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Boundary bisection saw a third label inside the bracket.
struct BisectionAmbiguous : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Phase-boundary curves do not cross inside the search range.
struct NoIntersection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested Fock space exceeds the configured dimension cap.
struct DimensionCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative eigensolver ran out of iterations.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed run configuration (unknown or missing key, bad value).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg, std::string key = {})
        : std::runtime_error(msg), offending_key(std::move(key)) {}
    std::string offending_key;
};

}  // namespace rz
