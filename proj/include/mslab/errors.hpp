#pragma once

#include <stdexcept>
#include <string>

namespace mslab {

// Base class for all library errors. Specific conditions get their own type
// so callers can distinguish recoverable situations (window too large, bad
// config key) from genuine geometry failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SelfIntersection : Error {
    explicit SelfIntersection(const std::string& m) : Error("self-intersection: " + m) {}
};
struct OutsideContainer : Error {
    explicit OutsideContainer(const std::string& m) : Error("outside container: " + m) {}
};
struct NotConverged : Error {
    explicit NotConverged(const std::string& m) : Error("iteration did not converge: " + m) {}
};
struct DegenerateCurve : Error {
    explicit DegenerateCurve(const std::string& m) : Error("degenerate curve: " + m) {}
};
struct TubeViolation : Error {
    explicit TubeViolation(const std::string& m) : Error("tube violation: " + m) {}
};
struct UnsupportedBase : Error {
    explicit UnsupportedBase(const std::string& m) : Error("unsupported base curve: " + m) {}
};
struct IllConditioned : Error {
    explicit IllConditioned(const std::string& m) : Error("ill-conditioned configuration: " + m) {}
};
struct GridMismatch : Error {
    explicit GridMismatch(const std::string& m) : Error("grid mismatch: " + m) {}
};
struct ParameterOutOfRange : Error {
    explicit ParameterOutOfRange(const std::string& m) : Error("parameter out of range: " + m) {}
};
struct NoContraction : Error {
    explicit NoContraction(const std::string& m) : Error("no contraction: " + m) {}
};
struct ConstraintViolation : Error {
    explicit ConstraintViolation(const std::string& m) : Error("constraint violation: " + m) {}
};
struct NonPositiveCoefficient : Error {
    explicit NonPositiveCoefficient(const std::string& m) : Error("non-positive coefficient: " + m) {}
};
struct NonPositiveSeries : Error {
    explicit NonPositiveSeries(const std::string& m) : Error("non-positive series: " + m) {}
};
struct NotAnEquilibrium : Error {
    explicit NotAnEquilibrium(const std::string& m) : Error("not an equilibrium: " + m) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error("config error: " + m) {}
};

} // namespace mslab
