#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grassgeo {

enum class ErrorKind {
    NumericalFailure,
    Singularity,
    Precondition,
    Domain,
    ConjugateToChart,
    OnPolarDivisor,
    LeftChart,
    WrongChart,
    UnsupportedSpace,
    DiastasisUndefined,
    DegenerateSpec,
    Overflow,
    Size,
    Consistency,
};

/// Stable machine-readable name, e.g. "on_polar_divisor".
std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `value()` carries the offending
/// number when there is one (a singular value, a determinant modulus, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<double> value = std::nullopt)
        : std::runtime_error(message), kind_(kind), value_(value) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<double> value() const noexcept { return value_; }

private:
    ErrorKind kind_;
    std::optional<double> value_;
};

}  // namespace grassgeo
