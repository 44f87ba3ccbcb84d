#include "grassgeo/errors.hpp"

namespace grassgeo {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NumericalFailure: return "numerical_failure";
        case ErrorKind::Singularity: return "singularity";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::ConjugateToChart: return "conjugate_to_chart";
        case ErrorKind::OnPolarDivisor: return "on_polar_divisor";
        case ErrorKind::LeftChart: return "left_chart";
        case ErrorKind::WrongChart: return "wrong_chart";
        case ErrorKind::UnsupportedSpace: return "unsupported_space";
        case ErrorKind::DiastasisUndefined: return "diastasis_undefined";
        case ErrorKind::DegenerateSpec: return "degenerate_spec";
        case ErrorKind::Overflow: return "overflow";
        case ErrorKind::Size: return "size";
        case ErrorKind::Consistency: return "consistency";
    }
    return "unknown";
}

}  // namespace grassgeo
