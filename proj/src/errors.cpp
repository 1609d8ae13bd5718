#include "plap/errors.hpp"

namespace plap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DimensionRegime: return "DimensionRegime";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InterpolationError: return "InterpolationError";
    case ErrorKind::SingularGradient: return "SingularGradient";
    case ErrorKind::NonPositiveValue: return "NonPositiveValue";
    case ErrorKind::NotSupercritical: return "NotSupercritical";
    case ErrorKind::NegativeWeightExponent: return "NegativeWeightExponent";
    case ErrorKind::OriginSingularity: return "OriginSingularity";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::RegimeError: return "RegimeError";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::NotDecaying: return "NotDecaying";
    case ErrorKind::CrossedZero: return "CrossedZero";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::BoundaryDominanceViolated: return "BoundaryDominanceViolated";
    case ErrorKind::NotPHarmonic: return "NotPHarmonic";
  }
  return "Unknown";
}

}  // namespace plap
