#include "chol/error.hpp"

#include <sstream>

namespace chol {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::IncompatibleGroup: return "IncompatibleGroup";
    case ErrorKind::NotInOpenOrbit: return "NotInOpenOrbit";
    case ErrorKind::ResidualNotConstant: return "ResidualNotConstant";
    case ErrorKind::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotBlockTriangular: return "NotBlockTriangular";
    case ErrorKind::InvarianceViolated: return "InvarianceViolated";
    case ErrorKind::NotConstant: return "NotConstant";
    case ErrorKind::SingularLambda: return "SingularLambda";
    case ErrorKind::PathHitsVariety: return "PathHitsVariety";
    case ErrorKind::RelationViolated: return "RelationViolated";
    case ErrorKind::SamplingTooCoarse: return "SamplingTooCoarse";
    case ErrorKind::ClosureFailed: return "ClosureFailed";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

std::string_view to_string(MinorFamily family) {
  return family == MinorFamily::Plain ? "plain" : "hat";
}

namespace {

std::string describe_minor(MinorFamily family, int k, double magnitude) {
  std::ostringstream os;
  os << (family == MinorFamily::Plain ? "det A^(" : "det hat(A)^(") << k
     << ") vanishes (|minor| = " << magnitude << ")";
  return os.str();
}

}  // namespace

NotInOpenOrbit::NotInOpenOrbit(MinorFamily family, int k, double magnitude)
    : Error(ErrorKind::NotInOpenOrbit, describe_minor(family, k, magnitude),
            {family == MinorFamily::Plain ? 0 : 1, k}),
      family_(family),
      index_(k),
      magnitude_(magnitude) {}

}  // namespace chol
