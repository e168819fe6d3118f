#include "relcond/types.hpp"

namespace relcond {

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "L1";
    case NormKind::L2: return "L2";
    case NormKind::Linf: return "Linf";
  }
  return "?";
}

NormKind parse_norm(const std::string& name) {
  if (name == "L1" || name == "l1") return NormKind::L1;
  if (name == "L2" || name == "l2") return NormKind::L2;
  if (name == "Linf" || name == "linf" || name == "LINF") return NormKind::Linf;
  fail(ErrorKind::InvalidArgument, "unknown norm '" + name + "'");
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotInSet: return "NotInSet";
    case ErrorKind::NotPolyhedral: return "NotPolyhedral";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DegenerateImage: return "DegenerateImage";
    case ErrorKind::NoSubspaceCone: return "NoSubspaceCone";
    case ErrorKind::NotSubspaceImage: return "NotSubspaceImage";
    case ErrorKind::AllColumnsEqual: return "AllColumnsEqual";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::Undefined: return "Undefined";
    case ErrorKind::UnsupportedStructure: return "UnsupportedStructure";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::SingletonSet: return "SingletonSet";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::VNotConstant: return "VNotConstant";
    case ErrorKind::ProxUnavailable: return "ProxUnavailable";
    case ErrorKind::DegenerateWeights: return "DegenerateWeights";
    case ErrorKind::IncompatibleCertificates: return "IncompatibleCertificates";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "?";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace relcond
