#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace relcond {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class NormKind { L1, L2, Linf };

const char* to_string(NormKind kind);
NormKind parse_norm(const std::string& name);

/// Numerical knobs shared by the iterative and combinatorial routines.
struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_iter = 10000;
  std::uint64_t seed = 0;
};

enum class ErrorKind {
  ZeroMatrix,
  Infeasible,
  Unbounded,
  DimensionMismatch,
  NotInSet,
  NotPolyhedral,
  TooLarge,
  DegenerateImage,
  NoSubspaceCone,
  NotSubspaceImage,
  AllColumnsEqual,
  DomainError,
  Undefined,
  UnsupportedStructure,
  NotConverged,
  SingletonSet,
  PreconditionViolated,
  VNotConstant,
  ProxUnavailable,
  DegenerateWeights,
  IncompatibleCertificates,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace relcond
