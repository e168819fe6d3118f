#pragma once

#include <string>
#include <vector>

#include "relcond/conditioning.hpp"

namespace relcond {

/// A stored reference value with its tolerance.
struct Expectation {
  enum class Mode { Near, AtMost, AtLeast };
  std::string key;
  double target = 0.0;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  Mode mode = Mode::Near;
  /// Where the reference value comes from: worked-example, derived or elementary.
  std::string source;

  bool holds(double value) const;
};

struct Builtin {
  std::string name;
  std::string description;
  Problem problem;
  /// mirror, fw or fwa; empty when the builtin has no solver stage.
  std::string solver;
  std::vector<Expectation> expectations;
};

const std::vector<std::string>& builtin_names();

/// @throws Error(InvalidArgument) for unknown names.
Builtin make_builtin(const std::string& name);

}  // namespace relcond
