#include <cmath>

#include "relcond/builtins.hpp"

namespace relcond {

namespace {

using Mode = Expectation::Mode;

Expectation near(const std::string& key, double target, double abs_tol, const std::string& source) {
  return {key, target, abs_tol, 0.0, Mode::Near, source};
}

Expectation relative(const std::string& key, double target, double rel_tol, const std::string& source) {
  return {key, target, 0.0, rel_tol, Mode::Near, source};
}

Expectation at_most(const std::string& key, double target, const std::string& source) {
  return {key, target, 0.0, 0.0, Mode::AtMost, source};
}

Expectation at_least(const std::string& key, double target, const std::string& source) {
  return {key, target, 0.0, 0.0, Mode::AtLeast, source};
}

Mat rows(std::initializer_list<std::initializer_list<double>> r) {
  Mat m(static_cast<int>(r.size()), static_cast<int>(r.begin()->size()));
  int i = 0;
  for (const auto& row : r) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Mat example_matrix(double eps) { return rows({{1.0, -1.0, 0.0}, {-eps, -eps, 1.0}}); }

Problem problem(const std::string& name, const Objective& f, const ConvexSet& X, NormKind in, NormKind out) {
  Problem p;
  p.name = name;
  p.objective = f;
  p.set = X;
  p.norm_in = in;
  p.norm_out = out;
  p.distance = DistanceFn::squared_norm(in);
  return p;
}

std::vector<Vec> pentagon() {
  std::vector<Vec> V(5, Vec(2));
  V[0] << 0.0, 0.0;
  V[1] << 2.0, 0.0;
  V[2] << 3.0, 1.5;
  V[3] << 1.5, 3.0;
  V[4] << -0.5, 1.5;
  return V;
}

}  // namespace

bool Expectation::holds(double value) const {
  if (std::isnan(value)) return false;
  switch (mode) {
    case Mode::Near: return std::abs(value - target) <= abs_tol + rel_tol * std::abs(target);
    case Mode::AtMost: return value <= target;
    case Mode::AtLeast: return value >= target;
  }
  return false;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"ex1a",         "ex1b",          "ex1c",          "ex2-norms",
                                                 "ex4-simplex",  "ex5-counter",   "fig-facial-I3", "fig-facial-I4",
                                                 "fw-interior",  "fwa-polytope"};
  return names;
}

Builtin make_builtin(const std::string& name) {
  Builtin b;
  b.name = name;
  const std::string we = "worked-example";
  const std::string der = "derived";
  const std::string el = "elementary";
  if (name == "ex1a") {
    const Mat A = rows({{1, 2, 0, 1}, {0, 1, 1, 0}, {1, 3, 1, 1}});
    b.description = "rank-deficient least squares over the whole space";
    b.problem = problem(name, Objective::quadratic(A, Vec::Zero(3)), ConvexSet::subspace(Mat::Identity(4, 4)),
                        NormKind::L2, NormKind::L2);
    b.expectations = {near("L", 18.71779788708135, 1e-9, der), near("mu", 1.282202112918652, 1e-9, der)};
  } else if (name == "ex1b") {
    const double M = 100.0, eps = 0.01;
    Vec d(4);
    d << 1.0, 1.0, M, eps;
    Mat B = Mat::Zero(4, 2);
    B(0, 0) = B(1, 1) = 1.0;
    b.description = "diagonal matrix restricted to a coordinate subspace";
    b.problem = problem(name, Objective::quadratic(d.asDiagonal(), Vec::Zero(4)), ConvexSet::subspace(B),
                        NormKind::L2, NormKind::L2);
    b.expectations = {near("L", 1.0, 1e-9, we), near("mu", 1.0, 1e-9, we), near("L_f", 1e4, 1e-6, we),
                      near("mu_f", 1e-4, 1e-12, we)};
  } else if (name == "ex1c") {
    b.description = "signed smallest singular value over the nonnegative orthant";
    b.problem = problem(name, Objective::quadratic(example_matrix(0.1), Vec::Zero(2)), ConvexSet::orthant(3),
                        NormKind::L2, NormKind::L2);
    b.expectations = {near("mu", 0.02, 1e-6, we), near("sigma_min_sq", 1.02, 1e-9, we), near("L", 2.0, 1e-9, der)};
  } else if (name == "ex2-norms") {
    b.description = "restricted operator norms with l1 input";
    b.problem = problem(name, Objective::quadratic(example_matrix(0.1), Vec::Zero(2)), ConvexSet::orthant(3),
                        NormKind::L1, NormKind::L2);
    b.expectations = {near("op_norm", std::sqrt(1.01), 1e-4, we), near("inv_norm", 10.0 * (1 - 5e-4), 5e-3, we),
                      at_most("inv_norm", 10.0, we)};
  } else if (name == "ex4-simplex") {
    b.description = "identity over the simplex with l1 distance";
    b.problem = problem(name, Objective::quadratic(Mat::Identity(3, 3), Vec::Zero(3)), ConvexSet::simplex(3),
                        NormKind::L1, NormKind::L2);
    b.solver = "mirror";
    b.expectations = {near("L", 0.5, 1e-6, der), near("mu", 0.375, 1e-4, der)};
  } else if (name == "ex5-counter") {
    Vec c = Vec::Zero(3);
    c(2) = 1.0;
    b.description = "quadratic plus linear term where quasi strong convexity fails";
    b.problem = problem(name, Objective::composite(rows({{1, -1, 0}}), StrongFn::squared_distance(Vec::Zero(1)), c),
                        ConvexSet::simplex(3), NormKind::L1, NormKind::L2);
    b.expectations = {at_most("mu_star_sampled", 1e-3, we), relative("mu_sharp_sampled", 0.5, 0.05, we),
                      relative("mu_sharp_X_delta", 0.8, 0.05, we), near("growth_case", 2, 0, we),
                      at_least("growth_bound", 1e-12, we)};
  } else if (name == "fig-facial-I3" || name == "fig-facial-I4") {
    const int n = name == "fig-facial-I3" ? 3 : 4;
    b.description = "facial distance of the identity columns";
    b.problem = problem(name, Objective::quadratic(Mat::Identity(n, n), Vec::Zero(n)), ConvexSet::simplex(n),
                        NormKind::L1, NormKind::L2);
    const double phi = n == 3 ? std::sqrt(1.5) : 1.0;
    b.expectations = {near("facial_distance", phi, 1e-9, der), near("diameter", std::sqrt(2.0), 1e-12, el),
                      near("hoffman", phi / 2.0, 1e-4, der)};
  } else if (name == "fw-interior") {
    Vec c(3);
    c << 0.5, 0.25, 0.25;
    b.description = "Frank-Wolfe toward an interior minimizer of the simplex";
    b.problem = problem(name, Objective::quadratic(Mat::Identity(3, 3), c), ConvexSet::simplex(3), NormKind::L2,
                        NormKind::L2);
    b.solver = "fw";
    b.expectations = {near("verify_passed", 1, 0, der), near("fw_decrease_ok", 1, 0, der),
                      near("optimality_gap_monotone", 1, 0, el), near("bound_L", 2.0, 1e-12, der),
                      near("bound_mu_interior", 0.09375, 1e-12, der)};
  } else if (name == "fwa-polytope") {
    Vec target(2);
    target << 1.0, -0.3;
    b.description = "away-step Frank-Wolfe on a pentagon with the minimizer on an edge";
    b.problem = problem(name, Objective::quadratic(Mat::Identity(2, 2), target), ConvexSet::polytope(pentagon()),
                        NormKind::L2, NormKind::L2);
    b.solver = "fwa";
    b.expectations = {near("verify_passed", 1, 0, der), near("drop_counts_ok", 1, 0, der),
                      near("has_regular", 1, 0, der), near("has_away", 1, 0, der), near("has_drop", 1, 0, der)};
  } else {
    fail(ErrorKind::InvalidArgument, "unknown builtin '" + name + "'");
  }
  return b;
}

}  // namespace relcond
