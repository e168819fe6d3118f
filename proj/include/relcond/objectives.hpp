#pragma once

#include <functional>
#include <string>
#include <vector>

#include "relcond/sets.hpp"

namespace relcond {

struct DistanceFn;

using ScalarFn = std::function<double(const Vec&)>;
using GradFn = std::function<Vec(const Vec&)>;

/// Strongly convex outer function g of a composite objective g(Ax) + <c, x>.
struct StrongFn {
  enum class Kind { SquaredDistance, General };
  Kind kind = Kind::SquaredDistance;
  /// Center of g(z) = 1/2 |z - b|_2^2 when kind is SquaredDistance.
  Vec b;
  ScalarFn eval;
  GradFn grad;
  double L_g = 1.0;
  double mu_g = 1.0;
  NormKind norm = NormKind::L2;

  static StrongFn squared_distance(const Vec& b);
  static StrongFn general(ScalarFn eval, GradFn grad, double L_g, double mu_g, NormKind norm = NormKind::L2);

  double value(const Vec& z) const;
  Vec gradient(const Vec& z) const;
  double bregman(const Vec& y, const Vec& z) const;
};

enum class ObjectiveKind { Composite, Exponential, Custom };

/**
 * A differentiable convex objective scaled by a positive weight.
 *
 * Composite objectives are weight * (g(Ax) + <c, x>). The exponential family
 * is weight * exp(a x) on the real line.
 */
class Objective {
 public:
  /// weight/2 * |Ax - b|_2^2.
  static Objective quadratic(const Mat& A, const Vec& b, double weight = 1.0);
  static Objective composite(const Mat& A, const StrongFn& g, const Vec& c = Vec());
  static Objective exponential(double rate);
  static Objective custom(int dim, ScalarFn eval, GradFn grad, std::string name = "custom");

  ObjectiveKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_composite() const { return kind_ == ObjectiveKind::Composite; }
  /// Composite with g a squared distance.
  bool is_quadratic() const { return is_composite() && g_.kind == StrongFn::Kind::SquaredDistance; }
  bool has_linear_term() const { return c_.size() > 0 && c_.cwiseAbs().maxCoeff() > 0.0; }

  const Mat& A() const { return A_; }
  const StrongFn& g() const { return g_; }
  /// Linear term, zero-filled when absent.
  Vec c() const { return c_.size() ? c_ : Vec::Zero(dim_); }
  double rate() const { return rate_; }
  double weight() const { return weight_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Objective scaled(double lambda) const;
  /// The same objective with weight one.
  Objective unit() const;
  std::string describe() const;

 private:
  ObjectiveKind kind_ = ObjectiveKind::Custom;
  int dim_ = 0;
  Mat A_;
  StrongFn g_;
  Vec c_;
  double rate_ = 0.0;
  double weight_ = 1.0;
  ScalarFn eval_;
  GradFn grad_;
  std::string name_;
};

/// D_f(y, x) = f(y) - f(x) - <grad f(x), y - x>.
double bregman_f(const Objective& f, const Vec& y, const Vec& x);

/// min |z - x| over z in X with Az = Ay.
double z_set_distance(const Objective& f, const ConvexSet& X, const Vec& y, const Vec& x, NormKind norm);

/// Optimal value and optimal set of min f over X.
struct Solution {
  double f_star = 0.0;
  Vec x_hat;
  /// The optimal set as an H-rep slice of X.
  Polyhedron slice{0};
  bool singleton = false;
  /// Common image A x over the optimal set (composite objectives).
  Vec w_star;
  double accuracy = 0.0;
  /// Frank-Wolfe gap (bounded sets) or projected-gradient residual at x_hat.
  double gap = 0.0;
  std::string method;
};

Solution solve_reference(const Objective& f, const ConvexSet& X, double tol = 1e-10);

/// Distance from x to the optimal set in the given norm.
double distance_to_optimum(const Solution& sol, const Vec& x, NormKind norm);

struct ProjectedPoint {
  Vec point;
  /// True when the minimizer is not unique and a lexicographic representative was taken.
  bool tie = false;
};

/// argmin over the optimal set of D(., x).
ProjectedPoint project_to_optimum(const Solution& sol, const Vec& x, const DistanceFn& D);

}  // namespace relcond
