#pragma once

#include <memory>
#include <string>

#include "relcond/objectives.hpp"

namespace relcond {

enum class ReferenceKind { SquaredEuclidean, NegativeEntropy, Custom };

/// Reference function h of a Bregman distance.
struct ReferenceFn {
  ReferenceKind kind = ReferenceKind::SquaredEuclidean;
  ScalarFn eval;
  GradFn grad;

  static ReferenceFn squared_euclidean();
  static ReferenceFn negative_entropy();
  static ReferenceFn custom(ScalarFn eval, GradFn grad);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  std::string describe() const;
};

/// D_h(y, x) = h(y) - h(x) - <grad h(x), y - x>.
double bregman(const ReferenceFn& h, const Vec& y, const Vec& x);

/// Gauge of X - x at y - x.
double radial(const ConvexSet& X, const Vec& y, const Vec& x);

/// Gauge of X - X at y - x.
double diametral(const ConvexSet& X, const Vec& y, const Vec& x);

/**
 * Ratio of <grad f(x), x - y> (clamped at zero) to the smallest, over vertex
 * supports of x, of the largest gap <grad f(x), a - u>.
 *
 * @throws Error(Undefined) when the denominator vanishes and the numerator does not.
 */
double gradiental(const ConvexSet& X, const Objective& f, const Vec& y, const Vec& x);

enum class DistanceKind { Bregman, SquaredNorm, Radial, Diametral, Gradiental };

/// A distance-like function D(y, x) >= 0 with D(x, x) = 0.
struct DistanceFn {
  DistanceKind kind = DistanceKind::SquaredNorm;
  NormKind norm = NormKind::L2;
  ReferenceFn h;
  std::shared_ptr<const ConvexSet> set;
  std::shared_ptr<const Objective> objective;

  static DistanceFn bregman_of(const ReferenceFn& h);
  /// 1/2 |y - x|^2.
  static DistanceFn squared_norm(NormKind norm);
  /// radial(y, x)^2 / 2.
  static DistanceFn radial_sq(const ConvexSet& X);
  /// diametral(y, x)^2 / 2.
  static DistanceFn diametral_sq(const ConvexSet& X);
  /// gradiental(y, x)^2 / 2.
  static DistanceFn gradiental_sq(const ConvexSet& X, const Objective& f);

  double operator()(const Vec& y, const Vec& x) const;
  /// The norm when D is 1/2 |.|^2 for some norm (including the Euclidean Bregman case).
  bool squared_norm_kind(NormKind* out = nullptr) const;
  std::string describe() const;
};

}  // namespace relcond
