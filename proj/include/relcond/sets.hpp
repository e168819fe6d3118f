#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "relcond/numerics.hpp"

namespace relcond {

enum class SetKind { StandardSimplex, NonnegOrthant, Box, Subspace, PolytopeV, PolyhedronH, Ball2 };

const char* to_string(SetKind kind);

/// A closed convex reference set. Values are immutable; derived data such as
/// the inequality description is computed lazily and shared between copies.
class ConvexSet {
 public:
  static ConvexSet simplex(int n);
  static ConvexSet orthant(int n);
  /// Bounds may be infinite.
  static ConvexSet box(const Vec& lower, const Vec& upper);
  /// Linear span of the columns of basis (must be linearly independent).
  static ConvexSet subspace(const Mat& basis);
  static ConvexSet polytope(const std::vector<Vec>& vertices);
  static ConvexSet polyhedron(const Polyhedron& P);
  static ConvexSet ball(const Vec& center, double radius);

  SetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string describe() const;

  bool is_polyhedral() const { return kind_ != SetKind::Ball2; }
  bool is_bounded() const;
  /// True when the set is a convex cone (closed under nonnegative scaling).
  bool is_cone() const;

  /// Inequality description. Throws NotPolyhedral for Ball2.
  const Polyhedron& h_rep() const;
  /// Vertex list for bounded polyhedral sets, in a deterministic order.
  const std::vector<Vec>& vertices() const;

  bool contains(const Vec& x, double tol = 1e-9) const;
  /// Euclidean projection onto the set.
  Vec project(const Vec& x) const;
  /// Index of a vertex minimizing <g, v>; ties go to the lowest index.
  int linear_oracle(const Vec& g) const;
  /// Orthonormal basis of span(X - X).
  Mat direction_basis() const;
  /// A point in the relative interior (or a canonical feasible point).
  Vec interior_point() const;
  /// Draws a point of the set; unbounded directions are truncated at radius.
  Vec sample(std::mt19937_64& rng, double radius = 10.0) const;

  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const Mat& basis() const { return basis_; }
  const Vec& center() const { return lower_; }
  double radius() const { return radius_; }

 private:
  struct Cache;
  SetKind kind_ = SetKind::StandardSimplex;
  int dim_ = 0;
  Vec lower_;
  Vec upper_;
  Mat basis_;
  double radius_ = 0.0;
  std::vector<Vec> given_vertices_;
  Polyhedron given_h_;
  std::shared_ptr<Cache> cache_;

  void init_cache();
};

/// Membership test with absolute tolerance tol.
bool membership(const ConvexSet& X, const Vec& x, double tol);

/// Euclidean projection onto the standard simplex {x >= 0, sum x = 1}.
Vec project_simplex(const Vec& x);

/// Inequality description of conv(points), with equalities for its affine hull.
Polyhedron hull_h_rep(const std::vector<Vec>& points);

}  // namespace relcond
