#pragma once

#include <string>
#include <vector>

#include "relcond/sets.hpp"

namespace relcond {

/**
 * Polyhedral cone {d : ineq * [d; w] <= 0, eq * [d; w] = 0 for some w}.
 * The auxiliary block w is empty for ordinary cones and nonempty for cones
 * obtained by homogenizing a polyhedron.
 */
struct Cone {
  int dim = 0;
  int aux = 0;
  Mat ineq;
  Mat eq;
  /// Indices of the set's inequality rows that are active (tangent cones).
  std::vector<int> active;
  /// The point at which a tangent cone was taken.
  Vec at;

  static Cone full(int n);
  bool contains(const Vec& d, double tol = 1e-9) const;
};

/// Extreme rays and a lineality basis of an ordinary cone.
struct ConeGenerators {
  std::vector<Vec> rays;
  Mat lineality;
};

ConeGenerators cone_generators(const Cone& C);

/// The set itself as a cone (requires X.is_cone()).
Cone cone_of_set(const ConvexSet& X);

/// Cone {d : x + t d in X for some t > 0} of a polyhedral X at x in X.
Cone tangent_cone(const ConvexSet& X, const Vec& x, double tol = 1e-9);

/// One tangent cone per distinct active set of X (deduplicated).
std::vector<Cone> enumerate_tangent_cones(const ConvexSet& X, int max_cones = 4096);

/// {d : x + t d in X and A(x + t d) in conv(A(S)) for some t > 0}.
Cone restricted_tangent_cone(const ConvexSet& X, const Vec& x, const Mat& A, const std::vector<Vec>& S);

/// True when A(C) is a linear subspace.
bool image_is_subspace(const Mat& A, const Cone& C);

/// Orthonormal basis of span A(C).
Mat image_basis(const Mat& A, const Cone& C);

struct NormValue {
  double value = 0.0;
  std::string method;
};

/// sup { |Ax|_out : x in C, |x|_in <= 1 }.
NormValue op_norm(const Mat& A, const Cone& C, NormKind norm_in, NormKind norm_out);

/// inf { |Ax|_out : x in C, |x|_in = 1 } (C must be an ordinary cone).
NormValue cone_min_gain(const Mat& A, const Cone& C, NormKind norm_in, NormKind norm_out);

struct InvNormOptions {
  int directions = 4096;
  unsigned seed = 0;
  bool refine = true;
};

/**
 * sup over v in A(C), |v|_out <= 1, of inf { |x|_in : x in C, Ax = v }.
 *
 * Polyhedral input norms with a subspace image are handled exactly through the
 * facets of A(C intersected with the input ball). Otherwise the unit sphere of
 * the image is discretized and each direction solves a min-norm preimage
 * problem, which yields a lower bound on the supremum.
 *
 * @throws Error(DegenerateImage) when A(C) = {0}.
 */
NormValue inv_norm(const Mat& A, const Cone& C, NormKind norm_in, NormKind norm_out,
                   const InvNormOptions& opts = {});

struct HoffmanResult {
  double value = 0.0;
  std::string method;
  int cones_total = 0;
  int cones_used = 0;
  std::vector<int> argmin_active;
  Vec argmin_point;
  std::vector<std::string> conventions;
};

/// min over tangent cones C of X with subspace image A(C) of 1/|(A|C)^{-1}|.
HoffmanResult hoffman_min(const Mat& A, const ConvexSet& X, NormKind norm_in, NormKind norm_out,
                          const InvNormOptions& opts = {});

struct RestrictedOptions {
  int samples = 2000;
  unsigned seed = 0;
  double radius = 10.0;
};

/// inf over x in X of 1/|(A|T_X(x;A,S))^{-1}| for S with a single image point.
HoffmanResult hoffman_min_restricted(const Mat& A, const ConvexSet& X, const std::vector<Vec>& S,
                                     NormKind norm_in, NormKind norm_out, const RestrictedOptions& opts = {});

/// Same quantity when the restricted set is given as the slice {x in X : Ax = w}.
HoffmanResult hoffman_min_restricted_slice(const Mat& A, const ConvexSet& X, const Vec& w,
                                           NormKind norm_in, NormKind norm_out,
                                           const RestrictedOptions& opts = {});

struct Face {
  std::vector<int> vertex_subset;
  Vec normal;
  double offset = 0.0;
};

/// All nonempty faces of conv(columns), each with a supporting functional.
std::vector<Face> enumerate_faces(const std::vector<Vec>& columns);

struct FacialDistance {
  double value = 0.0;
  std::vector<std::vector<int>> argmin_faces;
};

/// min over proper nonempty faces F of dist(F, conv(columns not on F)).
FacialDistance facial_distance(const std::vector<Vec>& columns, NormKind norm_out);

/// Maximum pairwise distance between columns.
double column_diameter(const std::vector<Vec>& columns, NormKind norm_out);

}  // namespace relcond
