#pragma once

#include <vector>

#include "relcond/types.hpp"

namespace relcond {

double norm(const Vec& v, NormKind kind);

/// Thin singular value decomposition A = U * diag(s) * V^T with s sorted
/// in decreasing order.
struct Svd {
  Mat U;
  Vec s;
  Mat V;
};

/// One-sided Jacobi SVD. Intended for small dense matrices.
Svd jacobi_svd(const Mat& A);

struct SvdExtremes {
  double sigma_max = 0.0;
  double sigma_min_plus = 0.0;
};

/**
 * Largest singular value and smallest singular value above
 * sigma_max * rel_tol.
 *
 * @throws Error(ZeroMatrix) when every entry is at most abs_tol in magnitude.
 */
SvdExtremes svd_extremes(const Mat& A, const Tolerance& tol = {});

/// Numerical rank with cutoff sigma_max * rel_tol.
int numerical_rank(const Mat& A, double rel_tol = 1e-10);

/// Orthonormal basis (as columns) of the range of A.
Mat range_basis(const Mat& A, double rel_tol = 1e-10);

/// Orthonormal basis (as columns) of the null space of A (A has n columns).
Mat null_basis(const Mat& A, double rel_tol = 1e-10);

/// Stacks two matrices with equal column counts.
Mat vstack(const Mat& top, const Mat& bottom);

/// Columns of a matrix as a list of vectors and back.
std::vector<Vec> columns_of(const Mat& A);
Mat matrix_of(const std::vector<Vec>& cols, int rows);

/// {x : A_ub x <= b_ub, A_eq x = b_eq}. Either block may have zero rows.
struct Polyhedron {
  Mat A_ub;
  Vec b_ub;
  Mat A_eq;
  Vec b_eq;

  Polyhedron() = default;
  explicit Polyhedron(int dim);
  int dim() const;
  void add_ineq(const Vec& a, double b);
  void add_eq(const Vec& a, double b);
  bool contains(const Vec& x, double tol) const;
};

struct LpResult {
  double optimum = 0.0;
  Vec argmin;
};

/**
 * Minimizes cost^T x over a polyhedron with the dense tableau simplex method
 * and Bland's pivoting rule. Variables flagged in nonneg are additionally
 * constrained to be nonnegative; all others are free.
 *
 * @throws Error(Infeasible) or Error(Unbounded).
 */
LpResult lp_solve(const Vec& cost, const Polyhedron& P, const std::vector<bool>& nonneg);
LpResult lp_solve(const Vec& cost, const Polyhedron& P, bool all_nonneg = false);

/// True when the polyhedron has a feasible point (phase one only).
bool lp_feasible(const Polyhedron& P, bool all_nonneg = false);

struct MinNormResult {
  double dist = 0.0;
  Vec witness;
  Vec weights;
};

/// Euclidean distance from target to conv(hull_points) by Wolfe's
/// minimum-norm-point algorithm.
MinNormResult min_norm_qp(const Vec& target, const std::vector<Vec>& hull_points,
                          double tol = 1e-12);

/// Euclidean projection of z onto a nonempty polyhedron (primal active set).
Vec project_polyhedron(const Vec& z, const Polyhedron& P, int max_iter = 500);

/// Distance from target to conv(points) measured in the given norm.
double hull_distance(const Vec& target, const std::vector<Vec>& points, NormKind kind);

/// Distance from x to the polyhedron in the given norm, with the minimizer.
std::pair<double, Vec> polyhedron_distance(const Vec& x, const Polyhedron& P, NormKind kind);

/// Vertices of a polyhedron by enumeration of active sets (desk scale).
/// Returns an empty list when the polyhedron has no vertex.
std::vector<Vec> enumerate_vertices(const Polyhedron& P, long max_combinations = 4000000);

}  // namespace relcond
