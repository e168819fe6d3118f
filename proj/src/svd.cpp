#include <algorithm>
#include <cmath>
#include <numeric>

#include "relcond/numerics.hpp"

namespace relcond {

namespace {

// Hestenes rotations on the columns of W (rows >= cols); V accumulates them.
void one_sided_jacobi(Mat& W, Mat& V) {
  const int n = static_cast<int>(W.cols());
  V = Mat::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double alpha = W.col(i).squaredNorm();
        const double beta = W.col(j).squaredNorm();
        const double gamma = W.col(i).dot(W.col(j));
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Vec wi = W.col(i);
        W.col(i) = c * wi - s * W.col(j);
        W.col(j) = s * wi + c * W.col(j);
        const Vec vi = V.col(i);
        V.col(i) = c * vi - s * V.col(j);
        V.col(j) = s * vi + c * V.col(j);
      }
    }
    if (!rotated) break;
  }
}

}  // namespace

Svd jacobi_svd(const Mat& A) {
  const bool wide = A.rows() < A.cols();
  Mat W = wide ? Mat(A.transpose()) : A;
  Mat V;
  one_sided_jacobi(W, V);
  const int p = static_cast<int>(W.cols());
  Vec s(p);
  for (int k = 0; k < p; ++k) s(k) = W.col(k).norm();
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s(a) > s(b); });

  Svd out;
  out.s.resize(p);
  Mat U(W.rows(), p);
  Mat Vs(V.rows(), p);
  for (int k = 0; k < p; ++k) {
    const int src = order[k];
    out.s(k) = s(src);
    U.col(k) = s(src) > 0 ? Vec(W.col(src) / s(src)) : Vec::Zero(W.rows());
    Vs.col(k) = V.col(src);
  }
  if (wide) {
    out.U = Vs;
    out.V = U;
  } else {
    out.U = U;
    out.V = Vs;
  }
  return out;
}

SvdExtremes svd_extremes(const Mat& A, const Tolerance& tol) {
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() <= tol.abs_tol) {
    fail(ErrorKind::ZeroMatrix, "matrix has no entry above abs_tol");
  }
  const Svd d = jacobi_svd(A);
  SvdExtremes e;
  e.sigma_max = d.s(0);
  e.sigma_min_plus = e.sigma_max;
  for (int k = 0; k < d.s.size(); ++k) {
    if (d.s(k) > e.sigma_max * tol.rel_tol) e.sigma_min_plus = d.s(k);
  }
  return e;
}

int numerical_rank(const Mat& A, double rel_tol) {
  if (A.size() == 0) return 0;
  const Svd d = jacobi_svd(A);
  if (d.s.size() == 0 || d.s(0) <= 1e-300) return 0;
  int r = 0;
  for (int k = 0; k < d.s.size(); ++k) {
    if (d.s(k) > d.s(0) * rel_tol) ++r;
  }
  return r;
}

Mat range_basis(const Mat& A, double rel_tol) {
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) return Mat(A.rows(), 0);
  const Svd d = jacobi_svd(A);
  int r = 0;
  for (int k = 0; k < d.s.size(); ++k) {
    if (d.s(k) > d.s(0) * rel_tol) ++r;
  }
  return d.U.leftCols(r);
}

Mat null_basis(const Mat& A, double rel_tol) {
  const int n = static_cast<int>(A.cols());
  if (A.rows() == 0 || A.cwiseAbs().maxCoeff() == 0.0) return Mat::Identity(n, n);
  // Pad to a square-or-tall matrix so that V is a full basis of R^n.
  Mat padded = Mat::Zero(std::max<Eigen::Index>(A.rows(), n), n);
  padded.topRows(A.rows()) = A;
  const Svd d = jacobi_svd(padded);
  int r = 0;
  for (int k = 0; k < d.s.size(); ++k) {
    if (d.s(k) > d.s(0) * rel_tol) ++r;
  }
  return d.V.rightCols(n - r);
}

}  // namespace relcond
