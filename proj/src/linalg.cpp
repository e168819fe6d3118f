#include <cmath>

#include "relcond/numerics.hpp"

namespace relcond {

double norm(const Vec& v, NormKind kind) {
  switch (kind) {
    case NormKind::L1: return v.lpNorm<1>();
    case NormKind::L2: return v.norm();
    case NormKind::Linf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

Mat vstack(const Mat& top, const Mat& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols()) fail(ErrorKind::DimensionMismatch, "vstack column mismatch");
  Mat out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

std::vector<Vec> columns_of(const Mat& A) {
  std::vector<Vec> cols;
  cols.reserve(A.cols());
  for (int j = 0; j < A.cols(); ++j) cols.emplace_back(A.col(j));
  return cols;
}

Mat matrix_of(const std::vector<Vec>& cols, int rows) {
  Mat A(rows, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) fail(ErrorKind::DimensionMismatch, "column length mismatch");
    A.col(static_cast<int>(j)) = cols[j];
  }
  return A;
}

Polyhedron::Polyhedron(int dim) : A_ub(0, dim), b_ub(0), A_eq(0, dim), b_eq(0) {}

int Polyhedron::dim() const { return static_cast<int>(std::max(A_ub.cols(), A_eq.cols())); }

void Polyhedron::add_ineq(const Vec& a, double b) {
  A_ub.conservativeResize(A_ub.rows() + 1, a.size());
  A_ub.row(A_ub.rows() - 1) = a.transpose();
  b_ub.conservativeResize(b_ub.size() + 1);
  b_ub(b_ub.size() - 1) = b;
}

void Polyhedron::add_eq(const Vec& a, double b) {
  A_eq.conservativeResize(A_eq.rows() + 1, a.size());
  A_eq.row(A_eq.rows() - 1) = a.transpose();
  b_eq.conservativeResize(b_eq.size() + 1);
  b_eq(b_eq.size() - 1) = b;
}

bool Polyhedron::contains(const Vec& x, double tol) const {
  if (x.size() != dim()) fail(ErrorKind::DimensionMismatch, "point dimension differs from polyhedron");
  for (int i = 0; i < A_ub.rows(); ++i) {
    if (A_ub.row(i).dot(x) > b_ub(i) + tol) return false;
  }
  for (int i = 0; i < A_eq.rows(); ++i) {
    if (std::abs(A_eq.row(i).dot(x) - b_eq(i)) > tol) return false;
  }
  return true;
}

std::vector<Vec> enumerate_vertices(const Polyhedron& P, long max_combinations) {
  const int n = P.dim();
  const int m = static_cast<int>(P.A_ub.rows());
  const int r = P.A_eq.rows() > 0 ? numerical_rank(P.A_eq) : 0;
  const int k = n - r;
  std::vector<Vec> out;
  if (k < 0 || k > m) return out;

  // Binomial count guard.
  double count = 1.0;
  for (int i = 0; i < k; ++i) count = count * (m - i) / (i + 1);
  if (count > static_cast<double>(max_combinations)) {
    fail(ErrorKind::TooLarge, "vertex enumeration exceeds the combination cap");
  }

  const double scale = 1.0 + (P.b_ub.size() ? P.b_ub.cwiseAbs().maxCoeff() : 0.0) +
                       (P.b_eq.size() ? P.b_eq.cwiseAbs().maxCoeff() : 0.0);
  const double feas_tol = 1e-9 * scale;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  Mat M(P.A_eq.rows() + k, n);
  Vec rhs(P.A_eq.rows() + k);
  if (P.A_eq.rows() > 0) {
    M.topRows(P.A_eq.rows()) = P.A_eq;
    rhs.head(P.A_eq.rows()) = P.b_eq;
  }
  while (true) {
    for (int i = 0; i < k; ++i) {
      M.row(P.A_eq.rows() + i) = P.A_ub.row(idx[i]);
      rhs(P.A_eq.rows() + i) = P.b_ub(idx[i]);
    }
    Eigen::FullPivLU<Mat> lu(M);
    lu.setThreshold(1e-10);
    if (lu.rank() == n) {
      Vec x = M.colPivHouseholderQr().solve(rhs);
      if ((M * x - rhs).cwiseAbs().maxCoeff() <= feas_tol && P.contains(x, feas_tol)) {
        bool dup = false;
        for (const Vec& v : out) {
          if ((v - x).cwiseAbs().maxCoeff() <= 1e-9 * scale) {
            dup = true;
            break;
          }
        }
        if (!dup) out.push_back(x);
      }
    }
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == m - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

}  // namespace relcond
