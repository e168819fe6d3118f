#include <cmath>
#include <limits>

#include "relcond/numerics.hpp"

namespace relcond {

namespace {

constexpr double kPivotTol = 1e-9;

struct Tableau {
  Mat T;                  // rows 0..m-1 constraints, row m objective; last column rhs
  std::vector<int> basis;
  std::vector<bool> allowed;

  int rows() const { return static_cast<int>(T.rows()) - 1; }
  int cols() const { return static_cast<int>(T.cols()) - 1; }

  void pivot(int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i < T.rows(); ++i) {
      if (i == r) continue;
      const double f = T(i, c);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    basis[r] = c;
  }

  // Bland's rule. Returns false when unbounded.
  bool optimize(int max_iter) {
    const Eigen::Index m = T.rows() - 1;
    const Eigen::Index N = T.cols() - 1;
    for (int it = 0; it < max_iter; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < N; ++j) {
        if (allowed[j] && T(m, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T(i, enter) > kPivotTol) {
          const double ratio = T(i, N) / T(i, enter);
          const double tie = 1e-12 * (1.0 + std::abs(best));
          if (leave < 0 || ratio < best - tie ||
              (std::abs(ratio - best) <= tie && basis[i] < basis[leave])) {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(static_cast<int>(leave), static_cast<int>(enter));
    }
    fail(ErrorKind::NotConverged, "simplex iteration limit reached");
  }
};

}  // namespace

LpResult lp_solve(const Vec& cost, const Polyhedron& P, const std::vector<bool>& nonneg) {
  const int n = static_cast<int>(cost.size());
  if (P.dim() != n && !(P.A_ub.rows() == 0 && P.A_eq.rows() == 0)) {
    fail(ErrorKind::DimensionMismatch, "cost and polyhedron dimensions differ");
  }
  if (static_cast<int>(nonneg.size()) != n) fail(ErrorKind::DimensionMismatch, "nonneg flags size");
  const int m_ub = static_cast<int>(P.A_ub.rows());
  const int m_eq = static_cast<int>(P.A_eq.rows());
  const int m = m_ub + m_eq;

  // Column layout: structural columns, then one slack per inequality, then artificials.
  std::vector<int> pos_col(n), neg_col(n, -1);
  int N = 0;
  for (int j = 0; j < n; ++j) {
    pos_col[j] = N++;
    if (!nonneg[j]) neg_col[j] = N++;
  }
  const int slack0 = N;
  N += m_ub;
  const int art0 = N;

  Mat A = Mat::Zero(m, N);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    const bool ub = i < m_ub;
    const auto row = ub ? P.A_ub.row(i) : P.A_eq.row(i - m_ub);
    for (int j = 0; j < n; ++j) {
      A(i, pos_col[j]) = row(j);
      if (neg_col[j] >= 0) A(i, neg_col[j]) = -row(j);
    }
    if (ub) A(i, slack0 + i) = 1.0;
    b(i) = ub ? P.b_ub(i) : P.b_eq(i - m_ub);
  }

  std::vector<int> basis(m, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (i < m_ub && b(i) >= 0) {
      basis[i] = slack0 + i;
    } else {
      if (b(i) < 0) {
        A.row(i) *= -1.0;
        b(i) *= -1.0;
      }
      basis[i] = art0 + n_art++;
    }
  }
  const int total = art0 + n_art;

  Tableau tab;
  tab.T = Mat::Zero(m + 1, total + 1);
  tab.T.block(0, 0, m, N) = A;
  tab.T.block(0, total, m, 1) = b;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= art0) tab.T(i, basis[i]) = 1.0;
  }
  tab.basis = basis;
  tab.allowed.assign(total, true);
  const int max_iter = 50000;

  const double scale = 1.0 + (m ? b.cwiseAbs().maxCoeff() : 0.0);
  if (n_art > 0) {
    for (int i = 0; i < m; ++i) {
      if (basis[i] >= art0) tab.T.row(m) -= tab.T.row(i);
    }
    for (int a = art0; a < total; ++a) tab.T(m, a) = 0.0;
    tab.optimize(max_iter);
    if (-tab.T(m, total) > 1e-9 * scale) fail(ErrorKind::Infeasible, "linear program has no feasible point");
    // Drive remaining artificials out of the basis; drop redundant rows.
    std::vector<int> keep;
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] >= art0) {
        int c = -1;
        for (int j = 0; j < art0; ++j) {
          if (std::abs(tab.T(i, j)) > kPivotTol) {
            c = j;
            break;
          }
        }
        if (c >= 0) {
          tab.pivot(i, c);
          keep.push_back(i);
        }
      } else {
        keep.push_back(i);
      }
    }
    if (static_cast<int>(keep.size()) < m) {
      Mat T2(keep.size() + 1, total + 1);
      std::vector<int> b2;
      for (size_t r = 0; r < keep.size(); ++r) {
        T2.row(r) = tab.T.row(keep[r]);
        b2.push_back(tab.basis[keep[r]]);
      }
      T2.row(keep.size()) = tab.T.row(m);
      tab.T = T2;
      tab.basis = b2;
    }
    for (int a = art0; a < total; ++a) tab.allowed[a] = false;
  }

  // Phase two objective row.
  Vec c_std = Vec::Zero(total);
  for (int j = 0; j < n; ++j) {
    c_std(pos_col[j]) = cost(j);
    if (neg_col[j] >= 0) c_std(neg_col[j]) = -cost(j);
  }
  const int mr = tab.rows();
  tab.T.row(mr).setZero();
  tab.T.row(mr).head(total) = c_std.transpose();
  for (int i = 0; i < mr; ++i) {
    const double cb = c_std(tab.basis[i]);
    if (cb != 0.0) tab.T.row(mr) -= cb * tab.T.row(i);
  }
  for (int a = art0; a < total; ++a) tab.T(mr, a) = 0.0;
  if (!tab.optimize(max_iter)) fail(ErrorKind::Unbounded, "linear program is unbounded");

  Vec z = Vec::Zero(total);
  for (int i = 0; i < mr; ++i) z(tab.basis[i]) = tab.T(i, total);
  LpResult res;
  res.argmin.resize(n);
  for (int j = 0; j < n; ++j) {
    res.argmin(j) = z(pos_col[j]) - (neg_col[j] >= 0 ? z(neg_col[j]) : 0.0);
  }
  res.optimum = cost.dot(res.argmin);
  return res;
}

LpResult lp_solve(const Vec& cost, const Polyhedron& P, bool all_nonneg) {
  return lp_solve(cost, P, std::vector<bool>(cost.size(), all_nonneg));
}

bool lp_feasible(const Polyhedron& P, bool all_nonneg) {
  try {
    lp_solve(Vec::Zero(P.dim()), P, all_nonneg);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) return false;
    throw;
  }
}

}  // namespace relcond
