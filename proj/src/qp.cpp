#include <algorithm>
#include <cmath>
#include <limits>

#include "relcond/numerics.hpp"

namespace relcond {

namespace {

// Minimizer of |Q a| over the affine hull {sum a = 1} of the columns of Q.
Vec affine_minimizer(const Mat& Q) {
  const int k = static_cast<int>(Q.cols());
  Mat K = Mat::Zero(k + 1, k + 1);
  K.topLeftCorner(k, k) = Q.transpose() * Q;
  K.block(0, k, k, 1).setOnes();
  K.block(k, 0, 1, k).setOnes();
  Vec rhs = Vec::Zero(k + 1);
  rhs(k) = 1.0;
  Vec sol = K.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

}  // namespace

MinNormResult min_norm_qp(const Vec& target, const std::vector<Vec>& hull_points, double tol) {
  if (hull_points.empty()) fail(ErrorKind::InvalidArgument, "hull_points must be nonempty");
  const int dim = static_cast<int>(target.size());
  const int np = static_cast<int>(hull_points.size());
  Mat Q(dim, np);
  for (int i = 0; i < np; ++i) {
    if (hull_points[i].size() != dim) fail(ErrorKind::DimensionMismatch, "hull point dimension");
    Q.col(i) = hull_points[i] - target;
  }
  double max_sq = 0.0;
  int start = 0;
  for (int i = 0; i < np; ++i) {
    max_sq = std::max(max_sq, Q.col(i).squaredNorm());
    if (Q.col(i).squaredNorm() < Q.col(start).squaredNorm()) start = i;
  }
  const double wtol = 1e-14;
  std::vector<int> S{start};
  std::vector<double> lam{1.0};
  Vec x = Q.col(start);

  for (int major = 0; major < 1000; ++major) {
    int j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < np; ++i) {
      const double v = x.dot(Q.col(i));
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= tol * std::max(1.0, max_sq)) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    lam.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      Mat QS(dim, S.size());
      for (size_t t = 0; t < S.size(); ++t) QS.col(t) = Q.col(S[t]);
      const Vec alpha = affine_minimizer(QS);
      bool interior = true;
      for (int t = 0; t < alpha.size(); ++t) interior = interior && alpha(t) > wtol;
      if (interior) {
        for (size_t t = 0; t < S.size(); ++t) lam[t] = alpha(t);
        break;
      }
      double theta = 1.0;
      for (size_t t = 0; t < S.size(); ++t) {
        if (alpha(t) <= wtol && lam[t] - alpha(t) > 0) theta = std::min(theta, lam[t] / (lam[t] - alpha(t)));
      }
      for (size_t t = 0; t < S.size(); ++t) lam[t] = (1.0 - theta) * lam[t] + theta * alpha(t);
      std::vector<int> S2;
      std::vector<double> l2;
      for (size_t t = 0; t < S.size(); ++t) {
        if (lam[t] > wtol) {
          S2.push_back(S[t]);
          l2.push_back(lam[t]);
        }
      }
      if (S2.empty()) {
        S2.push_back(S.back());
        l2.push_back(1.0);
      }
      double total = 0.0;
      for (double v : l2) total += v;
      for (double& v : l2) v /= total;
      S = S2;
      lam = l2;
    }
    x.setZero();
    for (size_t t = 0; t < S.size(); ++t) x += lam[t] * Q.col(S[t]);
  }

  MinNormResult res;
  res.dist = x.norm();
  res.witness = target + x;
  res.weights = Vec::Zero(np);
  for (size_t t = 0; t < S.size(); ++t) res.weights(S[t]) = lam[t];
  return res;
}

Vec project_polyhedron(const Vec& z, const Polyhedron& P, int max_iter) {
  const int n = static_cast<int>(z.size());
  if (P.dim() != n) fail(ErrorKind::DimensionMismatch, "projection dimension");
  Vec x = lp_solve(Vec::Zero(n), P).argmin;
  const double scale = 1.0 + z.cwiseAbs().maxCoeff() + x.cwiseAbs().maxCoeff();
  const int m_eq = static_cast<int>(P.A_eq.rows());
  const int m_ub = static_cast<int>(P.A_ub.rows());

  std::vector<int> W;
  auto working = [&]() {
    Mat Aw(m_eq + W.size(), n);
    if (m_eq) Aw.topRows(m_eq) = P.A_eq;
    for (size_t t = 0; t < W.size(); ++t) Aw.row(m_eq + t) = P.A_ub.row(W[t]);
    return Aw;
  };
  {
    int rank = m_eq ? numerical_rank(P.A_eq) : 0;
    for (int i = 0; i < m_ub; ++i) {
      if (std::abs(P.A_ub.row(i).dot(x) - P.b_ub(i)) <= 1e-10 * scale) {
        W.push_back(i);
        const int r2 = numerical_rank(working());
        if (r2 > rank) {
          rank = r2;
        } else {
          W.pop_back();
        }
      }
    }
  }

  for (int it = 0; it < max_iter; ++it) {
    const Mat Aw = working();
    const Mat N = null_basis(Aw);
    const Vec g = x - z;
    const Vec p = -(N * (N.transpose() * g));
    if (p.cwiseAbs().maxCoeff() <= 1e-12 * scale || N.cols() == 0) {
      if (W.empty()) return x;
      const Vec y = Aw.transpose().colPivHouseholderQr().solve(-g);
      int worst = -1;
      double most = -1e-11 * scale;
      for (size_t t = 0; t < W.size(); ++t) {
        if (y(m_eq + t) < most) {
          most = y(m_eq + t);
          worst = static_cast<int>(t);
        }
      }
      if (worst < 0) return x;
      W.erase(W.begin() + worst);
      continue;
    }
    double alpha = 1.0;
    int block = -1;
    for (int i = 0; i < m_ub; ++i) {
      if (std::find(W.begin(), W.end(), i) != W.end()) continue;
      const double ap = P.A_ub.row(i).dot(p);
      if (ap > 1e-14 * scale) {
        const double step = std::max(0.0, (P.b_ub(i) - P.A_ub.row(i).dot(x)) / ap);
        if (step < alpha) {
          alpha = step;
          block = i;
        }
      }
    }
    x += alpha * p;
    if (block >= 0) W.push_back(block);
  }
  fail(ErrorKind::NotConverged, "active-set projection did not converge");
}

double hull_distance(const Vec& target, const std::vector<Vec>& points, NormKind kind) {
  if (kind == NormKind::L2) return min_norm_qp(target, points).dist;
  const int n = static_cast<int>(target.size());
  const int k = static_cast<int>(points.size());
  // Variables: weights (k, nonneg) then residual bounds.
  const int ne = kind == NormKind::L1 ? n : 1;
  Polyhedron P(k + ne);
  for (int r = 0; r < n; ++r) {
    Vec a = Vec::Zero(k + ne);
    for (int i = 0; i < k; ++i) a(i) = points[i](r);
    const int e = kind == NormKind::L1 ? k + r : k;
    Vec up = a;
    up(e) = -1.0;
    P.add_ineq(up, target(r));
    Vec lo = -a;
    lo(e) = -1.0;
    P.add_ineq(lo, -target(r));
  }
  Vec ones = Vec::Zero(k + ne);
  ones.head(k).setOnes();
  P.add_eq(ones, 1.0);
  Vec cost = Vec::Zero(k + ne);
  cost.tail(ne).setOnes();
  return lp_solve(cost, P, true).optimum;
}

std::pair<double, Vec> polyhedron_distance(const Vec& x, const Polyhedron& P, NormKind kind) {
  const int n = static_cast<int>(x.size());
  if (kind == NormKind::L2) {
    Vec p = project_polyhedron(x, P);
    return {(p - x).norm(), p};
  }
  const int ne = kind == NormKind::L1 ? n : 1;
  Polyhedron Q(n + ne);
  for (int i = 0; i < P.A_ub.rows(); ++i) {
    Vec a = Vec::Zero(n + ne);
    a.head(n) = P.A_ub.row(i).transpose();
    Q.add_ineq(a, P.b_ub(i));
  }
  for (int i = 0; i < P.A_eq.rows(); ++i) {
    Vec a = Vec::Zero(n + ne);
    a.head(n) = P.A_eq.row(i).transpose();
    Q.add_eq(a, P.b_eq(i));
  }
  for (int r = 0; r < n; ++r) {
    const int e = kind == NormKind::L1 ? n + r : n;
    Vec up = Vec::Zero(n + ne);
    up(r) = 1.0;
    up(e) = -1.0;
    Q.add_ineq(up, x(r));
    Vec lo = Vec::Zero(n + ne);
    lo(r) = -1.0;
    lo(e) = -1.0;
    Q.add_ineq(lo, -x(r));
  }
  Vec cost = Vec::Zero(n + ne);
  cost.tail(ne).setOnes();
  std::vector<bool> nonneg(n + ne, false);
  for (int e = n; e < n + ne; ++e) nonneg[e] = true;
  const LpResult r = lp_solve(cost, Q, nonneg);
  return {r.optimum, r.argmin.head(n)};
}

}  // namespace relcond
