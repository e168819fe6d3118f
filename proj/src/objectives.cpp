#include <algorithm>
#include <cmath>
#include <limits>

#include "relcond/distances.hpp"
#include "relcond/objectives.hpp"

namespace relcond {

StrongFn StrongFn::squared_distance(const Vec& b) {
  StrongFn g;
  g.kind = Kind::SquaredDistance;
  g.b = b;
  g.eval = [b](const Vec& z) { return 0.5 * (z - b).squaredNorm(); };
  g.grad = [b](const Vec& z) { return Vec(z - b); };
  return g;
}

StrongFn StrongFn::general(ScalarFn eval, GradFn grad, double L_g, double mu_g, NormKind norm) {
  if (!(mu_g > 0.0) || !(L_g >= mu_g)) fail(ErrorKind::InvalidArgument, "need 0 < mu_g <= L_g");
  StrongFn g;
  g.kind = Kind::General;
  g.eval = std::move(eval);
  g.grad = std::move(grad);
  g.L_g = L_g;
  g.mu_g = mu_g;
  g.norm = norm;
  return g;
}

double StrongFn::value(const Vec& z) const { return eval(z); }
Vec StrongFn::gradient(const Vec& z) const { return grad(z); }

double StrongFn::bregman(const Vec& y, const Vec& z) const {
  if (kind == Kind::SquaredDistance) return 0.5 * (y - z).squaredNorm();
  return value(y) - value(z) - gradient(z).dot(y - z);
}

Objective Objective::quadratic(const Mat& A, const Vec& b, double weight) {
  if (A.rows() != b.size()) fail(ErrorKind::DimensionMismatch, "A and b disagree");
  if (!(weight > 0.0)) fail(ErrorKind::InvalidArgument, "weight must be positive");
  Objective f = composite(A, StrongFn::squared_distance(b));
  f.weight_ = weight;
  return f;
}

Objective Objective::composite(const Mat& A, const StrongFn& g, const Vec& c) {
  if (A.rows() == 0 || A.cols() == 0) fail(ErrorKind::InvalidArgument, "empty matrix");
  if (c.size() != 0 && c.size() != A.cols()) fail(ErrorKind::DimensionMismatch, "linear term length");
  Objective f;
  f.kind_ = ObjectiveKind::Composite;
  f.dim_ = static_cast<int>(A.cols());
  f.A_ = A;
  f.g_ = g;
  f.c_ = c;
  f.name_ = g.kind == StrongFn::Kind::SquaredDistance ? "quadratic" : "composite";
  return f;
}

Objective Objective::exponential(double rate) {
  Objective f;
  f.kind_ = ObjectiveKind::Exponential;
  f.dim_ = 1;
  f.rate_ = rate;
  f.name_ = "exponential";
  return f;
}

Objective Objective::custom(int dim, ScalarFn eval, GradFn grad, std::string name) {
  Objective f;
  f.kind_ = ObjectiveKind::Custom;
  f.dim_ = dim;
  f.eval_ = std::move(eval);
  f.grad_ = std::move(grad);
  f.name_ = std::move(name);
  return f;
}

double Objective::value(const Vec& x) const {
  if (x.size() != dim_) fail(ErrorKind::DimensionMismatch, "objective argument length");
  switch (kind_) {
    case ObjectiveKind::Composite:
      return weight_ * (g_.value(A_ * x) + (c_.size() ? c_.dot(x) : 0.0));
    case ObjectiveKind::Exponential:
      return weight_ * std::exp(rate_ * x(0));
    case ObjectiveKind::Custom:
      return weight_ * eval_(x);
  }
  return 0.0;
}

Vec Objective::gradient(const Vec& x) const {
  if (x.size() != dim_) fail(ErrorKind::DimensionMismatch, "objective argument length");
  switch (kind_) {
    case ObjectiveKind::Composite: {
      Vec gr = A_.transpose() * g_.gradient(A_ * x);
      if (c_.size()) gr += c_;
      return weight_ * gr;
    }
    case ObjectiveKind::Exponential:
      return Vec::Constant(1, weight_ * rate_ * std::exp(rate_ * x(0)));
    case ObjectiveKind::Custom:
      return weight_ * grad_(x);
  }
  return Vec();
}

Objective Objective::scaled(double lambda) const {
  if (!(lambda > 0.0)) fail(ErrorKind::InvalidArgument, "scale factor must be positive");
  Objective f = *this;
  f.weight_ *= lambda;
  return f;
}

Objective Objective::unit() const {
  Objective f = *this;
  f.weight_ = 1.0;
  return f;
}

std::string Objective::describe() const {
  std::string s = name_;
  if (weight_ != 1.0) s += " x" + std::to_string(weight_);
  return s;
}

double bregman_f(const Objective& f, const Vec& y, const Vec& x) {
  if (f.is_composite()) return f.weight() * f.g().bregman(f.A() * y, f.A() * x);
  if (f.kind() == ObjectiveKind::Exponential) {
    const double a = f.rate();
    const double ex = std::exp(a * x(0));
    // exp(a y) - exp(a x) - a exp(a x)(y - x), written to avoid cancellation.
    const double t = a * (y(0) - x(0));
    return f.weight() * ex * (std::expm1(t) - t);
  }
  return f.value(y) - f.value(x) - f.gradient(x).dot(y - x);
}

double z_set_distance(const Objective& f, const ConvexSet& X, const Vec& y, const Vec& x, NormKind norm) {
  if (!f.is_composite()) fail(ErrorKind::UnsupportedStructure, "Z-set needs a composite objective");
  Polyhedron P = X.h_rep();
  const Vec w = f.A() * y;
  for (int r = 0; r < f.A().rows(); ++r) P.add_eq(f.A().row(r).transpose(), w(r));
  if (f.has_linear_term()) P.add_eq(f.c(), f.c().dot(y));
  return polyhedron_distance(x, P, norm).first;
}

namespace {

// Minimizes phi(t) = f(x + t d) over [0, t_max] for convex phi.
double line_search(const Objective& f, const Vec& x, const Vec& d, double t_max) {
  const double slope = f.gradient(x).dot(d);
  if (slope >= 0.0) return 0.0;
  if (f.is_quadratic()) {
    const double curv = (f.A() * d).squaredNorm();
    if (curv <= 0.0) return t_max;
    return std::min(t_max, -slope / curv);
  }
  if (f.gradient(x + t_max * d).dot(d) <= 0.0) return t_max;
  double lo = 0.0, hi = t_max;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f.gradient(x + mid * d).dot(d) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Exact minimizer of a quadratic composite over the face cut out by the active rows at x.
Vec polish_on_face(const Objective& f, const Polyhedron& H, const Vec& x) {
  const int n = static_cast<int>(x.size());
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  std::vector<Vec> rows;
  std::vector<double> rhs;
  for (int i = 0; i < H.A_eq.rows(); ++i) {
    rows.push_back(H.A_eq.row(i).transpose());
    rhs.push_back(H.b_eq(i));
  }
  for (int i = 0; i < H.A_ub.rows(); ++i) {
    if (H.b_ub(i) - H.A_ub.row(i).dot(x) <= 1e-9 * scale) {
      rows.push_back(H.A_ub.row(i).transpose());
      rhs.push_back(H.b_ub(i));
    }
  }
  const int k = static_cast<int>(rows.size());
  Mat K = Mat::Zero(n + k, n + k);
  Vec r = Vec::Zero(n + k);
  K.topLeftCorner(n, n) = f.A().transpose() * f.A();
  r.head(n) = f.A().transpose() * f.g().b - f.c();
  for (int i = 0; i < k; ++i) {
    K.block(0, n + i, n, 1) = rows[i];
    K.block(n + i, 0, 1, n) = rows[i].transpose();
    r(n + i) = rhs[i];
  }
  return K.completeOrthogonalDecomposition().solve(r).head(n);
}

Vec fw_away_exact(const Objective& f, const ConvexSet& X, double tol, int max_iter, double& gap) {
  const std::vector<Vec>& V = X.vertices();
  const int N = static_cast<int>(V.size());
  std::vector<double> lam(N, 0.0);
  int start = X.linear_oracle(f.gradient(X.interior_point()));
  lam[start] = 1.0;
  Vec x = V[start];
  gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_iter; ++k) {
    const Vec g = f.gradient(x);
    const int u = X.linear_oracle(g);
    gap = g.dot(x - V[u]);
    const double scale = 1.0 + std::abs(f.value(x));
    if (gap <= tol * scale) break;
    int a = -1;
    for (int i = 0; i < N; ++i) {
      if (lam[i] > 0.0 && (a < 0 || g.dot(V[i]) > g.dot(V[a]))) a = i;
    }
    const double regular = g.dot(V[u] - x);
    const double away = g.dot(x - V[a]);
    if (regular < away || lam[a] >= 1.0) {
      const Vec d = V[u] - x;
      const double t = line_search(f, x, d, 1.0);
      for (double& l : lam) l *= (1.0 - t);
      lam[u] += t;
      x += t * d;
    } else {
      const Vec d = x - V[a];
      const double t_max = lam[a] / (1.0 - lam[a]);
      const double t = line_search(f, x, d, t_max);
      for (double& l : lam) l *= (1.0 + t);
      lam[a] -= t;
      x += t * d;
    }
    for (double& l : lam) {
      if (l < 1e-14) l = 0.0;
    }
  }
  return x;
}

Vec projected_gradient(const Objective& f, const ConvexSet& X, double tol, int max_iter, double& residual) {
  Vec x = X.project(X.interior_point());
  double L = 1.0;
  if (f.is_composite()) {
    const double smax = svd_extremes(f.A()).sigma_max;
    L = std::max(1e-12, f.g().L_g * smax * smax);
  }
  residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_iter; ++k) {
    const Vec g = f.gradient(x);
    Vec next = X.project(x - g / L);
    if (!f.is_composite()) {
      // Backtracking on the smoothness constant.
      while (f.value(next) > f.value(x) + g.dot(next - x) + 0.5 * L * (next - x).squaredNorm() + 1e-15) {
        L *= 2.0;
        next = X.project(x - g / L);
      }
    }
    residual = L * (next - x).norm();
    x = next;
    if (residual <= tol * (1.0 + std::abs(f.value(x)))) break;
  }
  return x;
}

}  // namespace

Solution solve_reference(const Objective& f_in, const ConvexSet& X, double tol) {
  if (f_in.dim() != X.dim()) fail(ErrorKind::DimensionMismatch, "objective and set dimensions differ");
  const Objective f = f_in.unit();
  Solution sol;
  Vec x;
  if (f.kind() == ObjectiveKind::Exponential) {
    // A monotone function attains its minimum at an end of the interval.
    try {
      x = lp_solve(Vec::Constant(1, f.rate()), X.h_rep()).argmin;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Unbounded) fail(ErrorKind::NotConverged, "objective has no minimizer on the set");
      throw;
    }
    sol.gap = 0.0;
    sol.method = "endpoint";
  } else if (X.is_polyhedral() && X.is_bounded()) {
    x = fw_away_exact(f, X, tol, 20000, sol.gap);
    sol.method = "fw-away";
    if (f.is_quadratic()) {
      const Vec p = polish_on_face(f, X.h_rep(), x);
      if (X.contains(p, 1e-12) && f.value(p) <= f.value(x) + 1e-15 * (1.0 + std::abs(f.value(x)))) {
        x = X.project(p);
        const Vec g = f.gradient(x);
        sol.gap = std::max(0.0, g.dot(x - X.vertices()[X.linear_oracle(g)]));
      }
      sol.method = "fw-away+face-polish";
    }
  } else {
    x = projected_gradient(f, X, tol, 200000, sol.gap);
    sol.method = "projected-gradient";
    if (f.is_quadratic() && X.is_polyhedral()) {
      const Vec p = polish_on_face(f, X.h_rep(), x);
      if (X.contains(p, 1e-12) && f.value(p) <= f.value(x) + 1e-15 * (1.0 + std::abs(f.value(x)))) {
        x = X.project(p);
        const Vec g = f.gradient(x);
        sol.gap = (X.project(x - g) - x).norm();
      }
      sol.method = "projected-gradient+face-polish";
    }
  }
  const double scale = 1.0 + std::abs(f.value(x));
  if (!(sol.gap <= std::max(1e-6, tol) * scale)) fail(ErrorKind::NotConverged, "reference solve did not reach the tolerance");

  sol.x_hat = x;
  sol.f_star = f_in.weight() * f.value(x);
  sol.accuracy = f_in.weight() * sol.gap;
  sol.gap *= f_in.weight();
  const int n = X.dim();
  if (f.is_composite() && X.is_polyhedral()) {
    sol.slice = X.h_rep();
    sol.w_star = f.A() * x;
    for (int r = 0; r < f.A().rows(); ++r) sol.slice.add_eq(f.A().row(r).transpose(), sol.w_star(r));
    if (f.has_linear_term()) sol.slice.add_eq(f.c(), f.c().dot(x));
    sol.singleton = ConvexSet::polyhedron(sol.slice).direction_basis().cols() == 0;
  } else {
    sol.slice = Polyhedron(n);
    for (int i = 0; i < n; ++i) sol.slice.add_eq(Vec::Unit(n, i), x(i));
    sol.singleton = true;
    if (f.is_composite()) sol.w_star = f.A() * x;
  }
  return sol;
}

double distance_to_optimum(const Solution& sol, const Vec& x, NormKind norm) {
  if (sol.singleton) return relcond::norm(x - sol.x_hat, norm);
  return polyhedron_distance(x, sol.slice, norm).first;
}

namespace {

// Optimal set points within distance r of x: variables [z; e].
Polyhedron near_slice(const Solution& sol, const Vec& x, NormKind norm, double r) {
  const int n = static_cast<int>(x.size());
  const int ne = norm == NormKind::L1 ? n : 1;
  Polyhedron Q(n + ne);
  for (int i = 0; i < sol.slice.A_ub.rows(); ++i) {
    Vec a = Vec::Zero(n + ne);
    a.head(n) = sol.slice.A_ub.row(i).transpose();
    Q.add_ineq(a, sol.slice.b_ub(i));
  }
  for (int i = 0; i < sol.slice.A_eq.rows(); ++i) {
    Vec a = Vec::Zero(n + ne);
    a.head(n) = sol.slice.A_eq.row(i).transpose();
    Q.add_eq(a, sol.slice.b_eq(i));
  }
  for (int k = 0; k < n; ++k) {
    const int e = norm == NormKind::L1 ? n + k : n;
    Vec up = Vec::Zero(n + ne);
    up(k) = 1.0;
    up(e) = -1.0;
    Q.add_ineq(up, x(k));
    Vec lo = Vec::Zero(n + ne);
    lo(k) = -1.0;
    lo(e) = -1.0;
    Q.add_ineq(lo, -x(k));
  }
  Vec total = Vec::Zero(n + ne);
  total.tail(ne).setOnes();
  Q.add_ineq(total, r);
  for (int k = 0; k < ne; ++k) Q.add_ineq(-Vec::Unit(n + ne, n + k), 0.0);
  return Q;
}

}  // namespace

ProjectedPoint project_to_optimum(const Solution& sol, const Vec& x, const DistanceFn& D) {
  ProjectedPoint out;
  if (sol.singleton) {
    out.point = sol.x_hat;
    return out;
  }
  NormKind norm;
  if (!D.squared_norm_kind(&norm)) {
    fail(ErrorKind::UnsupportedStructure, "projection onto a non-singleton optimal set needs a squared-norm distance");
  }
  if (norm == NormKind::L2) {
    out.point = project_polyhedron(x, sol.slice);
    return out;
  }
  const int n = static_cast<int>(x.size());
  const double d = polyhedron_distance(x, sol.slice, norm).first;
  Polyhedron Q = near_slice(sol, x, norm, d * (1.0 + 1e-9) + 1e-12);
  const int N = Q.dim();
  Vec point(n);
  for (int k = 0; k < n; ++k) {
    const double lo = lp_solve(Vec::Unit(N, k), Q).optimum;
    const double hi = -lp_solve(-Vec::Unit(N, k), Q).optimum;
    if (hi - lo > 1e-9 * (1.0 + std::abs(lo))) out.tie = true;
    point(k) = lo;
    Q.add_eq(Vec::Unit(N, k), lo);
  }
  out.point = point;
  return out;
}

}  // namespace relcond
