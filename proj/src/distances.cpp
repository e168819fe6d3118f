#include <algorithm>
#include <cmath>
#include <numeric>

#include "relcond/distances.hpp"

namespace relcond {

namespace {

void require_members(const ConvexSet& X, const Vec& y, const Vec& x) {
  if (!X.contains(x)) fail(ErrorKind::NotInSet, "x is not in " + X.describe());
  if (!X.contains(y)) fail(ErrorKind::NotInSet, "y is not in " + X.describe());
}

}  // namespace

ReferenceFn ReferenceFn::squared_euclidean() {
  ReferenceFn h;
  h.kind = ReferenceKind::SquaredEuclidean;
  h.eval = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  h.grad = [](const Vec& x) { return x; };
  return h;
}

ReferenceFn ReferenceFn::negative_entropy() {
  ReferenceFn h;
  h.kind = ReferenceKind::NegativeEntropy;
  h.eval = [](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      if (x(i) < 0.0) fail(ErrorKind::DomainError, "entropy of a negative coordinate");
      if (x(i) > 0.0) s += x(i) * std::log(x(i));
    }
    return s;
  };
  h.grad = [](const Vec& x) {
    Vec g(x.size());
    for (int i = 0; i < x.size(); ++i) {
      if (x(i) <= 0.0) fail(ErrorKind::DomainError, "entropy gradient needs positive coordinates");
      g(i) = std::log(x(i)) + 1.0;
    }
    return g;
  };
  return h;
}

ReferenceFn ReferenceFn::custom(ScalarFn eval, GradFn grad) {
  ReferenceFn h;
  h.kind = ReferenceKind::Custom;
  h.eval = std::move(eval);
  h.grad = std::move(grad);
  return h;
}

double ReferenceFn::value(const Vec& x) const { return eval(x); }
Vec ReferenceFn::gradient(const Vec& x) const { return grad(x); }

std::string ReferenceFn::describe() const {
  switch (kind) {
    case ReferenceKind::SquaredEuclidean: return "squared-euclidean";
    case ReferenceKind::NegativeEntropy: return "negative-entropy";
    case ReferenceKind::Custom: return "custom";
  }
  return "custom";
}

double bregman(const ReferenceFn& h, const Vec& y, const Vec& x) {
  if (y.size() != x.size()) fail(ErrorKind::DimensionMismatch, "bregman arguments differ in length");
  switch (h.kind) {
    case ReferenceKind::SquaredEuclidean:
      return 0.5 * (y - x).squaredNorm();
    case ReferenceKind::NegativeEntropy: {
      double s = 0.0;
      for (int i = 0; i < x.size(); ++i) {
        if (x(i) <= 0.0) fail(ErrorKind::DomainError, "entropy Bregman needs x > 0");
        if (y(i) < 0.0) fail(ErrorKind::DomainError, "entropy Bregman needs y >= 0");
        s += x(i) - y(i);
        if (y(i) > 0.0) s += y(i) * std::log(y(i) / x(i));
      }
      return std::max(0.0, s);
    }
    case ReferenceKind::Custom:
      return h.value(y) - h.value(x) - h.gradient(x).dot(y - x);
  }
  return 0.0;
}

double radial(const ConvexSet& X, const Vec& y, const Vec& x) {
  require_members(X, y, x);
  const Vec d = y - x;
  if (d.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  if (X.kind() == SetKind::Ball2) {
    const Vec p = x - X.center();
    const double a = d.squaredNorm();
    const double b = p.dot(d);
    const double c = p.squaredNorm() - X.radius() * X.radius();
    const double t = (-b + std::sqrt(std::max(0.0, b * b - a * c))) / a;
    return 1.0 / t;
  }
  const Polyhedron& H = X.h_rep();
  double t_max = std::numeric_limits<double>::infinity();
  for (int i = 0; i < H.A_ub.rows(); ++i) {
    const double ad = H.A_ub.row(i).dot(d);
    if (ad > 1e-15 * H.A_ub.row(i).norm() * d.norm()) {
      // Measured from y so that facets parallel to d cannot push the gauge above one.
      t_max = std::min(t_max, 1.0 + std::max(0.0, H.b_ub(i) - H.A_ub.row(i).dot(y)) / ad);
    }
  }
  return std::isfinite(t_max) ? 1.0 / t_max : 0.0;
}

double diametral(const ConvexSet& X, const Vec& y, const Vec& x) {
  require_members(X, y, x);
  const Vec d = y - x;
  const int n = static_cast<int>(d.size());
  if (d.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  if (X.kind() == SetKind::Ball2) return d.norm() / (2.0 * X.radius());
  if (X.kind() == SetKind::Box || X.kind() == SetKind::NonnegOrthant) {
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = X.upper()(i) - X.lower()(i);
      if (std::isfinite(w) && w > 0) r = std::max(r, std::abs(d(i)) / w);
    }
    return r;
  }
  // Variables [U; V; delta] with U, V in delta X and U - V = d.
  const Polyhedron& H = X.h_rep();
  const int N = 2 * n + 1;
  Polyhedron P(N);
  for (int part = 0; part < 2; ++part) {
    for (int i = 0; i < H.A_ub.rows(); ++i) {
      Vec a = Vec::Zero(N);
      a.segment(part * n, n) = H.A_ub.row(i).transpose();
      a(2 * n) = -H.b_ub(i);
      P.add_ineq(a, 0.0);
    }
    for (int i = 0; i < H.A_eq.rows(); ++i) {
      Vec a = Vec::Zero(N);
      a.segment(part * n, n) = H.A_eq.row(i).transpose();
      a(2 * n) = -H.b_eq(i);
      P.add_eq(a, 0.0);
    }
  }
  for (int r = 0; r < n; ++r) {
    Vec a = Vec::Zero(N);
    a(r) = 1.0;
    a(n + r) = -1.0;
    P.add_eq(a, d(r));
  }
  std::vector<bool> nonneg(N, false);
  nonneg[2 * n] = true;
  return std::max(0.0, lp_solve(Vec::Unit(N, 2 * n), P, nonneg).optimum);
}

double gradiental(const ConvexSet& X, const Objective& f, const Vec& y, const Vec& x) {
  require_members(X, y, x);
  const std::vector<Vec>& V = X.vertices();
  const int N = static_cast<int>(V.size());
  if (N > 12) fail(ErrorKind::TooLarge, "gradiental distance is limited to 12 vertices");
  const Vec g = f.gradient(x);
  const double scale = 1.0 + g.cwiseAbs().maxCoeff() * (1.0 + x.cwiseAbs().maxCoeff());
  const double num = std::max(0.0, g.dot(x - y));

  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> val(N);
  for (int i = 0; i < N; ++i) val[i] = g.dot(V[i]);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
  const double lowest = val[order.front()];

  // The best support uses only vertices below some level of <g, .>; scan levels upward.
  double denom = val[order.back()] - lowest;
  for (int j = 1; j <= N; ++j) {
    if (j < N && val[order[j]] <= val[order[j - 1]]) continue;
    Polyhedron P(j);
    for (int r = 0; r < x.size(); ++r) {
      Vec a(j);
      for (int t = 0; t < j; ++t) a(t) = V[order[t]](r);
      P.add_eq(a, x(r));
    }
    P.add_eq(Vec::Ones(j), 1.0);
    if (lp_feasible(P, true)) {
      denom = val[order[j - 1]] - lowest;
      break;
    }
  }
  if (num <= 1e-14 * scale) return 0.0;
  if (denom <= 1e-14 * scale) fail(ErrorKind::Undefined, "gradiental distance has a zero denominator");
  return num / denom;
}

DistanceFn DistanceFn::bregman_of(const ReferenceFn& h) {
  DistanceFn D;
  D.kind = DistanceKind::Bregman;
  D.h = h;
  return D;
}

DistanceFn DistanceFn::squared_norm(NormKind norm) {
  DistanceFn D;
  D.kind = DistanceKind::SquaredNorm;
  D.norm = norm;
  return D;
}

DistanceFn DistanceFn::radial_sq(const ConvexSet& X) {
  DistanceFn D;
  D.kind = DistanceKind::Radial;
  D.set = std::make_shared<const ConvexSet>(X);
  return D;
}

DistanceFn DistanceFn::diametral_sq(const ConvexSet& X) {
  DistanceFn D;
  D.kind = DistanceKind::Diametral;
  D.set = std::make_shared<const ConvexSet>(X);
  return D;
}

DistanceFn DistanceFn::gradiental_sq(const ConvexSet& X, const Objective& f) {
  DistanceFn D;
  D.kind = DistanceKind::Gradiental;
  D.set = std::make_shared<const ConvexSet>(X);
  D.objective = std::make_shared<const Objective>(f);
  return D;
}

double DistanceFn::operator()(const Vec& y, const Vec& x) const {
  switch (kind) {
    case DistanceKind::Bregman:
      return bregman(h, y, x);
    case DistanceKind::SquaredNorm: {
      const double r = relcond::norm(y - x, norm);
      return 0.5 * r * r;
    }
    case DistanceKind::Radial: {
      const double r = radial(*set, y, x);
      return 0.5 * r * r;
    }
    case DistanceKind::Diametral: {
      const double r = diametral(*set, y, x);
      return 0.5 * r * r;
    }
    case DistanceKind::Gradiental: {
      const double r = gradiental(*set, *objective, y, x);
      return 0.5 * r * r;
    }
  }
  return 0.0;
}

bool DistanceFn::squared_norm_kind(NormKind* out) const {
  if (kind == DistanceKind::SquaredNorm) {
    if (out) *out = norm;
    return true;
  }
  if (kind == DistanceKind::Bregman && h.kind == ReferenceKind::SquaredEuclidean) {
    if (out) *out = NormKind::L2;
    return true;
  }
  return false;
}

std::string DistanceFn::describe() const {
  switch (kind) {
    case DistanceKind::Bregman: return "bregman(" + h.describe() + ")";
    case DistanceKind::SquaredNorm: return std::string("squared-norm(") + to_string(norm) + ")";
    case DistanceKind::Radial: return "radial";
    case DistanceKind::Diametral: return "diametral";
    case DistanceKind::Gradiental: return "gradiental";
  }
  return "unknown";
}

}  // namespace relcond
