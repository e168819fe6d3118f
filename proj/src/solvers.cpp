#include <algorithm>
#include <cmath>
#include <limits>

#include "relcond/solvers.hpp"

namespace relcond {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

double fw_gap(const ConvexSet& X, const Vec& g, const Vec& x) {
  if (!X.is_polyhedral() || !X.is_bounded()) return kNaN;
  const Vec& u = X.vertices()[X.linear_oracle(g)];
  return g.dot(x - u);
}

double dist_column(const Solution* sol, const DistanceFn& D, const Vec& x) {
  if (!sol) return kNaN;
  try {
    return D(project_to_optimum(*sol, x, D).point, x);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnsupportedStructure || e.kind() == ErrorKind::DomainError) return kNaN;
    throw;
  }
}

int support_of(const Vec& weights) {
  int s = 0;
  for (int i = 0; i < weights.size(); ++i) s += weights(i) > 0.0;
  return s;
}

Vec combine(const std::vector<Vec>& V, const Vec& weights) {
  Vec x = Vec::Zero(V.front().size());
  for (int i = 0; i < weights.size(); ++i) {
    if (weights(i) > 0.0) x += weights(i) * V[i];
  }
  return x;
}

void clean_weights(Vec& w) {
  for (int i = 0; i < w.size(); ++i) {
    if (w(i) < 1e-12) w(i) = 0.0;
  }
  w /= w.sum();
}

void require_polytope(const ConvexSet& X) {
  if (!X.is_polyhedral() || !X.is_bounded()) {
    fail(ErrorKind::PreconditionViolated, "Frank-Wolfe methods need a polytope, got " + X.describe());
  }
}

}  // namespace

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Regular: return "regular";
    case StepKind::Away: return "away";
    case StepKind::Drop: return "drop";
    case StepKind::Prox: return "prox";
  }
  return "regular";
}

StepKind parse_step_kind(const std::string& name) {
  if (name == "regular") return StepKind::Regular;
  if (name == "away") return StepKind::Away;
  if (name == "drop") return StepKind::Drop;
  if (name == "prox") return StepKind::Prox;
  fail(ErrorKind::InvalidArgument, "unknown step kind '" + name + "'");
}

Vec bregman_prox(const ConvexSet& X, const ReferenceFn& h, const Vec& g, const Vec& x, double L) {
  if (!(L > 0.0)) fail(ErrorKind::InvalidArgument, "L must be positive");
  switch (h.kind) {
    case ReferenceKind::SquaredEuclidean:
      return X.project(x - g / L);
    case ReferenceKind::NegativeEntropy: {
      if (X.kind() != SetKind::StandardSimplex) {
        fail(ErrorKind::ProxUnavailable, "entropy proximal map is available on the simplex only");
      }
      const Vec s = -g / L;
      const double top = s.maxCoeff();
      Vec y(x.size());
      for (int i = 0; i < x.size(); ++i) y(i) = x(i) * std::exp(s(i) - top);
      return y / y.sum();
    }
    case ReferenceKind::Custom:
      break;
  }
  fail(ErrorKind::ProxUnavailable, "no proximal map for reference " + h.describe());
}

SolverTrace mirror_descent(const Objective& f, const ConvexSet& X, const ReferenceFn& h, double L, const Vec& x0,
                           const Solution* sol, const MirrorOptions& opts) {
  if (!X.contains(x0)) fail(ErrorKind::NotInSet, "x0 is not in " + X.describe());
  if (h.kind == ReferenceKind::Custom) fail(ErrorKind::ProxUnavailable, "no proximal map for a custom reference");
  const DistanceFn D = DistanceFn::bregman_of(h);
  SolverTrace tr;
  tr.metadata = {{"algorithm", "mirror"}, {"L", L}, {"reference", h.describe()}, {"iters", opts.iters},
                 {"backtracking", opts.backtracking}, {"x0", vec_json(x0)}};
  Vec x = x0;
  double Lk = L;
  for (int k = 0;; ++k) {
    const Vec g = f.gradient(x);
    const double fx = f.value(x);
    Vec next = x;
    if (k < opts.iters) {
      Lk = L;
      next = bregman_prox(X, h, g, x, Lk);
      if (opts.backtracking) {
        for (int t = 0; t < 60; ++t) {
          const double model = fx + g.dot(next - x) + Lk * bregman(h, next, x);
          if (f.value(next) <= model + 1e-12 * (1.0 + std::abs(fx))) break;
          Lk *= 2.0;
          next = bregman_prox(X, h, g, x, Lk);
        }
      }
    }
    tr.rows.push_back({k, fx, fw_gap(X, g, x), dist_column(sol, D, x), StepKind::Prox, 1.0 / Lk, 1});
    tr.iterates.push_back(x);
    if (k == opts.iters) break;
    x = next;
  }
  return tr;
}

SolverTrace frank_wolfe(const Objective& f, const ConvexSet& X, double L, const Vec& x0, int iters,
                        const Solution* sol) {
  require_polytope(X);
  if (!(L > 0.0)) fail(ErrorKind::InvalidArgument, "L must be positive");
  if (!X.contains(x0)) fail(ErrorKind::NotInSet, "x0 is not in " + X.describe());
  const std::vector<Vec>& V = X.vertices();
  const DistanceFn D = DistanceFn::radial_sq(X);
  Vec weights = min_norm_qp(x0, V).weights;
  clean_weights(weights);
  SolverTrace tr;
  tr.metadata = {{"algorithm", "fw"}, {"L", L}, {"iters", iters}, {"x0", vec_json(x0)}};
  Vec x = x0;
  for (int k = 0;; ++k) {
    const Vec g = f.gradient(x);
    const int u = X.linear_oracle(g);
    const double gap = g.dot(x - V[u]);
    const double alpha = std::clamp(gap / L, 0.0, 1.0);
    tr.rows.push_back({k, f.value(x), gap, dist_column(sol, D, x), StepKind::Regular, alpha, support_of(weights)});
    tr.iterates.push_back(x);
    if (k == iters) break;
    x = x + alpha * (V[u] - x);
    weights *= 1.0 - alpha;
    weights(u) += alpha;
    clean_weights(weights);
  }
  return tr;
}

SolverTrace fw_away(const Objective& f, const ConvexSet& X, double L, int x0, int iters, const Solution* sol) {
  require_polytope(X);
  if (!(L > 0.0)) fail(ErrorKind::InvalidArgument, "L must be positive");
  const std::vector<Vec>& V = X.vertices();
  const int N = static_cast<int>(V.size());
  if (x0 < 0 || x0 >= N) fail(ErrorKind::InvalidArgument, "starting vertex index out of range");
  const DistanceFn D = DistanceFn::squared_norm(NormKind::L2);
  SolverTrace tr;
  tr.metadata = {{"algorithm", "fwa"},
                 {"L", L},
                 {"iters", iters},
                 {"x0_vertex", x0},
                 {"drop_threshold", 1e-12},
                 {"support_control", "none; the support may exceed n + 1"}};
  Vec lambda = Vec::Zero(N);
  lambda(x0) = 1.0;
  Vec x = V[x0];
  for (int k = 0;; ++k) {
    const Vec g = f.gradient(x);
    const int u = X.linear_oracle(g);
    int a = -1;
    for (int i = 0; i < N; ++i) {
      if (lambda(i) > 0.0 && (a < 0 || g.dot(V[i]) > g.dot(V[a]))) a = i;
    }
    const double gap_fw = g.dot(x - V[u]);
    const double gap_away = g.dot(V[a] - x);
    const bool regular = !(gap_fw < gap_away) || lambda(a) >= 1.0;
    Vec d;
    double alpha_max = 1.0;
    if (regular) {
      d = V[u] - x;
    } else {
      d = x - V[a];
      alpha_max = lambda(a) / (1.0 - lambda(a));
    }
    const double alpha = std::clamp(-g.dot(d) / L, 0.0, alpha_max);
    StepKind kind = regular ? StepKind::Regular : StepKind::Away;
    if (!regular && alpha >= alpha_max) kind = StepKind::Drop;
    tr.rows.push_back({k, f.value(x), gap_fw, dist_column(sol, D, x), kind, alpha, support_of(lambda)});
    tr.iterates.push_back(x);
    if (k == iters) break;

    x = x + alpha * d;
    if (regular) {
      lambda *= 1.0 - alpha;
      lambda(u) += alpha;
    } else {
      lambda *= 1.0 + alpha;
      lambda(a) -= alpha;
      if (kind == StepKind::Drop) lambda(a) = 0.0;
    }
    clean_weights(lambda);
    const double scale = 1.0 + x.cwiseAbs().maxCoeff();
    if ((combine(V, lambda) - x).cwiseAbs().maxCoeff() > 1e-8 * scale) {
      std::vector<Vec> S;
      std::vector<int> idx;
      for (int i = 0; i < N; ++i) {
        if (lambda(i) > 0.0) {
          S.push_back(V[i]);
          idx.push_back(i);
        }
      }
      const MinNormResult r = min_norm_qp(x, S);
      if (r.dist > 1e-8 * scale) fail(ErrorKind::DegenerateWeights, "vertex weights no longer reconstruct x");
      lambda.setZero();
      for (std::size_t j = 0; j < idx.size(); ++j) lambda(idx[j]) = r.weights(j);
      clean_weights(lambda);
    }
  }
  return tr;
}

}  // namespace relcond
