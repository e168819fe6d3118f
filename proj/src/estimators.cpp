#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "relcond/conditioning.hpp"

namespace relcond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTiny = 1e-12;
// Denominators below this fraction of |f| leave the numerator dominated by cancellation.
constexpr double kCancel = 1e-8;

// Evaluates a ratio and maps undefined points (domain errors, vanishing denominators) to NaN.
template <class F>
double guarded(F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainError || e.kind() == ErrorKind::Undefined ||
        e.kind() == ErrorKind::NotInSet) {
      return kNaN;
    }
    throw;
  }
}

std::vector<Vec> candidate_points(const ConvexSet& X, std::mt19937_64& rng, const SampleOptions& opts) {
  std::vector<Vec> pts;
  if (X.is_polyhedral() && X.is_bounded() && X.vertices().size() <= 64) pts = X.vertices();
  for (int i = 0; i < opts.samples; ++i) pts.push_back(X.sample(rng, opts.radius));
  return pts;
}

// Random-direction pattern search over a point of X. sign = +1 maximizes, -1 minimizes.
template <class F>
void refine(const ConvexSet& X, Vec& x, double& fx, F&& fn, double sign, int steps, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double step = 0.1 * (1.0 + x.cwiseAbs().maxCoeff());
  for (int it = 0; it < steps && step > 1e-9; ++it) {
    Vec t(x.size());
    for (int i = 0; i < t.size(); ++i) t(i) = gauss(rng);
    const Vec y = X.project(x + step * t);
    const double fy = fn(y);
    if (!std::isnan(fy) && sign * fy > sign * fx) {
      x = y;
      fx = fy;
    } else {
      step *= 0.93;
    }
  }
}

// Same search over a pair (y, x) of points of X.
template <class F>
void refine_pair(const ConvexSet& X, Vec& y, Vec& x, double& fv, F&& fn, double sign, int steps,
                 std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double step = 0.1 * (1.0 + std::max(x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff()));
  for (int it = 0; it < steps && step > 1e-9; ++it) {
    Vec ty(y.size()), tx(x.size());
    for (int i = 0; i < ty.size(); ++i) ty(i) = gauss(rng);
    for (int i = 0; i < tx.size(); ++i) tx(i) = gauss(rng);
    const bool move_y = (it % 3) != 1;
    const bool move_x = (it % 3) != 0;
    const Vec y2 = move_y ? X.project(y + step * ty) : y;
    const Vec x2 = move_x ? X.project(x + step * tx) : x;
    const double f2 = fn(y2, x2);
    if (!std::isnan(f2) && sign * f2 > sign * fv) {
      y = y2;
      x = x2;
      fv = f2;
    } else {
      step *= 0.95;
    }
  }
}

struct Scored {
  double value;
  Vec y;
  Vec x;
};

// Scores sampled pairs, keeps the best few and refines them.
template <class F>
Estimate pair_search(const ConvexSet& X, const SampleOptions& opts, double sign, F&& fn) {
  std::mt19937_64 rng(opts.seed);
  const std::vector<Vec> pts = candidate_points(X, rng, opts);
  const int N = static_cast<int>(pts.size());
  std::vector<Scored> scored;
  auto consider = [&](const Vec& y, const Vec& x) {
    const double v = fn(y, x);
    if (!std::isnan(v)) scored.push_back({v, y, x});
  };
  const int nv = X.is_polyhedral() && X.is_bounded() ? std::min<int>(N, static_cast<int>(X.vertices().size())) : 0;
  for (int i = 0; i < nv; ++i) {
    for (int j = 0; j < nv; ++j) {
      if (i != j) consider(pts[i], pts[j]);
    }
  }
  std::uniform_int_distribution<int> pick(0, std::max(0, N - 1));
  for (int i = nv; i < N; ++i) {
    consider(pts[i], pts[pick(rng)]);
    consider(pts[pick(rng)], pts[i]);
  }
  Estimate e;
  e.value = sign > 0 ? 0.0 : kInf;
  if (scored.empty()) return e;
  std::sort(scored.begin(), scored.end(),
            [&](const Scored& a, const Scored& b) { return sign * a.value > sign * b.value; });
  const int starts = std::min<int>(5, static_cast<int>(scored.size()));
  e.value = scored.front().value;
  e.y = scored.front().y;
  e.x = scored.front().x;
  for (int s = 0; s < starts; ++s) {
    Scored c = scored[s];
    refine_pair(X, c.y, c.x, c.value, fn, sign, opts.refine_steps, rng);
    if (sign * c.value > sign * e.value) {
      e.value = c.value;
      e.y = c.y;
      e.x = c.x;
    }
  }
  return e;
}

// Minimizes a ratio of a single point of X.
template <class F>
Estimate point_search(const ConvexSet& X, const SampleOptions& opts, F&& fn) {
  std::mt19937_64 rng(opts.seed);
  const std::vector<Vec> pts = candidate_points(X, rng, opts);
  std::vector<std::pair<double, Vec>> scored;
  for (const Vec& x : pts) {
    const double v = fn(x);
    if (!std::isnan(v)) scored.emplace_back(v, x);
  }
  Estimate e;
  e.value = kInf;
  if (scored.empty()) return e;
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  e.value = scored.front().first;
  e.x = scored.front().second;
  const int starts = std::min<int>(5, static_cast<int>(scored.size()));
  for (int s = 0; s < starts; ++s) {
    Vec x = scored[s].second;
    double fx = scored[s].first;
    refine(X, x, fx, fn, -1.0, opts.refine_steps, rng);
    if (fx < e.value) {
      e.value = fx;
      e.x = x;
    }
  }
  return e;
}

double gauge_sq(const DistanceFn& D, const Vec& y, const Vec& x) { return D(y, x); }

bool too_small(double den, const Objective& f, const Vec& x) {
  return den < kTiny || den < kCancel * (1.0 + std::abs(f.value(x)));
}

}  // namespace

Estimate estimate_L(const Objective& f, const ConvexSet& X, const DistanceFn& D, const SampleOptions& opts) {
  const Objective fu = f.unit();
  Estimate e = pair_search(X, opts, 1.0, [&](const Vec& y, const Vec& x) {
    return guarded([&] {
      const double den = gauge_sq(D, y, x);
      if (too_small(den, fu, x)) return kNaN;
      return bregman_f(fu, y, x) / den;
    });
  });
  e.value *= f.weight();
  return e;
}

Estimate estimate_mu_family(const Objective& f, const ConvexSet& X, const DistanceFn& D, MuKind which,
                            const Solution* sol, const SampleOptions& opts) {
  const Objective fu = f.unit();
  NormKind dnorm = NormKind::L2;
  const bool squared = D.squared_norm_kind(&dnorm);
  Estimate e;
  if (which == MuKind::Mu) {
    if (f.is_composite() && !squared) {
      fail(ErrorKind::UnsupportedStructure, "the Z-set distance needs a squared-norm distance");
    }
    e = pair_search(X, opts, -1.0, [&](const Vec& y, const Vec& x) {
      return guarded([&] {
        double den = 0.0;
        if (f.is_composite()) {
          const double r = z_set_distance(fu, X, y, x, dnorm);
          den = 0.5 * r * r;
        } else {
          den = gauge_sq(D, y, x);
        }
        if (too_small(den, fu, x)) return kNaN;
        return bregman_f(fu, y, x) / den;
      });
    });
  } else {
    if (!sol) fail(ErrorKind::InvalidArgument, "the optimal set is required");
    const double f_star = fu.value(sol->x_hat);
    e = point_search(X, opts, [&](const Vec& x) {
      return guarded([&] {
        Vec bar = sol->x_hat;
        double den = 0.0;
        if (squared) {
          const double r = distance_to_optimum(*sol, x, dnorm);
          den = 0.5 * r * r;
        } else {
          if (!sol->singleton) bar = project_to_optimum(*sol, x, D).point;
          den = D(bar, x);
        }
        if (too_small(den, fu, x)) return kNaN;
        // For composite objectives D_f(., x) is constant on the optimal set, so x_hat serves.
        if (which == MuKind::MuStar) {
          if (squared && !f.is_composite() && !sol->singleton) bar = project_to_optimum(*sol, x, D).point;
          return bregman_f(fu, bar, x) / den;
        }
        return (fu.value(x) - f_star) / den;
      });
    });
  }
  e.value *= f.weight();
  return e;
}

double distance_to_relative_boundary(const ConvexSet& X, const Vec& x) {
  if (X.kind() == SetKind::Ball2) return std::max(0.0, X.radius() - (x - X.center()).norm());
  const Polyhedron& H = X.h_rep();
  const Mat B = X.direction_basis();
  double best = kInf;
  for (int i = 0; i < H.A_ub.rows(); ++i) {
    const Vec a = B * (B.transpose() * H.A_ub.row(i).transpose());
    const double an = a.norm();
    if (an <= 1e-12 * (1.0 + H.A_ub.row(i).norm())) continue;
    best = std::min(best, std::max(0.0, H.b_ub(i) - H.A_ub.row(i).dot(x)) / an);
  }
  return best;
}

FwConstants fw_constants(const Objective& f, const ConvexSet& X, const Solution& sol, const SampleOptions& opts) {
  if (!X.is_polyhedral() || !X.is_bounded()) fail(ErrorKind::PreconditionViolated, "a polytope is required");
  const double w = f.weight();
  const Objective fu = f.unit();
  const std::vector<Vec>& V = X.vertices();
  FwConstants out;
  std::mt19937_64 rng(opts.seed);
  const double alphas[] = {1.0, 0.5, 0.1, 0.01};

  // Curvature along Frank-Wolfe and pairwise directions.
  const int draws = std::max(1, opts.samples / 8);
  for (int s = 0; s < draws; ++s) {
    const Vec x = X.sample(rng, opts.radius);
    for (std::size_t u = 0; u < V.size(); ++u) {
      for (double a : alphas) {
        const Vec y = x + a * (V[u] - x);
        const double r = guarded([&] { return radial(X, y, x); });
        if (!std::isnan(r) && r > 1e-9) out.L_radial = std::max(out.L_radial, bregman_f(fu, y, x) / (0.5 * r * r));
      }
      for (std::size_t t = 0; t < V.size(); ++t) {
        if (t == u) continue;
        for (double a : alphas) {
          const Vec y = x + a * (V[u] - V[t]);
          if (!X.contains(y)) continue;
          const double r = diametral(X, y, x);
          if (r > 1e-9) out.L_diametral = std::max(out.L_diametral, bregman_f(fu, y, x) / (0.5 * r * r));
        }
      }
    }
  }
  out.L_radial *= w;
  out.L_diametral *= w;

  auto mu_or_nan = [&](const DistanceFn& D, MuKind kind) {
    try {
      return estimate_mu_family(f, X, D, kind, &sol, opts).value;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::UnsupportedStructure || e.kind() == ErrorKind::TooLarge) return kNaN;
      throw;
    }
  };
  const DistanceFn R = DistanceFn::radial_sq(X);
  out.mu_star_radial = mu_or_nan(R, MuKind::MuStar);
  out.mu_sharp_radial = mu_or_nan(R, MuKind::MuSharp);
  const DistanceFn G = DistanceFn::gradiental_sq(X, f);
  out.mu_star_grad = mu_or_nan(G, MuKind::MuStar);
  out.mu_sharp_grad = mu_or_nan(G, MuKind::MuSharp);

  if (!f.is_composite()) {
    out.bound_L = out.bound_mu_interior = out.bound_mu_facial = kNaN;
    out.diam_BA_sq = out.phi_BA_sq = kNaN;
    return out;
  }
  const Mat& A = fu.A();
  const SvdExtremes ext = svd_extremes(A);
  const double L_f = w * fu.g().L_g * ext.sigma_max * ext.sigma_max;
  const bool full_rank = numerical_rank(A) == A.cols();
  const double mu_f = full_rank ? w * fu.g().mu_g * ext.sigma_min_plus * ext.sigma_min_plus : 0.0;
  const double diam = column_diameter(V, NormKind::L2);
  out.bound_L = L_f * diam * diam;
  const double rb = distance_to_relative_boundary(X, sol.x_hat);
  out.bound_mu_interior = std::isfinite(rb) ? mu_f * rb * rb : 0.0;
  try {
    const double phi = facial_distance(V, NormKind::L2).value;
    out.bound_mu_facial = mu_f * phi * phi;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AllColumnsEqual && e.kind() != ErrorKind::TooLarge) throw;
    out.bound_mu_facial = kNaN;
  }
  if (fu.is_quadratic()) {
    std::vector<Vec> BV;
    for (const Vec& v : V) BV.push_back(A * v);
    const double d = column_diameter(BV, NormKind::L2);
    out.diam_BA_sq = w * d * d;
    try {
      const double phi = facial_distance(BV, NormKind::L2).value;
      out.phi_BA_sq = w * phi * phi;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AllColumnsEqual && e.kind() != ErrorKind::TooLarge) throw;
      out.phi_BA_sq = 0.0;
    }
  } else {
    out.diam_BA_sq = out.phi_BA_sq = kNaN;
  }
  return out;
}

}  // namespace relcond
