#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcond/distances.hpp"
#include "relcond/geometry.hpp"

namespace relcond {

using json = nlohmann::json;

/// A reported constant. method is one of exact, theorem-lower-bound,
/// theorem-upper-bound or sampled.
struct Constant {
  double value = 0.0;
  std::string method;
  json certificate = json::object();
};

struct ConditioningReport {
  Constant L;
  Constant mu;
  Constant mu_star;
  Constant mu_sharp;
  /// L / mu, or +inf when mu is zero.
  double condition_number = 0.0;
  json certificates = json::object();
  std::vector<std::string> conventions;
};

/// A problem instance: objective, reference set, distance and norms.
struct Problem {
  std::string name;
  Objective objective = Objective::quadratic(Mat::Identity(1, 1), Vec::Zero(1));
  ConvexSet set = ConvexSet::simplex(1);
  DistanceFn distance;
  NormKind norm_in = NormKind::L2;
  NormKind norm_out = NormKind::L2;
};

/// Orthonormal basis of span(X - X) as a cone.
Cone span_cone(const ConvexSet& X);

/// |A restricted to span(X - X)|^2 with L2 output.
double exact_L_quadratic(const Mat& A, const ConvexSet& X, NormKind norm_in);

/// L_g |A restricted to span(X - X)|^2.
double bound_L_composite(const Mat& A, const StrongFn& g, const ConvexSet& X, NormKind norm_in);

/// 1 / |(A|X)^{-1}|^2 for a cone X with subspace image.
Constant exact_mu_conic(const Mat& A, const ConvexSet& X, NormKind norm_in, NormKind norm_out,
                        const InvNormOptions& opts = {});

/// Squared Hoffman minimum over the tangent cones of a polyhedral X.
Constant exact_mu_poly(const Mat& A, const ConvexSet& X, NormKind norm_in, NormKind norm_out,
                       const InvNormOptions& opts = {});

/// mu_g times the squared (restricted, when sol is given) Hoffman minimum.
Constant bound_mu_composite(const Mat& A, const StrongFn& g, const ConvexSet& X, NormKind norm_in,
                            NormKind norm_out, const Solution* restricted_to = nullptr);

struct GrowthResult {
  int case_id = 1;
  double bound = 0.0;
  double delta = 0.0;
  Vec v;
  ConvexSet X_eff = ConvexSet::simplex(1);
  /// True when X_eff equals X, so the bound holds on all of X.
  bool covers_X = true;
  std::string method;
};

/**
 * Growth lower bound for f = g(Ax) + <c, x> over a polyhedron.
 *
 * Case 1 when <v, x - y> vanishes on X for v = 2 grad f(y), y optimal.
 * Otherwise Case 2 on X_delta = {x in X : <v, x - y> <= delta}; delta
 * defaults to the maximum of <v, x - y> over a bounded X.
 *
 * @throws Error(VNotConstant) when the gradient image differs across the optimal set.
 */
GrowthResult mu_sharp_growth(const Objective& f, const ConvexSet& X, const Solution& sol,
                             std::optional<double> delta, NormKind norm_in, NormKind norm_out);

struct SampleOptions {
  int samples = 2000;
  unsigned seed = 0;
  double radius = 10.0;
  int refine_steps = 200;
};

struct Estimate {
  double value = 0.0;
  Vec x;
  Vec y;
};

/// Largest sampled D_f(y, x) / D(y, x); a lower bound on L.
Estimate estimate_L(const Objective& f, const ConvexSet& X, const DistanceFn& D, const SampleOptions& opts = {});

enum class MuKind { Mu, MuStar, MuSharp };

/// Smallest sampled ratio defining mu, mu* or mu#; an upper bound on the constant.
Estimate estimate_mu_family(const Objective& f, const ConvexSet& X, const DistanceFn& D, MuKind which,
                            const Solution* sol, const SampleOptions& opts = {});

struct FwConstants {
  double L_radial = 0.0;
  double L_diametral = 0.0;
  double mu_star_radial = 0.0;
  double mu_sharp_radial = 0.0;
  double mu_star_grad = 0.0;
  double mu_sharp_grad = 0.0;
  /// L_f diam(X)^2.
  double bound_L = 0.0;
  /// mu_f dist(x*, rbd X)^2 (zero when x* is on the relative boundary).
  double bound_mu_interior = 0.0;
  /// mu_f Phi(vertices)^2.
  double bound_mu_facial = 0.0;
  /// Quadratic objectives only: diam(BA)^2 and Phi(BA)^2 with B the objective matrix.
  double diam_BA_sq = 0.0;
  double phi_BA_sq = 0.0;
};

/// Curvature and growth constants for the Frank-Wolfe distances over a polytope.
FwConstants fw_constants(const Objective& f, const ConvexSet& X, const Solution& sol, const SampleOptions& opts = {});

/// Euclidean distance from x to the relative boundary of a polyhedral X.
double distance_to_relative_boundary(const ConvexSet& X, const Vec& x);

struct AnalyzeOptions {
  SampleOptions sampling;
  InvNormOptions inv;
  std::optional<double> delta;
};

ConditioningReport analyze(const Problem& problem, const AnalyzeOptions& opts = {});

json to_json(const Constant& c);
json to_json(const ConditioningReport& r);
ConditioningReport report_from_json(const json& j);

}  // namespace relcond
