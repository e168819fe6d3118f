#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "relcond/builtins.hpp"

using namespace relcond;

namespace {

Mat example_matrix(double eps) {
  Mat A(2, 3);
  A << 1.0, -1.0, 0.0, -eps, -eps, 1.0;
  return A;
}

Problem quadratic_problem(const Mat& A, const Vec& b, const ConvexSet& X, NormKind in = NormKind::L2) {
  Problem p;
  p.name = "test";
  p.objective = Objective::quadratic(A, b);
  p.set = X;
  p.distance = DistanceFn::squared_norm(in);
  p.norm_in = in;
  p.norm_out = NormKind::L2;
  return p;
}

AnalyzeOptions quick() {
  AnalyzeOptions o;
  o.sampling.samples = 400;
  return o;
}

}  // namespace

TEST_SUITE("conditioning") {
  TEST_CASE("signed smallest singular value over the orthant") {
    const Constant mu = exact_mu_conic(example_matrix(0.1), ConvexSet::orthant(3), NormKind::L2, NormKind::L2);
    CHECK(mu.value == doctest::Approx(0.02).epsilon(1e-6));
    CHECK(mu.method == "exact");
    CHECK(exact_L_quadratic(example_matrix(0.1), ConvexSet::orthant(3), NormKind::L2) == doctest::Approx(2.0));
  }

  TEST_CASE("restriction to a subspace removes the extreme curvature") {
    Vec d(4);
    d << 1.0, 1.0, 100.0, 0.01;
    Mat B = Mat::Zero(4, 2);
    B(0, 0) = B(1, 1) = 1.0;
    const ConditioningReport r = analyze(quadratic_problem(d.asDiagonal(), Vec::Zero(4), ConvexSet::subspace(B)), quick());
    CHECK(r.L.value == doctest::Approx(1.0));
    CHECK(r.mu.value == doctest::Approx(1.0));
    CHECK(r.condition_number == doctest::Approx(1.0));
  }

  TEST_CASE("rank-deficient least squares on the whole space") {
    const Builtin b = make_builtin("ex1a");
    const ConditioningReport r = analyze(b.problem, quick());
    CHECK(r.L.value == doctest::Approx(18.71779788708135).epsilon(1e-9));
    CHECK(r.mu.value == doctest::Approx(1.282202112918652).epsilon(1e-9));
    const SvdExtremes s = svd_extremes(b.problem.objective.A());
    CHECK(r.L.value == doctest::Approx(s.sigma_max * s.sigma_max));
    CHECK(r.mu.value == doctest::Approx(s.sigma_min_plus * s.sigma_min_plus));
  }

  TEST_CASE("identity over the simplex with l1 distance") {
    const ConditioningReport r = analyze(make_builtin("ex4-simplex").problem, quick());
    CHECK(r.L.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.mu.value == doctest::Approx(0.375).epsilon(1e-4));
  }

  TEST_CASE("every constant scales with the objective") {
    for (const std::string name : {"ex1c", "ex4-simplex"}) {
      Problem p = make_builtin(name).problem;
      Problem q = p;
      q.objective = p.objective.scaled(2.5);
      const ConditioningReport a = analyze(p, quick());
      const ConditioningReport b = analyze(q, quick());
      CHECK(b.L.value == doctest::Approx(2.5 * a.L.value).epsilon(1e-9));
      CHECK(b.mu.value == doctest::Approx(2.5 * a.mu.value).epsilon(1e-9));
      CHECK(b.mu_star.value == doctest::Approx(2.5 * a.mu_star.value).epsilon(1e-9));
      CHECK(b.mu_sharp.value == doctest::Approx(2.5 * a.mu_sharp.value).epsilon(1e-9));
      CHECK(b.condition_number == doctest::Approx(a.condition_number).epsilon(1e-9));
    }
  }

  TEST_CASE("sampled estimates sit on the correct side of exact values") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 8; ++t) {
      const int n = 3 + t % 2;
      Mat A(2, n);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = u(rng);
      const Vec b = (Vec(2) << u(rng), u(rng)).finished();
      const Objective f = Objective::quadratic(A, b);
      const ConvexSet X = ConvexSet::simplex(n);
      const DistanceFn D = DistanceFn::squared_norm(NormKind::L2);
      SampleOptions so;
      so.samples = 300;
      so.seed = t;
      CHECK(estimate_L(f, X, D, so).value <= exact_L_quadratic(A, X, NormKind::L2) + 1e-6);
      const Solution sol = solve_reference(f, X);
      const double mu = exact_mu_poly(A, X, NormKind::L2, NormKind::L2).value;
      CHECK(estimate_mu_family(f, X, D, MuKind::Mu, &sol, so).value >= mu - 1e-6);
      const double star = estimate_mu_family(f, X, D, MuKind::MuStar, &sol, so).value;
      const double sharp = estimate_mu_family(f, X, D, MuKind::MuSharp, &sol, so).value;
      CHECK(mu <= star + 1e-6);
      CHECK(star >= bound_mu_composite(A, f.g(), X, NormKind::L2, NormKind::L2, &sol).value - 1e-6);
      CHECK(sharp >= mu - 1e-6);
    }
  }

  TEST_CASE("a certified strong convexity constant satisfies quasi strong convexity") {
    const Builtin b = make_builtin("ex4-simplex");
    const Problem p = quadratic_problem(b.problem.objective.A(), (Vec(3) << 0.9, 0.3, -0.2).finished(), b.problem.set);
    const double mu = exact_mu_poly(p.objective.A(), p.set, NormKind::L2, NormKind::L2).value;
    const Solution sol = solve_reference(p.objective, p.set);
    std::mt19937_64 rng(42);
    for (int t = 0; t < 2000; ++t) {
      const Vec x = p.set.sample(rng);
      const Vec bar = project_to_optimum(sol, x, p.distance).point;
      CHECK(bregman_f(p.objective, bar, x) >= mu * p.distance(bar, x) - 1e-12);
    }
  }

  TEST_CASE("relative condition number is bounded by the restricted norm product") {
    const Mat A = example_matrix(0.1);
    const ConvexSet X = ConvexSet::orthant(3);
    const ConditioningReport r = analyze(quadratic_problem(A, Vec::Zero(2), X), quick());
    const Cone C = cone_of_set(X);
    const double op = op_norm(A, span_cone(X), NormKind::L2, NormKind::L2).value;
    const double inv = inv_norm(A, C, NormKind::L2, NormKind::L2).value;
    CHECK(r.condition_number <= std::pow(op * inv, 2) * (1 + 1e-9));
  }

  TEST_CASE("functional growth of the exponential degrades on long intervals") {
    const Objective f = Objective::exponential(1.0);
    const ReferenceFn h = ReferenceFn::custom([](const Vec& x) { return std::exp(x(0)); },
                                              [](const Vec& x) { return Vec::Constant(1, std::exp(x(0))); });
    const DistanceFn D = DistanceFn::bregman_of(h);
    double previous = std::numeric_limits<double>::infinity();
    for (double T : {2.0, 8.0, 32.0}) {
      const ConvexSet X = ConvexSet::box(Vec::Zero(1), Vec::Constant(1, T));
      const Solution sol = solve_reference(f, X);
      const Vec end = Vec::Constant(1, T);
      const double at_end = (f.value(end) - sol.f_star) / D(sol.x_hat, end);
      SampleOptions so;
      so.samples = 200;
      const double sampled = estimate_mu_family(f, X, D, MuKind::MuSharp, &sol, so).value;
      CHECK(sampled <= at_end * (1 + 1e-9));
      CHECK(at_end < previous);
      previous = at_end;
    }
    CHECK(previous < 0.05);
  }

  TEST_CASE("quasi strong convexity fails while growth holds") {
    const Builtin b = make_builtin("ex5-counter");
    const ConditioningReport r = analyze(b.problem, quick());
    CHECK(r.mu_star.value <= 1e-3);
    CHECK(r.mu_star.method == "sampled");
    const Solution sol = solve_reference(b.problem.objective, b.problem.set);
    const GrowthResult g = mu_sharp_growth(b.problem.objective, b.problem.set, sol, std::nullopt, NormKind::L1, NormKind::L2);
    CHECK(g.case_id == 2);
    CHECK(g.bound == doctest::Approx(0.5).epsilon(1e-6));
    const GrowthResult gd = mu_sharp_growth(b.problem.objective, b.problem.set, sol, 1.0, NormKind::L1, NormKind::L2);
    CHECK(gd.case_id == 2);
    CHECK(gd.bound > 0.0);
  }

  TEST_CASE("growth without a linear term has a constant gradient image") {
    Vec c(3);
    c << 0.5, 0.25, 0.25;
    const Objective f = Objective::quadratic(Mat::Identity(3, 3), c);
    const ConvexSet X = ConvexSet::simplex(3);
    const Solution sol = solve_reference(f, X);
    const GrowthResult g = mu_sharp_growth(f, X, sol, std::nullopt, NormKind::L2, NormKind::L2);
    CHECK(g.case_id == 1);
    CHECK(g.bound > 0.0);
  }

  TEST_CASE("report values carry method tags and survive a round trip") {
    const std::set<std::string> tags = {"exact", "theorem-lower-bound", "theorem-upper-bound", "sampled",
                                        "unavailable"};
    for (const std::string name : {"ex1c", "ex4-simplex", "ex5-counter", "fw-interior"}) {
      const ConditioningReport r = analyze(make_builtin(name).problem, quick());
      for (const Constant* c : {&r.L, &r.mu, &r.mu_star, &r.mu_sharp}) CHECK(tags.count(c->method) == 1);
      const ConditioningReport back = report_from_json(to_json(r));
      CHECK(back.L.value == r.L.value);
      CHECK(back.mu_sharp.method == r.mu_sharp.method);
      CHECK(to_json(back) == to_json(r));
    }
  }

  TEST_CASE("frank-wolfe constants for an interior minimizer") {
    const Builtin b = make_builtin("fw-interior");
    const Solution sol = solve_reference(b.problem.objective, b.problem.set);
    const FwConstants fc = fw_constants(b.problem.objective, b.problem.set, sol);
    CHECK(fc.bound_L == doctest::Approx(2.0));
    CHECK(fc.bound_mu_interior == doctest::Approx(0.09375));
    CHECK(distance_to_relative_boundary(b.problem.set, b.problem.objective.g().b) == doctest::Approx(std::sqrt(0.09375)));
    CHECK(fc.L_radial <= fc.bound_L + 1e-9);
  }

  TEST_CASE("conic routine rejects a set that is not a cone") {
    Error caught(ErrorKind::InvalidArgument, "");
    try {
      exact_mu_conic(example_matrix(0.1), ConvexSet::simplex(3), NormKind::L2, NormKind::L2);
    } catch (const Error& e) {
      caught = e;
    }
    CHECK(caught.kind() == ErrorKind::PreconditionViolated);
  }
}
