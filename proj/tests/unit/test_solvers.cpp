#include <doctest.h>

#include <cmath>
#include <random>

#include "relcond/builtins.hpp"
#include "relcond/solvers.hpp"

using namespace relcond;

namespace {

std::vector<Vec> pentagon() {
  std::vector<Vec> V(5, Vec(2));
  V[0] << 0.0, 0.0;
  V[1] << 2.0, 0.0;
  V[2] << 3.0, 1.5;
  V[3] << 1.5, 3.0;
  V[4] << -0.5, 1.5;
  return V;
}

Vec random_simplex_point(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  Vec x(n);
  for (int i = 0; i < n; ++i) x(i) = e(rng) + 1e-3;
  return x / x.sum();
}

// argmin over the simplex of <g, y> + L KL(y, x) by equality-constrained Newton steps.
Vec entropy_prox_newton(const Vec& g, const Vec& x, double L) {
  const int n = static_cast<int>(x.size());
  Vec y = Vec::Constant(n, 1.0 / n);
  auto phi = [&](const Vec& z) {
    double s = g.dot(z);
    for (int i = 0; i < n; ++i) s += L * (z(i) * std::log(z(i) / x(i)) - z(i) + x(i));
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    Vec grad(n), hinv(n);
    for (int i = 0; i < n; ++i) {
      grad(i) = g(i) + L * std::log(y(i) / x(i));
      hinv(i) = y(i) / L;
    }
    // Newton direction on {sum dy = 0}: dy = -H^{-1}(grad - nu 1).
    const double nu = hinv.dot(grad) / hinv.sum();
    Vec dy(n);
    for (int i = 0; i < n; ++i) dy(i) = -hinv(i) * (grad(i) - nu);
    if (dy.norm() < 1e-15) break;
    double t = 1.0;
    while (((y + t * dy).array() <= 0.0).any()) t *= 0.5;
    while (phi(y + t * dy) > phi(y) && t > 1e-12) t *= 0.5;
    y += t * dy;
  }
  return y;
}

ConditioningReport certified(double L, double mu) {
  ConditioningReport r;
  r.L = {L, "exact"};
  r.mu = {mu, "theorem-lower-bound"};
  r.mu_star = {0.0, "unavailable"};
  r.mu_sharp = {0.0, "unavailable"};
  return r;
}

}  // namespace

TEST_SUITE("solvers") {
  TEST_CASE("entropy proximal map equals a numerically solved argmin") {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const ConvexSet X = ConvexSet::simplex(4);
    for (int t = 0; t < 50; ++t) {
      const Vec x = random_simplex_point(rng, 4);
      Vec g(4);
      for (int i = 0; i < 4; ++i) g(i) = gauss(rng);
      const double L = 0.5 + std::abs(gauss(rng));
      const Vec closed = bregman_prox(X, ReferenceFn::negative_entropy(), g, x, L);
      CHECK((closed - entropy_prox_newton(g, x, L)).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }

  TEST_CASE("entropy proximal map is unavailable off the simplex") {
    Error caught(ErrorKind::InvalidArgument, "");
    try {
      bregman_prox(ConvexSet::box(Vec::Zero(2), Vec::Ones(2)), ReferenceFn::negative_entropy(), Vec::Ones(2),
                   Vec::Constant(2, 0.5), 1.0);
    } catch (const Error& e) {
      caught = e;
    }
    CHECK(caught.kind() == ErrorKind::ProxUnavailable);
  }

  TEST_CASE("mirror descent steps satisfy the one-step descent inequality and the three-point identity") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 6; ++t) {
      Mat A(2, 3);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = u(rng);
      const Vec b = (Vec(2) << u(rng), u(rng)).finished();
      const Objective f = Objective::quadratic(A, b);
      const ConvexSet X = ConvexSet::simplex(3);
      const Solution sol = solve_reference(f, X);
      const double L = exact_L_quadratic(A, X, NormKind::L2);
      const double mu = bound_mu_composite(A, f.g(), X, NormKind::L2, NormKind::L2, &sol).value;
      MirrorOptions mo;
      mo.iters = 200;
      const ReferenceFn h = ReferenceFn::squared_euclidean();
      const SolverTrace tr = mirror_descent(f, X, h, L, X.vertices()[t % 3], &sol, mo);
      CHECK(tr.rows.size() == 201);
      CHECK(check_descent_step(tr, f, sol, h, L, mu).ok);
      CHECK(check_three_point(tr, sol, h).ok);
      const Verification v = verify_rates(tr, certified(L, mu), sol.f_star, Envelope::MirrorLinear);
      CHECK(v.passed);
      CHECK_FALSE(v.advisory);
    }
  }

  TEST_CASE("entropy mirror descent decreases the objective") {
    const Builtin b = make_builtin("ex4-simplex");
    const Solution sol = solve_reference(b.problem.objective, b.problem.set);
    MirrorOptions mo;
    mo.iters = 100;
    const ReferenceFn h = ReferenceFn::negative_entropy();
    const SolverTrace tr = mirror_descent(b.problem.objective, b.problem.set, h, 1.0, (Vec(3) << 0.7, 0.2, 0.1).finished(),
                                          &sol, mo);
    for (std::size_t k = 1; k < tr.rows.size(); ++k) CHECK(tr.rows[k].f_value <= tr.rows[k - 1].f_value + 1e-15);
    CHECK(tr.rows.back().f_value - sol.f_star < 1e-8);
    CHECK(check_three_point(tr, sol, h).ok);
  }

  TEST_CASE("backtracking keeps the objective nonincreasing up to the model tolerance") {
    const Builtin b = make_builtin("fw-interior");
    MirrorOptions mo;
    mo.iters = 50;
    mo.backtracking = true;
    const SolverTrace tr = mirror_descent(b.problem.objective, b.problem.set, ReferenceFn::squared_euclidean(), 0.1,
                                          b.problem.set.vertices()[0], nullptr, mo);
    for (std::size_t k = 1; k < tr.rows.size(); ++k)
      CHECK(tr.rows[k].f_value <= tr.rows[k - 1].f_value + 1e-12 * (1.0 + tr.rows[k - 1].f_value));
    CHECK(tr.rows.back().f_value < 1e-11);
    CHECK(tr.rows.front().alpha <= 1.0 / 0.1);
  }

  TEST_CASE("halving envelope on a mirror trace") {
    const Builtin b = make_builtin("fw-interior");
    const Problem& p = b.problem;
    const Solution sol = solve_reference(p.objective, p.set);
    const double L = exact_L_quadratic(p.objective.A(), p.set, NormKind::L2);
    const SolverTrace tr = mirror_descent(p.objective, p.set, ReferenceFn::squared_euclidean(), L, p.set.vertices()[0], &sol);
    ConditioningReport r = certified(L, 0.0);
    r.mu = {0.0, "unavailable"};
    r.mu_sharp = {1.0, "theorem-lower-bound"};
    const Verification v = verify_rates(tr, r, sol.f_star, Envelope::MirrorHalving);
    CHECK(v.halving_window == 2);
    CHECK(v.passed);
  }

  TEST_CASE("frank-wolfe decrease holds on every short step") {
    const Builtin b = make_builtin("fw-interior");
    const Solution sol = solve_reference(b.problem.objective, b.problem.set);
    for (const Vec& start : b.problem.set.vertices()) {
      const SolverTrace tr = frank_wolfe(b.problem.objective, b.problem.set, 2.0, start, 300, &sol);
      CHECK(check_fw_decrease(tr, 2.0).ok);
      for (std::size_t k = 1; k < tr.rows.size(); ++k)
        CHECK(tr.rows[k].f_value <= tr.rows[k - 1].f_value + 1e-15);
    }
  }

  TEST_CASE("away steps never drop more often than regular steps shrink") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-1.0, 4.0);
    const ConvexSet X = ConvexSet::polytope(pentagon());
    int drops = 0;
    for (int t = 0; t < 30; ++t) {
      const Vec target = (Vec(2) << u(rng), u(rng)).finished();
      const Objective f = Objective::quadratic(Mat::Identity(2, 2), target);
      const SolverTrace tr = fw_away(f, X, 12.25, t % 5, 300);
      const StepCheck c = check_drop_counts(tr);
      CHECK(c.ok);
      for (const TraceRow& r : tr.rows) {
        drops += r.step == StepKind::Drop;
        CHECK(r.support >= 1);
      }
    }
    CHECK(drops > 0);
  }

  TEST_CASE("frank-wolfe traces are affine invariant") {
    const auto V = pentagon();
    Mat M(2, 2);
    M << 1.5, -0.6, 0.4, 0.9;
    const Vec shift = (Vec(2) << 2.0, -1.0).finished();
    std::vector<Vec> W;
    for (const Vec& v : V) W.push_back(M * v + shift);
    const ConvexSet X = ConvexSet::polytope(V);
    const ConvexSet Y = ConvexSet::polytope(W);
    const Vec target = (Vec(2) << 1.0, -0.3).finished();
    Mat B(2, 2);
    B << 1.0, 0.2, 0.0, 0.8;
    const Objective f = Objective::quadratic(B, target);
    // g(T x) = f(x) with T x = M x + shift.
    const Mat Minv = M.inverse();
    const Objective g = Objective::quadratic(B * Minv, target + B * Minv * shift);
    const SolverTrace a = frank_wolfe(f, X, 9.0, V[3], 200);
    const SolverTrace c = frank_wolfe(g, Y, 9.0, W[3], 200);
    const SolverTrace aa = fw_away(f, X, 9.0, 3, 200);
    const SolverTrace cc = fw_away(g, Y, 9.0, 3, 200);
    const double f_star = solve_reference(f, X).f_star;
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
      CHECK(c.rows[k].f_value == doctest::Approx(a.rows[k].f_value).epsilon(1e-9));
      CHECK(cc.rows[k].f_value == doctest::Approx(aa.rows[k].f_value).epsilon(1e-9));
      // Once f - f* reaches rounding level the gap comparison is decided by noise.
      if (aa.rows[k].f_value - f_star > 1e-12 * (1.0 + std::abs(f_star))) CHECK(cc.rows[k].step == aa.rows[k].step);
    }
  }

  TEST_CASE("away-step trace of the pentagon builtin contains every step kind") {
    const Builtin b = make_builtin("fwa-polytope");
    const Solution sol = solve_reference(b.problem.objective, b.problem.set);
    const FwConstants fc = fw_constants(b.problem.objective, b.problem.set, sol);
    bool seen[3] = {false, false, false};
    for (int start = 0; start < 5; ++start) {
      const SolverTrace tr = fw_away(b.problem.objective, b.problem.set, fc.diam_BA_sq, start, 500, &sol);
      for (const TraceRow& r : tr.rows) {
        if (r.step == StepKind::Regular) seen[0] = true;
        if (r.step == StepKind::Away) seen[1] = true;
        if (r.step == StepKind::Drop) seen[2] = true;
      }
      const Verification v = verify_rates(tr, certified(fc.diam_BA_sq, fc.phi_BA_sq), sol.f_star,
                                          Envelope::AwayStep);
      CHECK(v.passed);
    }
    CHECK(seen[0]);
    CHECK(seen[1]);
    CHECK(seen[2]);
  }

  TEST_CASE("inflated constants are caught") {
    const Builtin b = make_builtin("fw-interior");
    const Solution sol = solve_reference(b.problem.objective, b.problem.set);
    const SolverTrace tr = frank_wolfe(b.problem.objective, b.problem.set, 2.0, b.problem.set.vertices()[0], 200, &sol);
    ConditioningReport r = certified(2.0, 0.09375);
    CHECK(verify_rates(tr, r, sol.f_star, Envelope::FrankWolfe).passed);
    r.mu.value = 1.9;
    const Verification v = verify_rates(tr, r, sol.f_star, Envelope::FrankWolfe);
    CHECK_FALSE(v.passed);
    CHECK(v.first_violation >= 1);
  }

  TEST_CASE("sampled constants only produce an advisory verdict") {
    const Builtin b = make_builtin("fw-interior");
    const Solution sol = solve_reference(b.problem.objective, b.problem.set);
    const SolverTrace tr = frank_wolfe(b.problem.objective, b.problem.set, 2.0, b.problem.set.vertices()[0], 100, &sol);
    ConditioningReport r = certified(2.0, 1.9);
    r.mu.method = "sampled";
    const Verification v = verify_rates(tr, r, sol.f_star, Envelope::FrankWolfe);
    CHECK(v.advisory);
    CHECK(v.passed);
  }

  TEST_CASE("step kinds round trip through their names") {
    for (StepKind k : {StepKind::Regular, StepKind::Away, StepKind::Drop, StepKind::Prox})
      CHECK(parse_step_kind(to_string(k)) == k);
    for (Envelope p : {Envelope::MirrorLinear, Envelope::MirrorHalving, Envelope::FrankWolfe,
                          Envelope::AwayStep})
      CHECK(parse_envelope(to_string(p)) == p);
  }

  TEST_CASE("frank-wolfe needs a polytope") {
    Error caught(ErrorKind::InvalidArgument, "");
    try {
      frank_wolfe(Objective::quadratic(Mat::Identity(2, 2), Vec::Zero(2)), ConvexSet::orthant(2), 1.0, Vec::Ones(2),
                  10);
    } catch (const Error& e) {
      caught = e;
    }
    CHECK(caught.kind() == ErrorKind::PreconditionViolated);
  }
}
