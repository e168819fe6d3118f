#include <doctest.h>

#include <cmath>
#include <random>

#include "relcond/distances.hpp"

using namespace relcond;

TEST_SUITE("objectives") {
  TEST_CASE("bregman divergence of convex objectives is nonnegative") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0.0, 1.0);
    Mat A(2, 3);
    A << 1, 2, 0, 0, 1, 1;
    const Vec b = (Vec(2) << 0.5, -1).finished();
    const Objective quad = Objective::quadratic(A, b);
    const Objective comp = Objective::composite(A, StrongFn::squared_distance(b), (Vec(3) << 1, 0, -1).finished());
    const Objective ex = Objective::exponential(1.3);
    for (int t = 0; t < 10000; ++t) {
      Vec x(3), y(3);
      for (int i = 0; i < 3; ++i) {
        x(i) = g(rng);
        y(i) = g(rng);
      }
      CHECK(bregman_f(quad, y, x) >= -1e-12);
      CHECK(bregman_f(comp, y, x) >= -1e-12);
      CHECK(bregman_f(ex, y.head(1), x.head(1)) >= -1e-12);
    }
  }

  TEST_CASE("gradients match finite differences") {
    Mat A(2, 3);
    A << 1, 2, 0, 0, 1, 1;
    const Objective f = Objective::quadratic(A, (Vec(2) << 0.5, -1).finished(), 2.5);
    const Vec x = (Vec(3) << 0.3, -0.2, 0.7).finished();
    const Vec g = f.gradient(x);
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-6;
      const double fd = (f.value(x + h * Vec::Unit(3, i)) - f.value(x - h * Vec::Unit(3, i))) / (2 * h);
      CHECK(g(i) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("scaling multiplies values and keeps the unit objective") {
    const Objective f = Objective::quadratic(Mat::Identity(2, 2), Vec::Ones(2));
    const Objective g = f.scaled(3.7);
    const Vec x = (Vec(2) << 0.2, 0.9).finished();
    CHECK(g.value(x) == doctest::Approx(3.7 * f.value(x)));
    CHECK(g.weight() == doctest::Approx(3.7));
    CHECK(g.unit().value(x) == doctest::Approx(f.value(x)));
  }

  TEST_CASE("zero bregman gap coincides with zero Z-set distance") {
    // A has a kernel direction inside span(X - X), so Z-sets are nontrivial.
    Mat A(1, 3);
    A << 1, -1, 0;
    const Objective f = Objective::quadratic(A, Vec::Zero(1));
    const ConvexSet X = ConvexSet::simplex(3);
    std::mt19937_64 rng(32);
    for (int t = 0; t < 200; ++t) {
      const Vec x = X.sample(rng);
      Vec y = X.sample(rng);
      if (t % 2 == 0) {
        // Move x along the kernel direction (1, 1, -2) while staying in X.
        y = x;
        const double s = std::min(x(2) / 2.0, 0.5) * 0.5;
        y(0) += s;
        y(1) += s;
        y(2) -= 2 * s;
      }
      const double bf = bregman_f(f, y, x);
      const double z = z_set_distance(f, X, y, x, NormKind::L2);
      CHECK((bf <= 1e-12) == (z <= 1e-7));
    }
  }

  TEST_CASE("reference solution is feasible with a small Frank-Wolfe gap") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      const int n = 3 + t % 3;
      Mat A(2, n);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = u(rng);
      const Vec b = (Vec(2) << u(rng), u(rng)).finished();
      const Objective f = Objective::quadratic(A, b);
      const ConvexSet X = ConvexSet::simplex(n);
      const Solution sol = solve_reference(f, X);
      CHECK(X.contains(sol.x_hat));
      CHECK(sol.f_star == doctest::Approx(f.value(sol.x_hat)));
      const Vec g = f.gradient(sol.x_hat);
      const double gap = g.dot(sol.x_hat - X.vertices()[X.linear_oracle(g)]);
      CHECK(gap <= 1e-9);
      for (int k = 0; k < 50; ++k) CHECK(f.value(X.sample(rng)) >= sol.f_star - 1e-12);
    }
  }

  TEST_CASE("optimal set of a rank-deficient objective is a face slice") {
    Mat A(1, 3);
    A << 1, -1, 0;
    Vec c = Vec::Zero(3);
    c(2) = 1.0;
    const Objective f = Objective::composite(A, StrongFn::squared_distance(Vec::Zero(1)), c);
    const Solution sol = solve_reference(f, ConvexSet::simplex(3));
    CHECK(sol.f_star == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.x_hat(0) == doctest::Approx(0.5));
    CHECK(sol.x_hat(1) == doctest::Approx(0.5));
    CHECK(distance_to_optimum(sol, Vec::Unit(3, 0), NormKind::L2) == doctest::Approx(std::sqrt(0.5)));
  }

  TEST_CASE("projection onto a non-singleton optimal set") {
    // f = 1/2 (x1 + x2 - 1)^2 on the box [0, 1]^2 has the segment x1 + x2 = 1 as optimal set.
    Mat A(1, 2);
    A << 1, 1;
    const Objective f = Objective::quadratic(A, Vec::Ones(1));
    const Solution sol = solve_reference(f, ConvexSet::box(Vec::Zero(2), Vec::Ones(2)));
    CHECK_FALSE(sol.singleton);
    const Vec x = (Vec(2) << 1.0, 1.0).finished();
    const ProjectedPoint p = project_to_optimum(sol, x, DistanceFn::squared_norm(NormKind::L2));
    CHECK(p.point(0) == doctest::Approx(0.5));
    CHECK(p.point(1) == doctest::Approx(0.5));
    CHECK(distance_to_optimum(sol, x, NormKind::L2) == doctest::Approx(std::sqrt(0.5)));
  }

  TEST_CASE("exponential objective on a box") {
    const Objective f = Objective::exponential(2.0);
    const Solution sol = solve_reference(f, ConvexSet::box(Vec::Zero(1), Vec::Constant(1, 3.0)));
    CHECK(sol.x_hat(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.f_star == doctest::Approx(1.0));
  }
}
