#include <doctest.h>

#include <random>

#include "relcond/distances.hpp"

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
  for (int i = 0; i < n; ++i) x(i) = e(rng) + 1e-9;
  return x / x.sum();
}

}  // namespace

TEST_SUITE("distances") {
  TEST_CASE("radial and diametral distances are ordered and bounded") {
    std::mt19937_64 rng(21);
    for (const ConvexSet& X : {ConvexSet::simplex(3), ConvexSet::polytope(pentagon()),
                               ConvexSet::box(Vec::Zero(2), Vec::Ones(2))}) {
      for (int t = 0; t < 200; ++t) {
        const Vec x = X.sample(rng);
        const Vec y = X.sample(rng);
        const double r = radial(X, y, x);
        const double d = diametral(X, y, x);
        CHECK(d >= -1e-12);
        CHECK(d <= r + 1e-9);
        CHECK(r <= 1.0 + 1e-9);
      }
      const Vec x = X.sample(rng);
      CHECK(radial(X, x, x) == 0.0);
    }
  }

  TEST_CASE("radial distance to a vertex from the barycenter") {
    const ConvexSet X = ConvexSet::simplex(3);
    const Vec c = Vec::Constant(3, 1.0 / 3.0);
    CHECK(radial(X, Vec::Unit(3, 0), c) == doctest::Approx(1.0));
    CHECK(radial(X, (c + Vec::Unit(3, 0)) / 2.0, c) == doctest::Approx(0.5));
    CHECK(diametral(X, Vec::Unit(3, 0), Vec::Unit(3, 1)) == doctest::Approx(1.0));
  }

  TEST_CASE("radial and diametral distances are affine invariant") {
    std::mt19937_64 rng(22);
    const auto V = pentagon();
    Mat M(2, 2);
    M << 2.0, 0.7, -0.4, 1.3;
    const Vec shift = (Vec(2) << -1.0, 3.0).finished();
    std::vector<Vec> W;
    for (const Vec& v : V) W.push_back(M * v + shift);
    const ConvexSet X = ConvexSet::polytope(V);
    const ConvexSet Y = ConvexSet::polytope(W);
    for (int t = 0; t < 100; ++t) {
      const Vec x = X.sample(rng);
      const Vec y = X.sample(rng);
      const Vec tx = M * x + shift;
      const Vec ty = M * y + shift;
      CHECK(radial(Y, ty, tx) == doctest::Approx(radial(X, y, x)).epsilon(1e-8));
      CHECK(diametral(Y, ty, tx) == doctest::Approx(diametral(X, y, x)).epsilon(1e-8));
    }
  }

  TEST_CASE("three-point identity on random triples") {
    std::mt19937_64 rng(23);
    for (const ReferenceFn& h : {ReferenceFn::squared_euclidean(), ReferenceFn::negative_entropy()}) {
      for (int t = 0; t < 500; ++t) {
        const Vec x = random_simplex_point(rng, 4);
        const Vec xp = random_simplex_point(rng, 4);
        const Vec bar = random_simplex_point(rng, 4);
        const double lhs = bregman(h, xp, x);
        const double rhs = bregman(h, bar, x) - bregman(h, bar, xp) + (h.gradient(xp) - h.gradient(x)).dot(xp - bar);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
      }
    }
  }

  TEST_CASE("bregman distances are nonnegative") {
    std::mt19937_64 rng(24);
    std::normal_distribution<double> g(0.0, 3.0);
    const ReferenceFn euclid = ReferenceFn::squared_euclidean();
    const ReferenceFn entropy = ReferenceFn::negative_entropy();
    for (int t = 0; t < 10000; ++t) {
      Vec a(3), b(3);
      for (int i = 0; i < 3; ++i) {
        a(i) = g(rng);
        b(i) = g(rng);
      }
      CHECK(bregman(euclid, a, b) >= 0.0);
      CHECK(bregman(entropy, random_simplex_point(rng, 3), random_simplex_point(rng, 3)) >= -1e-15);
    }
  }

  TEST_CASE("squared euclidean bregman is half the squared distance") {
    const Vec a = (Vec(2) << 1, 2).finished();
    const Vec b = (Vec(2) << -1, 0).finished();
    CHECK(bregman(ReferenceFn::squared_euclidean(), a, b) == doctest::Approx(4.0));
    const DistanceFn D = DistanceFn::bregman_of(ReferenceFn::squared_euclidean());
    NormKind kind = NormKind::L1;
    CHECK(D.squared_norm_kind(&kind));
    CHECK(kind == NormKind::L2);
  }

  TEST_CASE("entropy bregman outside the positive orthant is a domain error") {
    Error caught(ErrorKind::InvalidArgument, "");
    try {
      bregman(ReferenceFn::negative_entropy(), (Vec(2) << -0.5, 1.5).finished(), (Vec(2) << 0.5, 0.5).finished());
    } catch (const Error& e) {
      caught = e;
    }
    CHECK(caught.kind() == ErrorKind::DomainError);
  }

  TEST_CASE("gradiental distance vanishes at the point and is bounded by one along edges") {
    Vec c(3);
    c << 0.5, 0.25, 0.25;
    const Objective f = Objective::quadratic(Mat::Identity(3, 3), c);
    const ConvexSet X = ConvexSet::simplex(3);
    const Vec x = Vec::Unit(3, 0);
    CHECK(gradiental(X, f, x, x) == doctest::Approx(0.0));
    const double g = gradiental(X, f, c, x);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0 + 1e-9);
  }

  TEST_CASE("squared norm distances") {
    const Vec a = (Vec(2) << 3, -4).finished();
    CHECK(DistanceFn::squared_norm(NormKind::L2)(a, Vec::Zero(2)) == doctest::Approx(12.5));
    CHECK(DistanceFn::squared_norm(NormKind::L1)(a, Vec::Zero(2)) == doctest::Approx(24.5));
    CHECK(DistanceFn::squared_norm(NormKind::Linf)(a, Vec::Zero(2)) == doctest::Approx(8.0));
  }
}
