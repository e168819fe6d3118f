#include <doctest.h>

#include <cmath>
#include <random>

#include "relcond/geometry.hpp"

using namespace relcond;

namespace {

Mat random_matrix(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = u(rng);
  return A;
}

Mat example_matrix(double eps) {
  Mat A(2, 3);
  A << 1.0, -1.0, 0.0, -eps, -eps, 1.0;
  return A;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("operator norm grows with the cone") {
    std::mt19937_64 rng(11);
    const ConvexSet orthant = ConvexSet::orthant(3);
    const Cone inner = cone_of_set(orthant);
    for (int t = 0; t < 15; ++t) {
      const Mat A = random_matrix(rng, 2, 3);
      // Tangent cones at points with positive coordinates contain the orthant.
      Vec x = Vec::Zero(3);
      x(t % 3) = 1.0;
      const Cone mid = tangent_cone(orthant, x);
      x(0) = x(1) = x(2) = 1.0;
      const Cone outer = tangent_cone(orthant, x);
      for (NormKind in : {NormKind::L1, NormKind::L2}) {
        const double a = op_norm(A, inner, in, NormKind::L2).value;
        const double b = op_norm(A, mid, in, NormKind::L2).value;
        const double c = op_norm(A, outer, in, NormKind::L2).value;
        CHECK(a <= b + 1e-9);
        CHECK(b <= c + 1e-9);
      }
    }
  }

  TEST_CASE("restricted operator norm of the worked matrix") {
    const Cone C = cone_of_set(ConvexSet::orthant(3));
    const Mat A = example_matrix(0.1);
    CHECK(op_norm(A, C, NormKind::L1, NormKind::L2).value == doctest::Approx(std::sqrt(1.01)).epsilon(1e-6));
    const NormValue inv = inv_norm(A, C, NormKind::L1, NormKind::L2);
    CHECK(inv.value <= 10.0 + 1e-9);
    CHECK(inv.value >= 9.99);
  }

  TEST_CASE("inverse norm on the whole space is the reciprocal smallest singular value") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
      std::uniform_int_distribution<int> d(1, 4);
      const int m = d(rng), n = d(rng);
      const Mat A = random_matrix(rng, m, n);
      const double inv = inv_norm(A, Cone::full(n), NormKind::L2, NormKind::L2).value;
      CHECK(inv == doctest::Approx(1.0 / svd_extremes(A).sigma_min_plus).epsilon(1e-6));
    }
  }

  TEST_CASE("inverse norm rejects a zero image") {
    Error caught(ErrorKind::InvalidArgument, "");
    try {
      inv_norm(Mat::Zero(2, 2), Cone::full(2), NormKind::L2, NormKind::L2);
    } catch (const Error& e) {
      caught = e;
    }
    CHECK(caught.kind() == ErrorKind::DegenerateImage);
  }

  TEST_CASE("hoffman constant over the simplex is half the facial distance") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 12; ++t) {
      std::uniform_int_distribution<int> dn(2, 5), dm(1, 3);
      const int n = dn(rng), m = dm(rng);
      const Mat A = random_matrix(rng, m, n);
      const double h = hoffman_min(A, ConvexSet::simplex(n), NormKind::L1, NormKind::L2).value;
      const double phi = facial_distance(columns_of(A), NormKind::L2).value;
      CHECK(h == doctest::Approx(phi / 2.0).epsilon(1e-4));
    }
  }

  TEST_CASE("facial distance of identity columns") {
    CHECK(facial_distance(columns_of(Mat::Identity(3, 3)), NormKind::L2).value ==
          doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
    CHECK(facial_distance(columns_of(Mat::Identity(4, 4)), NormKind::L2).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hoffman_min(Mat::Identity(3, 3), ConvexSet::simplex(3), NormKind::L1, NormKind::L2).value ==
          doctest::Approx(std::sqrt(1.5) / 2.0).epsilon(1e-6));
  }

  TEST_CASE("facial distance never exceeds the diameter") {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 30; ++t) {
      std::uniform_int_distribution<int> dn(2, 6), dm(1, 3);
      const Mat A = random_matrix(rng, dm(rng), dn(rng));
      const auto cols = columns_of(A);
      CHECK(facial_distance(cols, NormKind::L2).value <= column_diameter(cols, NormKind::L2) + 1e-12);
    }
  }

  TEST_CASE("face enumeration of a simplex yields every vertex subset") {
    for (int n = 2; n <= 4; ++n) {
      const auto faces = enumerate_faces(columns_of(Mat::Identity(n, n)));
      CHECK(faces.size() == static_cast<std::size_t>((1 << n) - 1));
    }
  }

  TEST_CASE("restricted hoffman constant dominates the unrestricted one") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      const int n = 3 + t % 2;
      const Mat A = random_matrix(rng, 2, n);
      const ConvexSet X = ConvexSet::simplex(n);
      Vec x(n);
      for (int i = 0; i < n; ++i) x(i) = u(rng) * (i % 2 ? 1.0 : 0.0) + 1e-3;
      x /= x.sum();
      const double full = hoffman_min(A, X, NormKind::L2, NormKind::L2).value;
      const double restricted = hoffman_min_restricted_slice(A, X, A * x, NormKind::L2, NormKind::L2).value;
      CHECK(restricted >= full - 1e-9);
    }
  }

  TEST_CASE("tangent cones of the simplex") {
    const ConvexSet X = ConvexSet::simplex(3);
    const Cone C = tangent_cone(X, Vec::Unit(3, 0));
    CHECK(C.contains((Vec(3) << -1, 1, 0).finished()));
    CHECK_FALSE(C.contains((Vec(3) << 1, -1, 0).finished()));
    CHECK_FALSE(C.contains((Vec(3) << 0, 1, 0).finished()));
    // One cone per nonempty proper active set, including the relative interior.
    CHECK(enumerate_tangent_cones(X).size() == 7);
  }

  TEST_CASE("cone generators of the orthant are the unit vectors") {
    const ConeGenerators g = cone_generators(cone_of_set(ConvexSet::orthant(3)));
    CHECK(g.rays.size() == 3);
    CHECK(g.lineality.cols() == 0);
  }

  TEST_CASE("image subspace detection") {
    const Mat A = example_matrix(0.1);
    CHECK(image_is_subspace(A, cone_of_set(ConvexSet::orthant(3))));
    CHECK_FALSE(image_is_subspace(Mat::Identity(3, 3), cone_of_set(ConvexSet::orthant(3))));
  }
}
