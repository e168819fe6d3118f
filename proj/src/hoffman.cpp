#include <algorithm>
#include <cmath>
#include <limits>

#include "relcond/geometry.hpp"

namespace relcond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool image_is_trivial(const Mat& A, const ConvexSet& X) {
  const Mat B = X.direction_basis();
  return B.cols() == 0 || (A * B).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + A.cwiseAbs().maxCoeff());
}

}  // namespace

HoffmanResult hoffman_min(const Mat& A, const ConvexSet& X, NormKind norm_in, NormKind norm_out,
                          const InvNormOptions& opts) {
  if (A.cols() != X.dim()) fail(ErrorKind::DimensionMismatch, "matrix columns differ from set dimension");
  if (!X.is_polyhedral()) fail(ErrorKind::NotPolyhedral, X.describe() + " is not polyhedral");
  if (image_is_trivial(A, X)) fail(ErrorKind::PreconditionViolated, "A(X) is a single point");
  HoffmanResult res;
  res.value = kInf;
  res.conventions.push_back("unfiltered enumeration");
  const std::vector<Cone> cones = enumerate_tangent_cones(X);
  res.cones_total = static_cast<int>(cones.size());
  bool exact = true;
  bool skipped_zero = false;
  std::string inexact_tag;
  for (const Cone& C : cones) {
    if (image_basis(A, C).cols() == 0) {
      skipped_zero = true;
      continue;
    }
    if (!image_is_subspace(A, C)) continue;
    const NormValue inv = inv_norm(A, C, norm_in, norm_out, opts);
    ++res.cones_used;
    if (inv.method != "exact") {
      exact = false;
      inexact_tag = inv.method;
    }
    const double v = 1.0 / inv.value;
    if (v < res.value) {
      res.value = v;
      res.argmin_active = C.active;
      res.argmin_point = C.at;
    }
  }
  if (res.cones_used == 0) fail(ErrorKind::NoSubspaceCone, "no tangent cone has a subspace image");
  if (skipped_zero) res.conventions.push_back("cones with zero image skipped");
  res.method = exact ? "exact" : inexact_tag;
  return res;
}

HoffmanResult hoffman_min_restricted(const Mat& A, const ConvexSet& X, const std::vector<Vec>& S,
                                     NormKind norm_in, NormKind norm_out, const RestrictedOptions& opts) {
  if (S.empty()) fail(ErrorKind::InvalidArgument, "restricting set must be nonempty");
  for (const Vec& s : S) {
    if (!X.contains(s)) fail(ErrorKind::NotInSet, "restricting point is not in " + X.describe());
  }
  const Vec w = A * S.front();
  for (const Vec& s : S) {
    if ((A * s - w).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + w.cwiseAbs().maxCoeff())) {
      fail(ErrorKind::UnsupportedStructure, "restricted minimum needs A(S) to be a single point");
    }
  }
  return hoffman_min_restricted_slice(A, X, w, norm_in, norm_out, opts);
}

HoffmanResult hoffman_min_restricted_slice(const Mat& A, const ConvexSet& X, const Vec& w,
                                           NormKind norm_in, NormKind norm_out, const RestrictedOptions& opts) {
  if (A.cols() != X.dim() || A.rows() != w.size()) fail(ErrorKind::DimensionMismatch, "slice dimensions");
  if (!X.is_polyhedral()) fail(ErrorKind::NotPolyhedral, X.describe() + " is not polyhedral");
  if (image_is_trivial(A, X)) fail(ErrorKind::PreconditionViolated, "A(X) is a single point");
  Polyhedron P = X.h_rep();
  for (int r = 0; r < A.rows(); ++r) P.add_eq(A.row(r).transpose(), w(r));
  const ConvexSet slice = ConvexSet::polyhedron(P);

  HoffmanResult res;
  res.conventions.push_back("slice cone homogenization");
  res.cones_total = 1;
  res.cones_used = 1;
  const Vec p = slice.interior_point();
  if (slice.direction_basis().cols() == 0) {
    // A singleton slice {p}: the cone of X at p carries the whole ratio by homogeneity.
    const Cone T = tangent_cone(X, p);
    const NormValue g = cone_min_gain(A, T, norm_in, norm_out);
    res.value = g.value;
    res.method = g.method;
    res.argmin_active = T.active;
    res.argmin_point = p;
    return res;
  }

  // |A x - w| / dist(x, slice) over x in X \ slice, searched over vertices and samples.
  auto ratio = [&](const Vec& x) -> double {
    const double d = polyhedron_distance(x, P, norm_in).first;
    if (d <= 1e-10 * (1.0 + x.cwiseAbs().maxCoeff())) return kInf;
    return norm(A * x - w, norm_out) / d;
  };
  std::vector<Vec> candidates;
  if (X.is_bounded()) candidates = X.vertices();
  std::mt19937_64 rng(opts.seed);
  for (int i = 0; i < opts.samples; ++i) candidates.push_back(X.sample(rng, opts.radius));
  std::vector<std::pair<double, Vec>> scored;
  for (const Vec& x : candidates) scored.emplace_back(ratio(x), x);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  res.value = scored.empty() ? kInf : scored.front().first;
  if (!scored.empty()) res.argmin_point = scored.front().second;

  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = X.dim();
  const int starts = std::min<int>(5, static_cast<int>(scored.size()));
  for (int s = 0; s < starts; ++s) {
    Vec x = scored[s].second;
    double fx = scored[s].first;
    double step = 0.1;
    for (int it = 0; it < 200 && step > 1e-8; ++it) {
      Vec t(n);
      for (int i = 0; i < n; ++i) t(i) = gauss(rng);
      const Vec y = X.project(x + step * t);
      const double fy = ratio(y);
      if (fy < fx) {
        x = y;
        fx = fy;
      } else {
        step *= 0.9;
      }
    }
    if (fx < res.value) {
      res.value = fx;
      res.argmin_point = x;
    }
  }
  res.method = "sampled";
  return res;
}

}  // namespace relcond
