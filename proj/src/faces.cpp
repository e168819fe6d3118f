#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "relcond/geometry.hpp"

namespace relcond {

std::vector<Face> enumerate_faces(const std::vector<Vec>& columns) {
  const int k = static_cast<int>(columns.size());
  if (k == 0) fail(ErrorKind::InvalidArgument, "no columns");
  if (k > 12) fail(ErrorKind::TooLarge, "face enumeration is limited to 12 columns");
  const int m = static_cast<int>(columns.front().size());
  for (const Vec& c : columns) {
    if (c.size() != m) fail(ErrorKind::DimensionMismatch, "columns differ in length");
  }
  std::vector<unsigned> masks;
  for (unsigned mask = 1; mask < (1u << k); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(),
                   [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });

  std::vector<Face> faces;
  for (unsigned mask : masks) {
    // Variables [u; beta]: u.a_i = beta on the subset, u.a_i >= beta + 1 elsewhere.
    Polyhedron P(m + 1);
    for (int i = 0; i < k; ++i) {
      Vec row(m + 1);
      row << columns[i], -1.0;
      if (mask & (1u << i)) {
        P.add_eq(row, 0.0);
      } else {
        P.add_ineq(-row, -1.0);
      }
    }
    LpResult r;
    try {
      r = lp_solve(Vec::Zero(m + 1), P);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Infeasible) continue;
      throw;
    }
    Face f;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) f.vertex_subset.push_back(i);
    }
    f.normal = r.argmin.head(m);
    f.offset = r.argmin(m);
    faces.push_back(std::move(f));
  }
  return faces;
}

FacialDistance facial_distance(const std::vector<Vec>& columns, NormKind norm_out) {
  if (columns.size() < 2) fail(ErrorKind::AllColumnsEqual, "need at least two distinct columns");
  const std::vector<Face> faces = enumerate_faces(columns);
  const int k = static_cast<int>(columns.size());
  FacialDistance out;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<int>>> vals;
  for (const Face& f : faces) {
    if (static_cast<int>(f.vertex_subset.size()) == k) continue;
    std::vector<bool> on(k, false);
    for (int i : f.vertex_subset) on[i] = true;
    std::vector<Vec> diffs;
    for (int i : f.vertex_subset) {
      for (int j = 0; j < k; ++j) {
        if (!on[j]) diffs.push_back(columns[i] - columns[j]);
      }
    }
    const double d = hull_distance(Vec::Zero(columns.front().size()), diffs, norm_out);
    vals.emplace_back(d, f.vertex_subset);
    out.value = std::min(out.value, d);
  }
  if (vals.empty()) fail(ErrorKind::AllColumnsEqual, "all columns coincide");
  for (const auto& [d, subset] : vals) {
    if (d <= out.value + 1e-10 * (1.0 + out.value)) out.argmin_faces.push_back(subset);
  }
  return out;
}

double column_diameter(const std::vector<Vec>& columns, NormKind norm_out) {
  if (columns.empty()) fail(ErrorKind::InvalidArgument, "no columns");
  double d = 0.0;
  for (size_t i = 0; i < columns.size(); ++i) {
    for (size_t j = i + 1; j < columns.size(); ++j) d = std::max(d, norm(columns[i] - columns[j], norm_out));
  }
  return d;
}

}  // namespace relcond
