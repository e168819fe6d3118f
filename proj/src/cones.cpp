#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "relcond/geometry.hpp"

namespace relcond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Polyhedron cone_polyhedron(const Cone& C) {
  Polyhedron P(C.dim + C.aux);
  for (int i = 0; i < C.ineq.rows(); ++i) P.add_ineq(C.ineq.row(i).transpose(), 0.0);
  for (int i = 0; i < C.eq.rows(); ++i) P.add_eq(C.eq.row(i).transpose(), 0.0);
  return P;
}

void require_plain(const Cone& C, const char* what) {
  if (C.aux != 0) fail(ErrorKind::UnsupportedStructure, std::string(what) + " needs a cone without auxiliary variables");
}

void push_unique(std::vector<Vec>& pts, const Vec& p, double tol = 1e-10) {
  for (const Vec& q : pts) {
    if ((q - p).cwiseAbs().maxCoeff() <= tol) return;
  }
  pts.push_back(p);
}

// Vertices of C intersected with the unit ball of a polyhedral norm, without 0.
std::vector<Vec> ball_section_vertices(const Cone& C, NormKind kind) {
  const int n = C.dim;
  std::vector<Vec> pts;
  const Polyhedron base = cone_polyhedron(C);
  if (kind == NormKind::L1) {
    for (long mask = 0; mask < (1L << n); ++mask) {
      Polyhedron P = base;
      Vec s(n);
      for (int i = 0; i < n; ++i) s(i) = (mask >> i) & 1 ? -1.0 : 1.0;
      for (int i = 0; i < n; ++i) P.add_ineq(-s(i) * Vec::Unit(n, i), 0.0);
      P.add_eq(s, 1.0);
      for (const Vec& v : enumerate_vertices(P)) push_unique(pts, v);
    }
  } else if (kind == NormKind::Linf) {
    Polyhedron P = base;
    for (int i = 0; i < n; ++i) {
      P.add_ineq(Vec::Unit(n, i), 1.0);
      P.add_ineq(-Vec::Unit(n, i), 1.0);
    }
    for (const Vec& v : enumerate_vertices(P)) {
      if (v.cwiseAbs().maxCoeff() > 1e-12) push_unique(pts, v);
    }
  } else {
    fail(ErrorKind::InvalidArgument, "ball sections are polyhedral only for L1 and Linf");
  }
  return pts;
}

// Orthonormal bases of the linear spans of all faces of C.
std::vector<Mat> face_spans(const Cone& C) {
  const int m = static_cast<int>(C.ineq.rows());
  if (m > 16) fail(ErrorKind::TooLarge, "cone has too many inequalities for face enumeration");
  std::vector<Mat> spans;
  for (long mask = 0; mask < (1L << m); ++mask) {
    Mat R = C.eq;
    for (int i = 0; i < m; ++i) {
      if (mask & (1L << i)) R = vstack(R, Mat(C.ineq.row(i)));
    }
    Mat B = null_basis(R.rows() ? R : Mat(0, C.dim));
    if (B.cols() > 0) spans.push_back(B);
  }
  return spans;
}

// Values |A d|_2 over unit d in C that are stationary on some face of C.
std::vector<double> face_eigen_values(const Mat& A, const Cone& C) {
  std::vector<double> vals;
  for (const Mat& B : face_spans(C)) {
    const Svd d = jacobi_svd(A * B);
    Mat Vfull = d.V;
    Vec s = d.s;
    if (Vfull.cols() < B.cols()) {
      // Directions in the null space of A B have gain zero.
      const Mat N = null_basis(A * B);
      Mat V2(B.cols(), Vfull.cols() + N.cols());
      V2 << Vfull, N;
      Vec s2 = Vec::Zero(V2.cols());
      s2.head(s.size()) = s;
      Vfull = V2;
      s = s2;
    }
    for (int k = 0; k < Vfull.cols(); ++k) {
      const Vec dir = B * Vfull.col(k);
      if (dir.norm() < 1e-12) continue;
      const Vec u = dir.normalized();
      if (C.contains(u, 1e-9) || C.contains(-u, 1e-9)) vals.push_back((A * u).norm());
    }
  }
  return vals;
}

// Minimum-norm preimage inf { |d|_in : d in C, A d = v }; +inf when infeasible.
double min_preimage(const Mat& A, const Cone& C, const Vec& v, NormKind norm_in) {
  Polyhedron P = cone_polyhedron(C);
  for (int i = 0; i < A.rows(); ++i) {
    Vec a = Vec::Zero(C.dim + C.aux);
    a.head(C.dim) = A.row(i).transpose();
    P.add_eq(a, v(i));
  }
  try {
    if (C.aux == 0) return polyhedron_distance(Vec::Zero(C.dim), P, norm_in).first;
    fail(ErrorKind::UnsupportedStructure, "lifted preimage");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) return kInf;
    throw;
  }
}

double support_of_unit_ball(const Vec& a, const Mat& V, NormKind out) {
  // sup { a^T y : |V y|_out <= 1 }.
  const int k = static_cast<int>(V.cols());
  const int m = static_cast<int>(V.rows());
  if (out == NormKind::L2) return a.norm();
  const int ne = out == NormKind::L1 ? m : 0;
  Polyhedron P(k + ne);
  for (int r = 0; r < m; ++r) {
    Vec row = Vec::Zero(k + ne);
    row.head(k) = V.row(r).transpose();
    if (out == NormKind::L1) {
      Vec up = row;
      up(k + r) = -1.0;
      P.add_ineq(up, 0.0);
      Vec lo = -row;
      lo(k + r) = -1.0;
      P.add_ineq(lo, 0.0);
    } else {
      P.add_ineq(row, 1.0);
      P.add_ineq(-row, 1.0);
    }
  }
  if (out == NormKind::L1) {
    Vec sum = Vec::Zero(k + ne);
    sum.tail(ne).setOnes();
    P.add_ineq(sum, 1.0);
  }
  Vec cost = Vec::Zero(k + ne);
  cost.head(k) = -a;
  return -lp_solve(cost, P).optimum;
}

}  // namespace

Cone Cone::full(int n) {
  Cone C;
  C.dim = n;
  C.ineq = Mat(0, n);
  C.eq = Mat(0, n);
  return C;
}

bool Cone::contains(const Vec& d, double tol) const {
  if (d.size() != dim) fail(ErrorKind::DimensionMismatch, "direction dimension differs from cone");
  const double scale = 1.0 + d.cwiseAbs().maxCoeff();
  if (aux == 0) {
    for (int i = 0; i < ineq.rows(); ++i) {
      if (ineq.row(i).dot(d) > tol * scale) return false;
    }
    for (int i = 0; i < eq.rows(); ++i) {
      if (std::abs(eq.row(i).dot(d)) > tol * scale) return false;
    }
    return true;
  }
  Polyhedron P(aux);
  for (int i = 0; i < ineq.rows(); ++i) {
    P.add_ineq(ineq.row(i).tail(aux).transpose(), -ineq.row(i).head(dim).dot(d) + tol * scale);
  }
  for (int i = 0; i < eq.rows(); ++i) {
    const double r = -eq.row(i).head(dim).dot(d);
    P.add_ineq(eq.row(i).tail(aux).transpose(), r + tol * scale);
    P.add_ineq(-eq.row(i).tail(aux).transpose(), -r + tol * scale);
  }
  return lp_feasible(P);
}

ConeGenerators cone_generators(const Cone& C) {
  require_plain(C, "cone_generators");
  ConeGenerators g;
  const Mat all = vstack(C.ineq, C.eq);
  g.lineality = null_basis(all.rows() ? all : Mat(0, C.dim));
  if (C.ineq.rows() == 0) return g;
  Polyhedron P = cone_polyhedron(C);
  for (int j = 0; j < g.lineality.cols(); ++j) P.add_eq(g.lineality.col(j), 0.0);
  const Vec w = -C.ineq.colwise().sum().transpose();
  if (w.norm() == 0.0) return g;
  P.add_eq(w, 1.0);
  for (const Vec& r : enumerate_vertices(P)) {
    if (r.norm() > 1e-12) g.rays.push_back(r / r.norm());
  }
  return g;
}

Cone cone_of_set(const ConvexSet& X) {
  if (!X.is_cone()) fail(ErrorKind::PreconditionViolated, X.describe() + " is not a cone");
  const Polyhedron& H = X.h_rep();
  Cone C = Cone::full(X.dim());
  if (H.A_ub.rows()) C.ineq = H.A_ub;
  if (H.A_eq.rows()) C.eq = H.A_eq;
  for (int i = 0; i < C.ineq.rows(); ++i) C.active.push_back(i);
  C.at = Vec::Zero(X.dim());
  return C;
}

Cone tangent_cone(const ConvexSet& X, const Vec& x, double tol) {
  if (!X.is_polyhedral()) fail(ErrorKind::NotPolyhedral, X.describe() + " has no polyhedral tangent cones");
  if (!X.contains(x, tol)) fail(ErrorKind::NotInSet, "point is not in " + X.describe());
  const Polyhedron& H = X.h_rep();
  Cone C = Cone::full(X.dim());
  if (H.A_eq.rows()) C.eq = H.A_eq;
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  for (int i = 0; i < H.A_ub.rows(); ++i) {
    if (H.A_ub.row(i).dot(x) >= H.b_ub(i) - tol * scale) {
      C.ineq = vstack(C.ineq, Mat(H.A_ub.row(i)));
      C.active.push_back(i);
    }
  }
  C.at = x;
  return C;
}

std::vector<Cone> enumerate_tangent_cones(const ConvexSet& X, int max_cones) {
  if (!X.is_polyhedral()) fail(ErrorKind::NotPolyhedral, X.describe() + " has no polyhedral tangent cones");
  const Polyhedron& H = X.h_rep();
  const int n = X.dim();
  const int m = static_cast<int>(H.A_ub.rows());
  std::vector<Cone> out;
  long nodes = 0;

  // Maximizes a common slack t <= 1 on the rows outside J with the rows in J tight.
  auto probe = [&](const std::vector<int>& J, double& slack, Vec& point) -> bool {
    Polyhedron P(n + 1);
    std::vector<bool> inJ(m, false);
    for (int i : J) inJ[i] = true;
    for (int i = 0; i < m; ++i) {
      Vec a(n + 1);
      a << H.A_ub.row(i).transpose(), inJ[i] ? 0.0 : 1.0;
      if (inJ[i]) {
        P.add_eq(a, H.b_ub(i));
      } else {
        P.add_ineq(a, H.b_ub(i));
      }
    }
    for (int i = 0; i < H.A_eq.rows(); ++i) {
      Vec a = Vec::Zero(n + 1);
      a.head(n) = H.A_eq.row(i).transpose();
      P.add_eq(a, H.b_eq(i));
    }
    P.add_ineq(Vec::Unit(n + 1, n), 1.0);
    try {
      const LpResult r = lp_solve(-Vec::Unit(n + 1, n), P);
      slack = r.argmin(n);
      point = r.argmin.head(n);
      return true;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Infeasible) return false;
      throw;
    }
  };

  std::function<void(std::vector<int>&, int)> dfs = [&](std::vector<int>& J, int next) {
    if (++nodes > (1L << 16)) fail(ErrorKind::TooLarge, "active-set search exceeds the node cap");
    double slack = 0.0;
    Vec point;
    if (!probe(J, slack, point)) return;
    if (slack > 1e-9 || m == static_cast<int>(J.size())) {
      if (static_cast<int>(out.size()) >= max_cones) fail(ErrorKind::TooLarge, "too many distinct tangent cones");
      Cone C = Cone::full(n);
      if (H.A_eq.rows()) C.eq = H.A_eq;
      for (int i : J) C.ineq = vstack(C.ineq, Mat(H.A_ub.row(i)));
      C.active = J;
      C.at = point;
      out.push_back(C);
    }
    for (int i = next; i < m; ++i) {
      J.push_back(i);
      dfs(J, i + 1);
      J.pop_back();
    }
  };
  std::vector<int> J;
  dfs(J, 0);
  return out;
}

Cone restricted_tangent_cone(const ConvexSet& X, const Vec& x, const Mat& A, const std::vector<Vec>& S) {
  if (S.empty()) fail(ErrorKind::InvalidArgument, "restricting set must be nonempty");
  if (!X.contains(x)) fail(ErrorKind::NotInSet, "point is not in " + X.describe());
  for (const Vec& s : S) {
    if (!X.contains(s)) fail(ErrorKind::NotInSet, "restricting point is not in " + X.describe());
  }
  const Polyhedron& H = X.h_rep();
  const int n = X.dim();
  const int k = static_cast<int>(S.size());
  const int m = static_cast<int>(A.rows());
  // Variables [d; s; mu]: d + s x lies in s X and A(d + s x) = sum mu_i A s_i with sum mu = s.
  Cone C;
  C.dim = n;
  C.aux = 1 + k;
  const int N = n + 1 + k;
  C.ineq = Mat(0, N);
  C.eq = Mat(0, N);
  for (int i = 0; i < H.A_ub.rows(); ++i) {
    Mat row = Mat::Zero(1, N);
    row.block(0, 0, 1, n) = H.A_ub.row(i);
    row(0, n) = H.A_ub.row(i).dot(x) - H.b_ub(i);
    C.ineq = vstack(C.ineq, row);
  }
  for (int i = 0; i < H.A_eq.rows(); ++i) {
    Mat row = Mat::Zero(1, N);
    row.block(0, 0, 1, n) = H.A_eq.row(i);
    row(0, n) = H.A_eq.row(i).dot(x) - H.b_eq(i);
    C.eq = vstack(C.eq, row);
  }
  for (int r = 0; r < m; ++r) {
    Mat row = Mat::Zero(1, N);
    row.block(0, 0, 1, n) = A.row(r);
    row(0, n) = A.row(r).dot(x);
    for (int j = 0; j < k; ++j) row(0, n + 1 + j) = -A.row(r).dot(S[j]);
    C.eq = vstack(C.eq, row);
  }
  {
    Mat row = Mat::Zero(1, N);
    row(0, n) = -1.0;
    for (int j = 0; j < k; ++j) row(0, n + 1 + j) = 1.0;
    C.eq = vstack(C.eq, row);
  }
  for (int j = 0; j <= k; ++j) {
    Mat row = Mat::Zero(1, N);
    row(0, n + j) = -1.0;
    C.ineq = vstack(C.ineq, row);
  }
  C.at = x;
  return C;
}

Mat image_basis(const Mat& A, const Cone& C) {
  const ConeGenerators g = cone_generators(C);
  Mat G(A.rows(), g.rays.size() + g.lineality.cols());
  for (size_t i = 0; i < g.rays.size(); ++i) G.col(i) = A * g.rays[i];
  for (int j = 0; j < g.lineality.cols(); ++j) G.col(g.rays.size() + j) = A * g.lineality.col(j);
  if (G.cols() == 0) return Mat(A.rows(), 0);
  return range_basis(G);
}

bool image_is_subspace(const Mat& A, const Cone& C) {
  const ConeGenerators g = cone_generators(C);
  if (g.rays.empty()) return true;
  const int nr = static_cast<int>(g.rays.size());
  const int nl = static_cast<int>(g.lineality.cols());
  const int m = static_cast<int>(A.rows());
  Mat AG(m, nr + nl);
  for (int i = 0; i < nr; ++i) AG.col(i) = A * g.rays[i];
  for (int j = 0; j < nl; ++j) AG.col(nr + j) = A * g.lineality.col(j);
  std::vector<bool> nonneg(nr + nl, false);
  for (int i = 0; i < nr; ++i) nonneg[i] = true;
  for (int i = 0; i < nr; ++i) {
    if (AG.col(i).norm() <= 1e-12) continue;
    Polyhedron P(nr + nl);
    for (int r = 0; r < m; ++r) P.add_eq(AG.row(r).transpose(), -AG(r, i));
    try {
      lp_solve(Vec::Zero(nr + nl), P, nonneg);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Infeasible) return false;
      throw;
    }
  }
  return true;
}

NormValue op_norm(const Mat& A, const Cone& C, NormKind norm_in, NormKind norm_out) {
  require_plain(C, "op_norm");
  if (A.cols() != C.dim) fail(ErrorKind::DimensionMismatch, "matrix and cone dimensions differ");
  NormValue r;
  if (norm_in != NormKind::L2) {
    for (const Vec& v : ball_section_vertices(C, norm_in)) r.value = std::max(r.value, norm(A * v, norm_out));
    r.method = "exact";
    return r;
  }
  if (norm_out == NormKind::L2) {
    for (double v : face_eigen_values(A, C)) r.value = std::max(r.value, v);
    r.method = "exact";
    return r;
  }
  // Projected subgradient ascent from the extreme rays and coordinate seeds.
  const ConeGenerators g = cone_generators(C);
  std::vector<Vec> seeds = g.rays;
  for (int j = 0; j < g.lineality.cols(); ++j) {
    seeds.push_back(g.lineality.col(j));
    seeds.push_back(-g.lineality.col(j));
  }
  const Polyhedron P = cone_polyhedron(C);
  const double step0 = 1.0 / std::max(1e-12, A.cwiseAbs().sum());
  for (Vec d : seeds) {
    d.normalize();
    for (int it = 0; it < 300; ++it) {
      r.value = std::max(r.value, norm(A * d, norm_out));
      const Vec Ad = A * d;
      Vec sub = Vec::Zero(Ad.size());
      if (norm_out == NormKind::L1) {
        sub = Ad.unaryExpr([](double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); });
      } else {
        Eigen::Index k;
        Ad.cwiseAbs().maxCoeff(&k);
        sub(k) = Ad(k) >= 0 ? 1.0 : -1.0;
      }
      Vec next = project_polyhedron(d + step0 * A.transpose() * sub, P);
      if (next.norm() < 1e-14) break;
      next.normalize();
      if ((next - d).norm() < 1e-12) break;
      d = next;
    }
  }
  r.method = "sampled-ascent";
  return r;
}

NormValue cone_min_gain(const Mat& A, const Cone& C, NormKind norm_in, NormKind norm_out) {
  require_plain(C, "cone_min_gain");
  NormValue r;
  r.value = kInf;
  const int n = C.dim;
  if (norm_in == NormKind::L2) {
    if (norm_out != NormKind::L2) fail(ErrorKind::UnsupportedStructure, "minimum gain needs L2 output with L2 input");
    for (double v : face_eigen_values(A, C)) r.value = std::min(r.value, v);
    r.method = "exact";
    return r;
  }
  const Polyhedron base = cone_polyhedron(C);
  auto consider = [&](const Polyhedron& P) {
    const std::vector<Vec> verts = enumerate_vertices(P);
    if (verts.empty()) return;
    std::vector<Vec> img;
    for (const Vec& v : verts) img.push_back(A * v);
    r.value = std::min(r.value, hull_distance(Vec::Zero(A.rows()), img, norm_out));
  };
  if (norm_in == NormKind::L1) {
    for (long mask = 0; mask < (1L << n); ++mask) {
      Polyhedron P = base;
      Vec s(n);
      for (int i = 0; i < n; ++i) s(i) = (mask >> i) & 1 ? -1.0 : 1.0;
      for (int i = 0; i < n; ++i) P.add_ineq(-s(i) * Vec::Unit(n, i), 0.0);
      P.add_eq(s, 1.0);
      consider(P);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Polyhedron P = base;
        for (int j = 0; j < n; ++j) {
          P.add_ineq(Vec::Unit(n, j), 1.0);
          P.add_ineq(-Vec::Unit(n, j), 1.0);
        }
        P.add_eq(Vec::Unit(n, i), sgn);
        consider(P);
      }
    }
  }
  r.method = "exact";
  return r;
}

NormValue inv_norm(const Mat& A, const Cone& C, NormKind norm_in, NormKind norm_out, const InvNormOptions& opts) {
  require_plain(C, "inv_norm");
  if (A.cols() != C.dim) fail(ErrorKind::DimensionMismatch, "matrix and cone dimensions differ");
  const Mat V = image_basis(A, C);
  const int k = static_cast<int>(V.cols());
  if (k == 0) fail(ErrorKind::DegenerateImage, "A(C) = {0}");
  const bool subspace = image_is_subspace(A, C);
  NormValue r;

  if (norm_in != NormKind::L2 && subspace) {
    std::vector<Vec> y;
    for (const Vec& v : ball_section_vertices(C, norm_in)) push_unique(y, Vec(V.transpose() * (A * v)), 1e-11);
    const Polyhedron H = hull_h_rep(y);
    for (int i = 0; i < H.A_ub.rows(); ++i) {
      const Vec a = H.A_ub.row(i).transpose();
      const double b = H.b_ub(i);
      if (b <= 1e-14 * (1.0 + a.norm())) fail(ErrorKind::DegenerateImage, "origin on the boundary of the image section");
      r.value = std::max(r.value, support_of_unit_ball(a, V, norm_out) / b);
    }
    r.method = "exact";
    return r;
  }

  auto direction = [&](const Vec& theta) -> Vec {
    const Vec v = V * theta;
    return v / norm(v, norm_out);
  };
  auto value = [&](const Vec& theta) { return min_preimage(A, C, direction(theta), norm_in); };
  double best = -1.0;
  Vec best_theta;
  auto consider = [&](const Vec& theta) {
    const double val = value(theta);
    if (std::isfinite(val) && val > best) {
      best = val;
      best_theta = theta;
    }
  };
  const int N = std::max(4, opts.directions);
  if (k == 1) {
    consider(Vec::Constant(1, 1.0));
    consider(Vec::Constant(1, -1.0));
  } else if (k == 2) {
    for (int j = 0; j < N; ++j) {
      const double t = 2.0 * M_PI * j / N;
      consider((Vec(2) << std::cos(t), std::sin(t)).finished());
    }
    if (opts.refine && best >= 0) {
      // Golden-section search on the angle around the best grid direction.
      const double t0 = std::atan2(best_theta(1), best_theta(0));
      double lo = t0 - 2.0 * M_PI / N, hi = t0 + 2.0 * M_PI / N;
      const double g = (std::sqrt(5.0) - 1.0) / 2.0;
      auto at = [&](double t) { return (Vec(2) << std::cos(t), std::sin(t)).finished(); };
      double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
      double fc = value(at(c)), fd = value(at(d));
      for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - g * (hi - lo);
          fc = value(at(c));
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + g * (hi - lo);
          fd = value(at(d));
        }
      }
      consider(at(c));
      consider(at(d));
    }
  } else {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < k; ++i) {
      consider(Vec::Unit(k, i));
      consider(-Vec::Unit(k, i));
    }
    for (int j = 0; j < N; ++j) {
      Vec t(k);
      for (int i = 0; i < k; ++i) t(i) = gauss(rng);
      consider(t.normalized());
    }
    if (opts.refine && best >= 0) {
      double step = 0.05;
      for (int it = 0; it < 200 && step > 1e-7; ++it) {
        Vec t(k);
        for (int i = 0; i < k; ++i) t(i) = gauss(rng);
        const double before = best;
        consider((best_theta + step * t).normalized());
        if (best <= before) step *= 0.9;
      }
    }
  }
  if (best < 0) fail(ErrorKind::DegenerateImage, "no sampled direction lies in A(C)");
  r.value = best;
  r.method = "discretized(" + std::to_string(N) + (opts.refine ? ",refined)" : ")");
  return r;
}

}  // namespace relcond
