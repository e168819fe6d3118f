#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "relcond/sets.hpp"

namespace relcond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - 1e-12) return true;
    if (a(i) > b(i) + 1e-12) return false;
  }
  return false;
}

}  // namespace

const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::StandardSimplex: return "simplex";
    case SetKind::NonnegOrthant: return "orthant";
    case SetKind::Box: return "box";
    case SetKind::Subspace: return "subspace";
    case SetKind::PolytopeV: return "polytope";
    case SetKind::PolyhedronH: return "polyhedron";
    case SetKind::Ball2: return "ball";
  }
  return "?";
}

struct ConvexSet::Cache {
  std::once_flag h_once, v_once, b_once, d_once;
  Polyhedron h;
  std::vector<Vec> vertices;
  bool bounded = false;
  Mat directions;
};

void ConvexSet::init_cache() { cache_ = std::make_shared<Cache>(); }

ConvexSet ConvexSet::simplex(int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "simplex dimension must be positive");
  ConvexSet X;
  X.kind_ = SetKind::StandardSimplex;
  X.dim_ = n;
  X.init_cache();
  return X;
}

ConvexSet ConvexSet::orthant(int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "orthant dimension must be positive");
  ConvexSet X;
  X.kind_ = SetKind::NonnegOrthant;
  X.dim_ = n;
  X.lower_ = Vec::Zero(n);
  X.upper_ = Vec::Constant(n, kInf);
  X.init_cache();
  return X;
}

ConvexSet ConvexSet::box(const Vec& lower, const Vec& upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    fail(ErrorKind::DimensionMismatch, "box bounds must have equal positive length");
  }
  for (int i = 0; i < lower.size(); ++i) {
    if (!(lower(i) <= upper(i))) fail(ErrorKind::InvalidArgument, "box lower bound exceeds upper bound");
  }
  ConvexSet X;
  X.kind_ = SetKind::Box;
  X.dim_ = static_cast<int>(lower.size());
  X.lower_ = lower;
  X.upper_ = upper;
  X.init_cache();
  return X;
}

ConvexSet ConvexSet::subspace(const Mat& basis) {
  if (basis.rows() == 0) fail(ErrorKind::InvalidArgument, "subspace needs an ambient dimension");
  if (basis.cols() > 0 && numerical_rank(basis) < basis.cols()) {
    fail(ErrorKind::InvalidArgument, "subspace basis must be linearly independent");
  }
  ConvexSet X;
  X.kind_ = SetKind::Subspace;
  X.dim_ = static_cast<int>(basis.rows());
  X.basis_ = basis.cols() ? range_basis(basis) : Mat(basis.rows(), 0);
  X.init_cache();
  return X;
}

ConvexSet ConvexSet::polytope(const std::vector<Vec>& vertices) {
  if (vertices.empty()) fail(ErrorKind::InvalidArgument, "polytope needs at least one vertex");
  const auto n = vertices[0].size();
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].size() != n) fail(ErrorKind::DimensionMismatch, "vertex dimensions differ");
    for (size_t j = 0; j < i; ++j) {
      if ((vertices[i] - vertices[j]).cwiseAbs().maxCoeff() <= 1e-12) {
        fail(ErrorKind::InvalidArgument, "polytope vertices must be pairwise distinct");
      }
    }
  }
  ConvexSet X;
  X.kind_ = SetKind::PolytopeV;
  X.dim_ = static_cast<int>(n);
  X.given_vertices_ = vertices;
  X.init_cache();
  return X;
}

ConvexSet ConvexSet::polyhedron(const Polyhedron& P) {
  if (P.dim() < 1) fail(ErrorKind::InvalidArgument, "polyhedron needs a dimension");
  if (!lp_feasible(P)) fail(ErrorKind::InvalidArgument, "polyhedron is empty");
  ConvexSet X;
  X.kind_ = SetKind::PolyhedronH;
  X.dim_ = P.dim();
  X.given_h_ = P;
  if (X.given_h_.A_ub.rows() == 0) {
    X.given_h_.A_ub = Mat(0, X.dim_);
    X.given_h_.b_ub = Vec(0);
  }
  if (X.given_h_.A_eq.rows() == 0) {
    X.given_h_.A_eq = Mat(0, X.dim_);
    X.given_h_.b_eq = Vec(0);
  }
  X.init_cache();
  return X;
}

ConvexSet ConvexSet::ball(const Vec& center, double radius) {
  if (center.size() == 0 || !(radius >= 0)) fail(ErrorKind::InvalidArgument, "ball needs a center and radius >= 0");
  ConvexSet X;
  X.kind_ = SetKind::Ball2;
  X.dim_ = static_cast<int>(center.size());
  X.lower_ = center;
  X.radius_ = radius;
  X.init_cache();
  return X;
}

std::string ConvexSet::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(n=" << dim_ << ")";
  return os.str();
}

Polyhedron hull_h_rep(const std::vector<Vec>& points) {
  const int n = static_cast<int>(points[0].size());
  const Vec& v0 = points[0];
  Mat D(n, points.size());
  for (size_t i = 0; i < points.size(); ++i) D.col(i) = points[i] - v0;
  const Mat B = range_basis(D);
  const int k = static_cast<int>(B.cols());
  Polyhedron P(n);
  const Mat N = null_basis(B.transpose());
  for (int j = 0; j < N.cols(); ++j) P.add_eq(N.col(j), N.col(j).dot(v0));
  if (k == 0) return P;

  std::vector<Vec> y;
  for (const Vec& p : points) y.push_back(B.transpose() * (p - v0));
  double scale = 1.0;
  for (const Vec& p : y) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  std::vector<std::pair<Vec, double>> facets;
  auto add_facet = [&](Vec u, double b) {
    const double nu = u.norm();
    u /= nu;
    b /= nu;
    for (const auto& f : facets) {
      if ((f.first - u).cwiseAbs().maxCoeff() < 1e-9 && std::abs(f.second - b) < tol) return;
    }
    facets.emplace_back(u, b);
  };
  const int np = static_cast<int>(y.size());
  if (k == 1) {
    double lo = kInf, hi = -kInf;
    for (const Vec& p : y) {
      lo = std::min(lo, p(0));
      hi = std::max(hi, p(0));
    }
    add_facet(Vec::Constant(1, 1.0), hi);
    add_facet(Vec::Constant(1, -1.0), -lo);
  } else {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    double count = 1.0;
    for (int i = 0; i < k; ++i) count = count * (np - i) / (i + 1);
    if (count > 2e6) fail(ErrorKind::TooLarge, "facet enumeration exceeds the combination cap");
    while (true) {
      Mat M(k - 1, k);
      for (int i = 1; i < k; ++i) M.row(i - 1) = (y[idx[i]] - y[idx[0]]).transpose();
      const Mat nb = null_basis(M);
      if (nb.cols() == 1) {
        Vec u = nb.col(0);
        const double b = u.dot(y[idx[0]]);
        bool below = true, above = true;
        for (const Vec& p : y) {
          const double v = u.dot(p);
          below = below && v <= b + tol;
          above = above && v >= b - tol;
        }
        if (below) add_facet(u, b);
        if (above) add_facet(-u, -b);
      }
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == np - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  for (const auto& f : facets) {
    const Vec a = B * f.first;
    P.add_ineq(a, f.second + a.dot(v0));
  }
  return P;
}

const Polyhedron& ConvexSet::h_rep() const {
  if (kind_ == SetKind::Ball2) fail(ErrorKind::NotPolyhedral, "the Euclidean ball is not polyhedral");
  std::call_once(cache_->h_once, [this] {
    const int n = dim_;
    Polyhedron P(n);
    switch (kind_) {
      case SetKind::StandardSimplex:
        for (int i = 0; i < n; ++i) P.add_ineq(-Vec::Unit(n, i), 0.0);
        P.add_eq(Vec::Ones(n), 1.0);
        break;
      case SetKind::NonnegOrthant:
        for (int i = 0; i < n; ++i) P.add_ineq(-Vec::Unit(n, i), 0.0);
        break;
      case SetKind::Box:
        for (int i = 0; i < n; ++i) {
          if (std::isfinite(upper_(i))) P.add_ineq(Vec::Unit(n, i), upper_(i));
          if (std::isfinite(lower_(i))) P.add_ineq(-Vec::Unit(n, i), -lower_(i));
        }
        break;
      case SetKind::Subspace: {
        const Mat N = null_basis(basis_.cols() ? Mat(basis_.transpose()) : Mat(0, n));
        for (int j = 0; j < N.cols(); ++j) P.add_eq(N.col(j), 0.0);
        break;
      }
      case SetKind::PolytopeV:
        P = hull_h_rep(given_vertices_);
        break;
      case SetKind::PolyhedronH:
        P = given_h_;
        break;
      case SetKind::Ball2:
        break;
    }
    cache_->h = P;
  });
  return cache_->h;
}

bool ConvexSet::is_bounded() const {
  std::call_once(cache_->b_once, [this] {
    bool b = false;
    switch (kind_) {
      case SetKind::StandardSimplex:
      case SetKind::PolytopeV:
      case SetKind::Ball2:
        b = true;
        break;
      case SetKind::NonnegOrthant:
        b = false;
        break;
      case SetKind::Subspace:
        b = basis_.cols() == 0;
        break;
      case SetKind::Box:
        b = lower_.allFinite() && upper_.allFinite();
        break;
      case SetKind::PolyhedronH: {
        b = true;
        for (int i = 0; i < dim_ && b; ++i) {
          for (double sgn : {1.0, -1.0}) {
            try {
              lp_solve(sgn * Vec::Unit(dim_, i), given_h_);
            } catch (const Error& e) {
              if (e.kind() != ErrorKind::Unbounded) throw;
              b = false;
              break;
            }
          }
        }
        break;
      }
    }
    cache_->bounded = b;
  });
  return cache_->bounded;
}

bool ConvexSet::is_cone() const {
  switch (kind_) {
    case SetKind::NonnegOrthant:
    case SetKind::Subspace:
      return true;
    case SetKind::Box:
      for (int i = 0; i < dim_; ++i) {
        const bool lo_ok = lower_(i) == 0.0 || lower_(i) == -kInf;
        const bool hi_ok = upper_(i) == 0.0 || upper_(i) == kInf;
        if (!lo_ok || !hi_ok) return false;
      }
      return true;
    case SetKind::PolyhedronH:
      return (given_h_.b_ub.size() == 0 || given_h_.b_ub.cwiseAbs().maxCoeff() == 0.0) &&
             (given_h_.b_eq.size() == 0 || given_h_.b_eq.cwiseAbs().maxCoeff() == 0.0);
    case SetKind::Ball2:
      return radius_ == 0.0 && lower_.cwiseAbs().maxCoeff() == 0.0;
    default:
      return false;
  }
}

const std::vector<Vec>& ConvexSet::vertices() const {
  if (!is_polyhedral() || !is_bounded()) {
    fail(ErrorKind::InvalidArgument, describe() + " has no finite vertex description");
  }
  std::call_once(cache_->v_once, [this] {
    std::vector<Vec> V;
    switch (kind_) {
      case SetKind::StandardSimplex:
        for (int i = 0; i < dim_; ++i) V.push_back(Vec::Unit(dim_, i));
        break;
      case SetKind::Box: {
        int free_count = 0;
        for (int i = 0; i < dim_; ++i) free_count += lower_(i) < upper_(i) ? 1 : 0;
        if (free_count > 12) fail(ErrorKind::TooLarge, "box has too many vertices");
        for (long mask = 0; mask < (1L << free_count); ++mask) {
          Vec v = lower_;
          int bit = 0;
          for (int i = 0; i < dim_; ++i) {
            if (lower_(i) < upper_(i)) {
              if (mask & (1L << bit)) v(i) = upper_(i);
              ++bit;
            }
          }
          V.push_back(v);
        }
        break;
      }
      case SetKind::PolytopeV:
        V = given_vertices_;
        break;
      case SetKind::Subspace:
        V.push_back(Vec::Zero(dim_));
        break;
      case SetKind::PolyhedronH:
        V = enumerate_vertices(given_h_);
        std::sort(V.begin(), V.end(), lex_less);
        break;
      default:
        break;
    }
    cache_->vertices = V;
  });
  return cache_->vertices;
}

bool ConvexSet::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) fail(ErrorKind::DimensionMismatch, "point dimension differs from set dimension");
  if (!x.allFinite()) return false;
  switch (kind_) {
    case SetKind::StandardSimplex:
      return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
    case SetKind::NonnegOrthant:
      return x.minCoeff() >= -tol;
    case SetKind::Box:
      for (int i = 0; i < dim_; ++i) {
        if (x(i) < lower_(i) - tol || x(i) > upper_(i) + tol) return false;
      }
      return true;
    case SetKind::Subspace:
      return (x - basis_ * (basis_.transpose() * x)).norm() <= tol;
    case SetKind::Ball2:
      return (x - lower_).norm() <= radius_ + tol;
    case SetKind::PolytopeV:
      return min_norm_qp(x, given_vertices_).dist <= tol;
    case SetKind::PolyhedronH:
      return given_h_.contains(x, tol);
  }
  return false;
}

bool membership(const ConvexSet& X, const Vec& x, double tol) { return X.contains(x, tol); }

Vec project_simplex(const Vec& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> u(x.data(), x.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  for (int j = 0; j < n; ++j) {
    css += u[j];
    const double t = (css - 1.0) / (j + 1);
    if (u[j] - t > 0) theta = t;
  }
  return (x.array() - theta).max(0.0).matrix();
}

Vec ConvexSet::project(const Vec& x) const {
  if (x.size() != dim_) fail(ErrorKind::DimensionMismatch, "projection dimension");
  switch (kind_) {
    case SetKind::StandardSimplex:
      return project_simplex(x);
    case SetKind::NonnegOrthant:
    case SetKind::Box:
      return x.cwiseMax(lower_).cwiseMin(upper_);
    case SetKind::Subspace:
      return basis_ * (basis_.transpose() * x);
    case SetKind::Ball2: {
      const Vec d = x - lower_;
      const double r = d.norm();
      return r <= radius_ ? x : Vec(lower_ + d * (radius_ / r));
    }
    case SetKind::PolytopeV:
      return min_norm_qp(x, given_vertices_).witness;
    case SetKind::PolyhedronH:
      return project_polyhedron(x, given_h_);
  }
  return x;
}

int ConvexSet::linear_oracle(const Vec& g) const {
  const auto& V = vertices();
  int best = 0;
  double val = g.dot(V[0]);
  for (size_t i = 1; i < V.size(); ++i) {
    const double v = g.dot(V[i]);
    if (v < val) {
      val = v;
      best = static_cast<int>(i);
    }
  }
  return best;
}

Mat ConvexSet::direction_basis() const {
  std::call_once(cache_->d_once, [this] {
    Mat D;
    switch (kind_) {
      case SetKind::StandardSimplex:
        D = null_basis(Mat::Ones(1, dim_));
        break;
      case SetKind::NonnegOrthant:
        D = Mat::Identity(dim_, dim_);
        break;
      case SetKind::Ball2:
        D = radius_ > 0 ? Mat(Mat::Identity(dim_, dim_)) : Mat(dim_, 0);
        break;
      case SetKind::Box: {
        std::vector<Vec> cols;
        for (int i = 0; i < dim_; ++i) {
          if (lower_(i) < upper_(i)) cols.push_back(Vec::Unit(dim_, i));
        }
        D = cols.empty() ? Mat(dim_, 0) : matrix_of(cols, dim_);
        break;
      }
      case SetKind::Subspace:
        D = basis_;
        break;
      case SetKind::PolytopeV: {
        Mat M(dim_, given_vertices_.size());
        for (size_t i = 0; i < given_vertices_.size(); ++i) M.col(i) = given_vertices_[i] - given_vertices_[0];
        D = range_basis(M);
        break;
      }
      case SetKind::PolyhedronH: {
        // Inequalities that hold with equality on the whole set join the equalities.
        Mat E = given_h_.A_eq;
        for (int i = 0; i < given_h_.A_ub.rows(); ++i) {
          bool implicit = false;
          try {
            const LpResult r = lp_solve(Vec(given_h_.A_ub.row(i).transpose()), given_h_);
            implicit = given_h_.b_ub(i) - r.optimum <= 1e-9 * (1.0 + std::abs(given_h_.b_ub(i)));
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::Unbounded) throw;
          }
          if (implicit) E = vstack(E, Mat(given_h_.A_ub.row(i)));
        }
        D = null_basis(E.rows() ? E : Mat(0, dim_));
        break;
      }
    }
    cache_->directions = D;
  });
  return cache_->directions;
}

Vec ConvexSet::interior_point() const {
  switch (kind_) {
    case SetKind::StandardSimplex:
      return Vec::Constant(dim_, 1.0 / dim_);
    case SetKind::NonnegOrthant:
      return Vec::Ones(dim_);
    case SetKind::Box: {
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) {
        const bool lf = std::isfinite(lower_(i)), uf = std::isfinite(upper_(i));
        x(i) = lf && uf ? 0.5 * (lower_(i) + upper_(i)) : lf ? lower_(i) + 1.0 : uf ? upper_(i) - 1.0 : 0.0;
      }
      return x;
    }
    case SetKind::Subspace:
      return Vec::Zero(dim_);
    case SetKind::Ball2:
      return lower_;
    case SetKind::PolytopeV: {
      Vec x = Vec::Zero(dim_);
      for (const Vec& v : given_vertices_) x += v;
      return x / static_cast<double>(given_vertices_.size());
    }
    case SetKind::PolyhedronH: {
      if (is_bounded()) {
        const auto& V = vertices();
        Vec x = Vec::Zero(dim_);
        for (const Vec& v : V) x += v;
        return x / static_cast<double>(V.size());
      }
      // Maximize a uniform slack, capped at one.
      const int m = static_cast<int>(given_h_.A_ub.rows());
      Polyhedron Q(dim_ + 1);
      for (int i = 0; i < m; ++i) {
        Vec a(dim_ + 1);
        a << given_h_.A_ub.row(i).transpose(), 1.0;
        Q.add_ineq(a, given_h_.b_ub(i));
      }
      for (int i = 0; i < given_h_.A_eq.rows(); ++i) {
        Vec a = Vec::Zero(dim_ + 1);
        a.head(dim_) = given_h_.A_eq.row(i).transpose();
        Q.add_eq(a, given_h_.b_eq(i));
      }
      Q.add_ineq(Vec::Unit(dim_ + 1, dim_), 1.0);
      return lp_solve(-Vec::Unit(dim_ + 1, dim_), Q).argmin.head(dim_);
    }
  }
  return Vec::Zero(dim_);
}

namespace {

Vec dirichlet(std::mt19937_64& rng, int k) {
  std::exponential_distribution<double> ex(1.0);
  Vec w(k);
  for (int i = 0; i < k; ++i) w(i) = ex(rng);
  return w / w.sum();
}

Vec hull_sample(std::mt19937_64& rng, const std::vector<Vec>& V, int max_support) {
  const int N = static_cast<int>(V.size());
  std::uniform_int_distribution<int> size_dist(1, std::max(1, std::min(N, max_support)));
  const int s = size_dist(rng);
  std::vector<int> idx(N);
  for (int i = 0; i < N; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  const Vec w = dirichlet(rng, s);
  Vec x = Vec::Zero(V[0].size());
  for (int i = 0; i < s; ++i) x += w(i) * V[idx[i]];
  return x;
}

}  // namespace

Vec ConvexSet::sample(std::mt19937_64& rng, double radius) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  switch (kind_) {
    case SetKind::StandardSimplex: {
      std::vector<Vec> E;
      for (int i = 0; i < dim_; ++i) E.push_back(Vec::Unit(dim_, i));
      if (unif(rng) < 0.5) return dirichlet(rng, dim_);
      return hull_sample(rng, E, dim_);
    }
    case SetKind::NonnegOrthant:
    case SetKind::Box: {
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) {
        const double lo = std::isfinite(lower_(i)) ? lower_(i) : (std::isfinite(upper_(i)) ? upper_(i) - radius : -radius);
        const double hi = std::isfinite(upper_(i)) ? upper_(i) : lo + radius;
        const double u = unif(rng);
        if (u < 0.15 && std::isfinite(lower_(i))) {
          x(i) = lower_(i);
        } else if (u < 0.3 && std::isfinite(upper_(i))) {
          x(i) = upper_(i);
        } else {
          x(i) = lo + (hi - lo) * unif(rng);
        }
      }
      return x;
    }
    case SetKind::Subspace: {
      Vec z(basis_.cols());
      for (int i = 0; i < z.size(); ++i) z(i) = gauss(rng);
      return basis_ * z * (radius / std::sqrt(std::max<double>(1.0, z.size())));
    }
    case SetKind::Ball2: {
      Vec d(dim_);
      for (int i = 0; i < dim_; ++i) d(i) = gauss(rng);
      const double r = radius_ * std::pow(unif(rng), 1.0 / dim_);
      return lower_ + d.normalized() * r;
    }
    case SetKind::PolytopeV:
      return hull_sample(rng, given_vertices_, dim_ + 1);
    case SetKind::PolyhedronH: {
      if (is_bounded()) return hull_sample(rng, vertices(), dim_ + 1);
      Vec d(dim_);
      for (int i = 0; i < dim_; ++i) d(i) = gauss(rng);
      return project(interior_point() + d * (radius * unif(rng)));
    }
  }
  return Vec::Zero(dim_);
}

}  // namespace relcond
