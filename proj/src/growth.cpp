#include <cmath>
#include <random>

#include "relcond/conditioning.hpp"

namespace relcond {

namespace {

void check_v_constant(const Objective& fu, const Solution& sol, const Vec& v) {
  if (sol.singleton) return;
  const ConvexSet S = ConvexSet::polyhedron(sol.slice);
  std::vector<Vec> pts;
  if (S.is_bounded()) {
    pts = S.vertices();
  } else {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 16; ++i) pts.push_back(S.sample(rng, 5.0));
  }
  const double scale = 1.0 + v.cwiseAbs().maxCoeff();
  for (const Vec& p : pts) {
    if ((2.0 * fu.gradient(p) - v).cwiseAbs().maxCoeff() > 1e-7 * scale) {
      fail(ErrorKind::VNotConstant, "2 grad f differs across the optimal set");
    }
  }
}

}  // namespace

GrowthResult mu_sharp_growth(const Objective& f, const ConvexSet& X, const Solution& sol,
                             std::optional<double> delta, NormKind norm_in, NormKind norm_out) {
  if (!f.is_composite()) fail(ErrorKind::UnsupportedStructure, "growth bound needs a composite objective");
  if (!X.is_polyhedral()) fail(ErrorKind::NotPolyhedral, X.describe() + " is not polyhedral");
  const double weight = f.weight();
  const Objective fu = f.unit();
  const Mat& A = fu.A();
  const double mu_g = fu.g().mu_g;
  const Vec& y = sol.x_hat;

  GrowthResult out;
  out.v = 2.0 * fu.gradient(y);
  check_v_constant(fu, sol, out.v);
  const Vec& v = out.v;
  const double vy = v.dot(y);
  const Polyhedron& H = X.h_rep();

  double spread = std::numeric_limits<double>::infinity();
  try {
    spread = -lp_solve(-v, H).optimum - vy;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unbounded) throw;
  }
  const double tol = 1e-9 * (1.0 + std::abs(vy) + v.cwiseAbs().maxCoeff());

  if (spread <= tol) {
    out.case_id = 1;
    out.X_eff = X;
    const HoffmanResult h = hoffman_min_restricted_slice(A, X, A * y, norm_in, norm_out);
    out.bound = weight * mu_g * h.value * h.value;
    out.method = h.method;
    return out;
  }

  out.case_id = 2;
  if (norm_out != NormKind::L2) fail(ErrorKind::UnsupportedStructure, "the second growth case needs L2 output");
  double d_unit = 0.0;
  if (delta) {
    if (!(*delta > 0.0)) fail(ErrorKind::InvalidArgument, "delta must be positive");
    d_unit = *delta / weight;
  } else if (std::isfinite(spread)) {
    d_unit = spread;
  } else {
    fail(ErrorKind::PreconditionViolated, "unbounded <v, x - y> over X needs an explicit delta");
  }
  out.delta = d_unit * weight;
  out.covers_X = spread <= d_unit * (1.0 + 1e-12) + tol;
  Polyhedron P = H;
  P.add_ineq(v, vy + d_unit);
  out.X_eff = ConvexSet::polyhedron(P);

  Mat M(A.rows() + 1, A.cols());
  M.topRows(A.rows()) = std::sqrt(mu_g) * A;
  M.row(A.rows()) = v.transpose() / std::sqrt(d_unit);
  const HoffmanResult h = hoffman_min_restricted_slice(M, out.X_eff, M * y, norm_in, NormKind::L2);
  out.bound = weight * h.value * h.value;
  out.method = h.method;
  return out;
}

}  // namespace relcond
