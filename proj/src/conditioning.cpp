#include <cmath>
#include <limits>

#include "relcond/conditioning.hpp"

namespace relcond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    fail(ErrorKind::InvalidArgument, "unexpected number text '" + s + "'");
  }
  return j.get<double>();
}

json hoffman_json(const HoffmanResult& h) {
  json j;
  j["hoffman"] = h.value;
  j["method"] = h.method;
  j["cones_total"] = h.cones_total;
  j["cones_used"] = h.cones_used;
  j["argmin_active"] = h.argmin_active;
  if (h.argmin_point.size()) j["argmin_point"] = vec_json(h.argmin_point);
  j["conventions"] = h.conventions;
  return j;
}

Constant sampled_constant(const Estimate& e) {
  Constant c;
  c.value = e.value;
  c.method = "sampled";
  if (e.x.size()) c.certificate["witness_x"] = vec_json(e.x);
  if (e.y.size()) c.certificate["witness_y"] = vec_json(e.y);
  return c;
}

Constant unavailable(const std::string& why) {
  Constant c;
  c.value = std::numeric_limits<double>::quiet_NaN();
  c.method = "unavailable";
  c.certificate["reason"] = why;
  return c;
}

Constant scaled(Constant c, double w) {
  c.value *= w;
  return c;
}

}  // namespace

Cone span_cone(const ConvexSet& X) {
  const Mat B = X.direction_basis();
  if (B.cols() == 0) fail(ErrorKind::SingletonSet, X.describe() + " is a single point");
  Cone C = Cone::full(X.dim());
  if (B.cols() < X.dim()) C.eq = null_basis(Mat(B.transpose())).transpose();
  return C;
}

double exact_L_quadratic(const Mat& A, const ConvexSet& X, NormKind norm_in) {
  const double r = op_norm(A, span_cone(X), norm_in, NormKind::L2).value;
  return r * r;
}

double bound_L_composite(const Mat& A, const StrongFn& g, const ConvexSet& X, NormKind norm_in) {
  const double r = op_norm(A, span_cone(X), norm_in, g.norm).value;
  return g.L_g * r * r;
}

Constant exact_mu_conic(const Mat& A, const ConvexSet& X, NormKind norm_in, NormKind norm_out,
                        const InvNormOptions& opts) {
  if (!X.is_cone()) fail(ErrorKind::PreconditionViolated, X.describe() + " is not a cone");
  const Cone C = cone_of_set(X);
  if (image_basis(A, C).cols() == 0) fail(ErrorKind::PreconditionViolated, "A(X) is a single point");
  if (!image_is_subspace(A, C)) fail(ErrorKind::NotSubspaceImage, "A(X) is not a linear subspace");
  const NormValue inv = inv_norm(A, C, norm_in, norm_out, opts);
  Constant c;
  c.value = 1.0 / (inv.value * inv.value);
  c.method = "exact";
  c.certificate["inv_norm"] = inv.value;
  c.certificate["inv_norm_method"] = inv.method;
  return c;
}

Constant exact_mu_poly(const Mat& A, const ConvexSet& X, NormKind norm_in, NormKind norm_out,
                       const InvNormOptions& opts) {
  const HoffmanResult h = hoffman_min(A, X, norm_in, norm_out, opts);
  Constant c;
  c.value = h.value * h.value;
  c.method = "exact";
  c.certificate = hoffman_json(h);
  return c;
}

Constant bound_mu_composite(const Mat& A, const StrongFn& g, const ConvexSet& X, NormKind norm_in,
                            NormKind norm_out, const Solution* restricted_to) {
  const HoffmanResult h = restricted_to
                              ? hoffman_min_restricted_slice(A, X, A * restricted_to->x_hat, norm_in, norm_out)
                              : hoffman_min(A, X, norm_in, norm_out);
  Constant c;
  c.value = g.mu_g * h.value * h.value;
  c.method = h.method == "exact" ? "theorem-lower-bound" : "sampled";
  c.certificate = hoffman_json(h);
  c.certificate["mu_g"] = g.mu_g;
  c.certificate["restricted"] = restricted_to != nullptr;
  return c;
}

ConditioningReport analyze(const Problem& p, const AnalyzeOptions& opts) {
  const Objective& f = p.objective;
  const double w = f.weight();
  const ConvexSet& X = p.set;
  ConditioningReport r;
  const Solution sol = solve_reference(f, X);
  r.certificates["solution"] = {{"f_star", sol.f_star},   {"x_hat", vec_json(sol.x_hat)},
                                {"method", sol.method},   {"gap", sol.gap},
                                {"singleton", sol.singleton}};

  NormKind dnorm = NormKind::L2;
  const bool squared = p.distance.squared_norm_kind(&dnorm);
  const bool formula = f.is_composite() && squared && dnorm == p.norm_in && X.is_polyhedral() &&
                       p.norm_out == f.g().norm;

  auto sampled_mu = [&](MuKind kind) -> Constant {
    try {
      return sampled_constant(estimate_mu_family(f, X, p.distance, kind, &sol, opts.sampling));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnsupportedStructure) throw;
      return unavailable(e.what());
    }
  };

  if (formula) {
    const Mat& A = f.A();
    const StrongFn& g = f.g();
    if (f.is_quadratic()) {
      r.L.value = w * exact_L_quadratic(A, X, p.norm_in);
      r.L.method = "exact";
    } else {
      r.L.value = w * bound_L_composite(A, g, X, p.norm_in);
      r.L.method = "theorem-upper-bound";
    }
    const bool conic = X.is_cone() && image_is_subspace(A, cone_of_set(X));
    if (f.is_quadratic()) {
      r.mu = scaled(conic ? exact_mu_conic(A, X, p.norm_in, p.norm_out, opts.inv)
                          : exact_mu_poly(A, X, p.norm_in, p.norm_out, opts.inv),
                    w);
    } else {
      r.mu = scaled(bound_mu_composite(A, g, X, p.norm_in, p.norm_out), w);
    }
    if (!f.has_linear_term()) {
      r.mu_star = scaled(bound_mu_composite(A, g, X, p.norm_in, p.norm_out, &sol), w);
      if (f.is_quadratic() && r.mu_star.method == "theorem-lower-bound") r.mu_star.method = "exact";
    } else {
      r.mu_star = sampled_mu(MuKind::MuStar);
    }
    try {
      const GrowthResult gr = mu_sharp_growth(f, X, sol, opts.delta, p.norm_in, p.norm_out);
      json cert = {{"case", gr.case_id}, {"bound", gr.bound}, {"delta", gr.delta}, {"v", vec_json(gr.v)},
                   {"method", gr.method}, {"covers_X", gr.covers_X}};
      if (gr.covers_X) {
        r.mu_sharp.value = gr.bound;
        r.mu_sharp.method = gr.method == "exact" ? "theorem-lower-bound" : "sampled";
        r.mu_sharp.certificate = cert;
      } else {
        r.mu_sharp = sampled_mu(MuKind::MuSharp);
        r.mu_sharp.certificate["growth_on_X_delta"] = cert;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PreconditionViolated && e.kind() != ErrorKind::UnsupportedStructure) throw;
      r.mu_sharp = sampled_mu(MuKind::MuSharp);
      r.mu_sharp.certificate["growth_unavailable"] = e.what();
    }
    if (conic) r.conventions.push_back("conic formula");
  } else {
    r.conventions.push_back("sampled constants");
    r.L = sampled_constant(estimate_L(f, X, p.distance, opts.sampling));
    r.mu = sampled_mu(MuKind::Mu);
    r.mu_star = sampled_mu(MuKind::MuStar);
    r.mu_sharp = sampled_mu(MuKind::MuSharp);
    if (!f.is_composite()) r.conventions.push_back("strictly convex objective: Z(y) = {y}");
  }
  for (const Constant* c : {&r.mu, &r.mu_star}) {
    if (c->certificate.contains("conventions")) {
      for (const auto& s : c->certificate["conventions"]) r.conventions.push_back(s.get<std::string>());
    }
  }
  r.condition_number = r.mu.value == 0.0 ? kInf : r.L.value / r.mu.value;
  return r;
}

json to_json(const Constant& c) {
  return {{"value", number_json(c.value)}, {"method", c.method}, {"certificate", c.certificate}};
}

json to_json(const ConditioningReport& r) {
  json j;
  j["L"] = to_json(r.L);
  j["mu"] = to_json(r.mu);
  j["mu_star"] = to_json(r.mu_star);
  j["mu_sharp"] = to_json(r.mu_sharp);
  j["condition_number"] = number_json(r.condition_number);
  j["certificates"] = r.certificates;
  j["conventions"] = r.conventions;
  return j;
}

ConditioningReport report_from_json(const json& j) {
  auto constant = [&](const char* key) {
    Constant c;
    if (!j.contains(key)) return unavailable("missing");
    const json& e = j.at(key);
    c.value = number_from_json(e.at("value"));
    c.method = e.at("method").get<std::string>();
    if (e.contains("certificate")) c.certificate = e.at("certificate");
    return c;
  };
  ConditioningReport r;
  r.L = constant("L");
  r.mu = constant("mu");
  r.mu_star = constant("mu_star");
  r.mu_sharp = constant("mu_sharp");
  r.condition_number = j.contains("condition_number") ? number_from_json(j.at("condition_number")) : 0.0;
  if (j.contains("certificates")) r.certificates = j.at("certificates");
  if (j.contains("conventions")) r.conventions = j.at("conventions").get<std::vector<std::string>>();
  return r;
}

}  // namespace relcond
