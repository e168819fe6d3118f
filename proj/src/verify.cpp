#include <algorithm>
#include <cmath>
#include <limits>

#include "relcond/solvers.hpp"

namespace relcond {

namespace {

bool certified_upper(const Constant& c) {
  return (c.method == "exact" || c.method == "theorem-upper-bound") && std::isfinite(c.value) && c.value > 0.0;
}

bool certified_lower(const Constant& c) {
  return (c.method == "exact" || c.method == "theorem-lower-bound") && std::isfinite(c.value) && c.value >= 0.0;
}

// Largest usable strong-convexity constant; sampled values are used only when nothing is certified.
double pick_mu(const std::vector<std::pair<const Constant*, double>>& terms, bool& certified) {
  double best = 0.0;
  certified = false;
  for (const auto& [c, factor] : terms) {
    if (certified_lower(*c)) {
      best = certified ? std::max(best, factor * c->value) : factor * c->value;
      certified = true;
    }
  }
  if (certified) return best;
  for (const auto& [c, factor] : terms) {
    if (std::isfinite(c->value) && c->value > 0.0) best = std::max(best, factor * c->value);
  }
  return best;
}

// exp of the least-squares slope of log(e_k) against k over entries above the floor.
double fitted_rate(const std::vector<double>& e, double floor) {
  double n = 0, sk = 0, sy = 0, skk = 0, sky = 0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (!(e[k] > floor)) continue;
    const double y = std::log(e[k]);
    n += 1;
    sk += k;
    sy += y;
    skk += double(k) * k;
    sky += k * y;
  }
  if (n < 2) return 0.0;
  const double den = n * skk - sk * sk;
  if (den <= 0.0) return 0.0;
  return std::exp((n * sky - sk * sy) / den);
}

Vec projection(const Solution& sol, const ReferenceFn& h, const Vec& x) {
  return project_to_optimum(sol, x, DistanceFn::bregman_of(h)).point;
}

void record(StepCheck& c, int k, double excess, double tol) {
  ++c.checked;
  c.worst = std::max(c.worst, excess);
  if (excess > tol && c.ok) {
    c.ok = false;
    c.first_violation = k;
  }
}

}  // namespace

const char* to_string(Envelope p) {
  switch (p) {
    case Envelope::MirrorLinear: return "mirror-linear";
    case Envelope::MirrorHalving: return "mirror-halving";
    case Envelope::FrankWolfe: return "frank-wolfe";
    case Envelope::AwayStep: return "away-step";
  }
  return "mirror-linear";
}

Envelope parse_envelope(const std::string& name) {
  for (Envelope p : {Envelope::MirrorLinear, Envelope::MirrorHalving, Envelope::FrankWolfe,
                        Envelope::AwayStep}) {
    if (name == to_string(p)) return p;
  }
  fail(ErrorKind::InvalidArgument, "unknown rate check '" + name + "'");
}

Verification verify_rates(const SolverTrace& trace, const ConditioningReport& report, double f_star,
                          Envelope which) {
  Verification v;
  if (trace.rows.empty()) return v;
  v.L = report.L.value;
  bool mu_certified = false;
  switch (which) {
    case Envelope::MirrorLinear:
      v.mu = pick_mu({{&report.mu, 1.0}, {&report.mu_star, 1.0}}, mu_certified);
      break;
    case Envelope::MirrorHalving:
      v.mu = pick_mu({{&report.mu, 1.0}, {&report.mu_star, 1.0}, {&report.mu_sharp, 1.0}}, mu_certified);
      break;
    case Envelope::FrankWolfe:
    case Envelope::AwayStep:
      v.mu = pick_mu({{&report.mu, 1.0}, {&report.mu_star, 1.0}, {&report.mu_sharp, 0.25}}, mu_certified);
      break;
  }
  if (!certified_upper(report.L) || !mu_certified) {
    v.advisory = true;
    v.notes.push_back("constants are not certified; the envelope is reported without being asserted");
  }
  if (!(v.L > 0.0) || !std::isfinite(v.L)) {
    v.advisory = true;
    v.notes.push_back("L is unavailable");
    return v;
  }

  const auto& rows = trace.rows;
  const int n = static_cast<int>(rows.size());
  std::vector<double> err(n);
  const bool uses_dist = which == Envelope::MirrorLinear || which == Envelope::MirrorHalving;
  for (int k = 0; k < n; ++k) err[k] = uses_dist ? rows[k].dist_to_opt : rows[k].f_value - f_star;
  const double f0 = rows[0].f_value - f_star;
  const double scale = std::max({1.0, std::abs(err[0]), std::abs(f0)});
  const double slack = 1e-9 * scale;

  auto violate = [&](int k) {
    ++v.checked;
    if (v.passed) {
      v.passed = false;
      v.first_violation = k;
    }
  };

  switch (which) {
    case Envelope::MirrorLinear: {
      v.theoretical_rate = 1.0 - v.mu / v.L;
      if (std::isnan(err[0])) fail(ErrorKind::InvalidArgument, "the trace carries no distance column");
      for (int k = 0; k < n; ++k) {
        const double env = std::pow(v.theoretical_rate, k) * err[0];
        if (err[k] > env + slack) {
          violate(k);
          continue;
        }
        if (k >= 1 && rows[k].f_value - f_star > v.L * env + slack) {
          violate(k);
          continue;
        }
        ++v.checked;
      }
      break;
    }
    case Envelope::MirrorHalving: {
      if (!(v.mu > 0.0)) {
        v.notes.push_back("mu is zero; the halving window is infinite");
        v.theoretical_rate = 1.0;
        break;
      }
      const int K = static_cast<int>(std::ceil(2.0 * v.L / v.mu));
      v.halving_window = K;
      v.theoretical_rate = std::pow(0.5, 1.0 / K);
      for (int k = 0; k + K < n; ++k) {
        if (err[k + K] > 0.5 * err[k] + slack) {
          violate(k + K);
        } else {
          ++v.checked;
        }
      }
      break;
    }
    case Envelope::FrankWolfe:
    case Envelope::AwayStep: {
      const double rate = which == Envelope::FrankWolfe
                              ? 1.0 - v.mu / v.L
                              : 1.0 - std::min(0.5, v.mu / (4.0 * v.L));
      v.theoretical_rate = which == Envelope::FrankWolfe ? rate : std::sqrt(rate);
      for (int k = 0; k < n; ++k) {
        const double env = std::pow(v.theoretical_rate, k) * f0;
        if (err[k] > env + slack) {
          violate(k);
        } else {
          ++v.checked;
        }
      }
      break;
    }
  }
  v.fitted_rate = fitted_rate(err, 1e-11 * scale);
  if (v.advisory) v.passed = true;
  return v;
}

json to_json(const Verification& v) {
  json j;
  j["passed"] = v.passed;
  j["advisory"] = v.advisory;
  j["first_violation"] = v.first_violation;
  j["checked"] = v.checked;
  j["L"] = v.L;
  j["mu"] = v.mu;
  j["theoretical_rate"] = v.theoretical_rate;
  j["fitted_rate"] = v.fitted_rate;
  j["rate_ok"] = v.fitted_rate <= v.theoretical_rate + 1e-12;
  if (v.halving_window > 0) j["halving_window"] = v.halving_window;
  j["notes"] = v.notes;
  return j;
}

StepCheck check_descent_step(const SolverTrace& trace, const Objective& f, const Solution& sol, const ReferenceFn& h,
                       double L, double mu, double tol) {
  StepCheck c;
  const auto& it = trace.iterates;
  for (std::size_t k = 0; k + 1 < it.size(); ++k) {
    const Vec bar = projection(sol, h, it[k]);
    const double lhs = f.value(it[k + 1]) - sol.f_star;
    const double rhs = (L - mu) * bregman(h, bar, it[k]) - L * bregman(h, bar, it[k + 1]);
    record(c, static_cast<int>(k), lhs - rhs, tol);
  }
  return c;
}

StepCheck check_three_point(const SolverTrace& trace, const Solution& sol, const ReferenceFn& h, double tol) {
  StepCheck c;
  const auto& it = trace.iterates;
  for (std::size_t k = 0; k + 1 < it.size(); ++k) {
    const Vec& x = it[k];
    const Vec& xp = it[k + 1];
    const Vec bar = projection(sol, h, x);
    const double lhs = bregman(h, xp, x);
    const double rhs = bregman(h, bar, x) - bregman(h, bar, xp) + (h.gradient(xp) - h.gradient(x)).dot(xp - bar);
    record(c, static_cast<int>(k), std::abs(lhs - rhs), tol);
  }
  return c;
}

StepCheck check_fw_decrease(const SolverTrace& trace, double L, double tol) {
  StepCheck c;
  const auto& rows = trace.rows;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    if (!(rows[k].alpha < 1.0)) continue;
    const double bound = rows[k].f_value - rows[k].gap * rows[k].gap / (2.0 * L);
    record(c, static_cast<int>(k), rows[k + 1].f_value - bound, tol);
  }
  return c;
}

StepCheck check_drop_counts(const SolverTrace& trace) {
  StepCheck c;
  int drops = 0;
  int regular = 0;
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    const TraceRow& r = trace.rows[k];
    if (r.step == StepKind::Drop) ++drops;
    if (r.step == StepKind::Regular && r.alpha < 1.0) ++regular;
    record(c, static_cast<int>(k), drops - regular, 0.0);
  }
  return c;
}

}  // namespace relcond
