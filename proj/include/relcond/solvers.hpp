#pragma once

#include <string>
#include <vector>

#include "relcond/conditioning.hpp"

namespace relcond {

enum class StepKind { Regular, Away, Drop, Prox };

const char* to_string(StepKind kind);
StepKind parse_step_kind(const std::string& name);

/// State at x_k together with the step chosen there.
struct TraceRow {
  int k = 0;
  double f_value = 0.0;
  /// Frank-Wolfe gap max_u <grad f(x_k), x_k - u> (NaN when X has no vertices).
  double gap = 0.0;
  /// D(x_bar, x_k) for the distance the algorithm is analyzed with (NaN without a solution).
  double dist_to_opt = 0.0;
  StepKind step = StepKind::Regular;
  double alpha = 0.0;
  int support = 1;
};

struct SolverTrace {
  std::vector<TraceRow> rows;
  std::vector<Vec> iterates;
  json metadata = json::object();
};

struct MirrorOptions {
  int iters = 500;
  /// Double L_k from L until the model inequality holds, instead of fixing L_k = L.
  bool backtracking = false;
};

/// Bregman proximal map argmin_{y in X} <g, y> + L D_h(y, x).
Vec bregman_prox(const ConvexSet& X, const ReferenceFn& h, const Vec& g, const Vec& x, double L);

/**
 * Bregman proximal gradient with step 1/L. When sol is given the distance
 * column holds D_h(x_bar, x_k).
 *
 * @throws Error(ProxUnavailable) for reference functions without a closed-form map on X.
 */
SolverTrace mirror_descent(const Objective& f, const ConvexSet& X, const ReferenceFn& h, double L, const Vec& x0,
                           const Solution* sol = nullptr, const MirrorOptions& opts = {});

/// Frank-Wolfe with alpha_k = clip(gap_k / L, 0, 1).
SolverTrace frank_wolfe(const Objective& f, const ConvexSet& X, double L, const Vec& x0, int iters,
                        const Solution* sol = nullptr);

/// Away-step Frank-Wolfe from the vertex with index x0 of X.vertices().
SolverTrace fw_away(const Objective& f, const ConvexSet& X, double L, int x0, int iters,
                    const Solution* sol = nullptr);

enum class Envelope { MirrorLinear, MirrorHalving, FrankWolfe, AwayStep };

const char* to_string(Envelope p);
Envelope parse_envelope(const std::string& name);

struct Verification {
  bool passed = true;
  /// Constants lacked certificates; the check ran but asserts nothing.
  bool advisory = false;
  int first_violation = -1;
  int checked = 0;
  double L = 0.0;
  double mu = 0.0;
  /// Per-iteration contraction factor of the envelope.
  double theoretical_rate = 1.0;
  /// exp of the least-squares slope of log(error) over the trace.
  double fitted_rate = 0.0;
  int halving_window = 0;
  std::vector<std::string> notes;
};

/**
 * Checks the linear-rate envelope of a trace.
 *
 * MirrorLinear: D_k <= (1 - mu/L)^k D_0 and f_k - f* <= L (1 - mu/L)^k D_0.
 * MirrorHalving: D_{k+K} <= D_k / 2 with K = ceil(2L/mu).
 * FrankWolfe: f_k - f* <= (1 - mu/L)^k (f_0 - f*).
 * AwayStep: f_k - f* <= (1 - min(1/2, mu/(4L)))^(k/2) (f_0 - f*).
 */
Verification verify_rates(const SolverTrace& trace, const ConditioningReport& report, double f_star,
                           Envelope which);

json to_json(const Verification& v);

struct StepCheck {
  bool ok = true;
  int first_violation = -1;
  int checked = 0;
  /// Largest violation amount (positive means violated before slack).
  double worst = -std::numeric_limits<double>::infinity();
};

/// f(x+) - f* <= (L - mu) D_h(x_bar, x) - L D_h(x_bar, x+) on consecutive iterates.
StepCheck check_descent_step(const SolverTrace& trace, const Objective& f, const Solution& sol, const ReferenceFn& h,
                       double L, double mu, double tol = 1e-9);

/// D_h(x+, x) = D_h(x_bar, x) - D_h(x_bar, x+) + <grad h(x+) - grad h(x), x+ - x_bar>.
StepCheck check_three_point(const SolverTrace& trace, const Solution& sol, const ReferenceFn& h, double tol = 1e-9);

/// f(x_{k+1}) <= f(x_k) - gap_k^2 / (2L) whenever alpha_k < 1.
StepCheck check_fw_decrease(const SolverTrace& trace, double L, double tol = 1e-9);

/// Every prefix has no more drop steps than regular steps with alpha below one.
StepCheck check_drop_counts(const SolverTrace& trace);

}  // namespace relcond
