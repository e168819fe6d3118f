#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>

#include "relcond/commands.hpp"
#include "relcond/io.hpp"

namespace relcond {

namespace {

namespace fs = std::filesystem;

bool is_precondition(ErrorKind k) {
  switch (k) {
    case ErrorKind::PreconditionViolated:
    case ErrorKind::NotSubspaceImage:
    case ErrorKind::NoSubspaceCone:
    case ErrorKind::DegenerateImage:
    case ErrorKind::SingletonSet:
    case ErrorKind::NotPolyhedral:
    case ErrorKind::NotInSet:
    case ErrorKind::VNotConstant:
    case ErrorKind::UnsupportedStructure:
    case ErrorKind::ProxUnavailable:
    case ErrorKind::AllColumnsEqual:
    case ErrorKind::ZeroMatrix:
      return true;
    default:
      return false;
  }
}

std::string hypothesis(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotSubspaceImage: return "A(X) must be a linear subspace";
    case ErrorKind::NoSubspaceCone: return "some tangent cone must have a subspace image";
    case ErrorKind::DegenerateImage:
    case ErrorKind::ZeroMatrix: return "A must not vanish on X";
    case ErrorKind::SingletonSet: return "X must contain more than one point";
    case ErrorKind::NotPolyhedral: return "X must be polyhedral";
    case ErrorKind::VNotConstant: return "2 grad f must be constant on the optimal set";
    case ErrorKind::UnsupportedStructure: return "the objective must have the composite structure g(Ax) + <c, x>";
    case ErrorKind::ProxUnavailable: return "the proximal map must be computable on X";
    case ErrorKind::AllColumnsEqual: return "the columns must not all coincide";
    case ErrorKind::NotInSet: return "the starting point must lie in X";
    default: return "theorem hypothesis";
  }
}

template <class F>
int run_guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) {
      log << "error: " << e.what() << '\n';
      return kExitParse;
    }
    if (is_precondition(e.kind())) {
      log << "precondition violated (" << hypothesis(e.kind()) << "): " << e.what() << '\n';
      return kExitPrecondition;
    }
    log << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitOther;
  } catch (const json::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

AnalyzeOptions analyze_options(const CommandOptions& opts) {
  AnalyzeOptions a;
  a.sampling.seed = opts.seed;
  a.sampling.samples = opts.samples;
  a.inv.seed = opts.seed;
  a.delta = opts.delta;
  return a;
}

std::string out_path(const CommandOptions& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  return (fs::path(opts.out_dir) / name).string();
}

json solution_json(const Solution& sol) {
  return {{"f_star", sol.f_star}, {"x_hat", json_from_vec(sol.x_hat)}, {"method", sol.method},
          {"gap", sol.gap},       {"singleton", sol.singleton}};
}

Constant make_constant(double value, const std::string& method) {
  Constant c;
  c.value = value;
  c.method = method;
  return c;
}

Constant missing() {
  Constant c = make_constant(std::numeric_limits<double>::quiet_NaN(), "unavailable");
  return c;
}

struct SolveRun {
  SolverTrace trace;
  ConditioningReport report;
  Solution sol;
  std::string check;
  ReferenceFn h;
};

SolveRun run_solver(const Problem& p, const std::string& algorithm, const CommandOptions& opts) {
  SolveRun run;
  const Objective& f = p.objective;
  const ConvexSet& X = p.set;
  run.sol = solve_reference(f, X);
  const AnalyzeOptions aopts = analyze_options(opts);
  if (algorithm == "mirror") {
    const bool entropy = p.distance.kind == DistanceKind::Bregman && p.distance.h.kind == ReferenceKind::NegativeEntropy;
    run.h = entropy ? ReferenceFn::negative_entropy() : ReferenceFn::squared_euclidean();
    Problem q = p;
    q.distance = DistanceFn::bregman_of(run.h);
    q.norm_in = q.norm_out = NormKind::L2;
    run.report = analyze(q, aopts);
    const double L = run.report.L.value;
    if (!(L > 0.0) || !std::isfinite(L)) fail(ErrorKind::PreconditionViolated, "L must be positive and finite");
    const bool vertex_start = !entropy && X.is_polyhedral() && X.is_bounded();
    const Vec x0 = vertex_start ? X.vertices().front() : X.interior_point();
    MirrorOptions mo;
    mo.iters = opts.iters;
    run.trace = mirror_descent(f, X, run.h, L, x0, &run.sol, mo);
    run.check = "mirror-linear";
  } else if (algorithm == "fw" || algorithm == "fwa") {
    SampleOptions so = aopts.sampling;
    const FwConstants fc = fw_constants(f, X, run.sol, so);
    ConditioningReport& r = run.report;
    r.certificates["solution"] = solution_json(run.sol);
    json sampled = {{"L_radial", fc.L_radial},
                    {"L_diametral", fc.L_diametral},
                    {"mu_star_radial", fc.mu_star_radial},
                    {"mu_sharp_radial", fc.mu_sharp_radial},
                    {"mu_star_gradiental", fc.mu_star_grad},
                    {"mu_sharp_gradiental", fc.mu_sharp_grad}};
    for (auto& [k, v] : sampled.items()) {
      if (v.is_number() && std::isnan(v.get<double>())) v = nullptr;
    }
    r.certificates["sampled"] = sampled;
    if (algorithm == "fw") {
      r.L = make_constant(fc.bound_L, "theorem-upper-bound");
      r.L.certificate["rule"] = "L_f diam(X)^2";
      r.mu_star = make_constant(fc.bound_mu_interior, "theorem-lower-bound");
      r.mu_star.certificate["rule"] = "mu_f dist(x*, rbd X)^2";
      r.mu = missing();
      r.mu_sharp = missing();
      r.conventions.push_back("interiority bounds");
      run.trace = frank_wolfe(f, X, r.L.value, X.vertices().front(), opts.iters, &run.sol);
      run.check = "frank-wolfe";
    } else {
      if (f.is_quadratic()) {
        r.L = make_constant(fc.diam_BA_sq, "theorem-upper-bound");
        r.mu = make_constant(fc.phi_BA_sq, "theorem-lower-bound");
        r.L.certificate = {{"rule", "diam(BA)^2"}, {"quarter", fc.diam_BA_sq / 4.0}};
        r.mu.certificate = {{"rule", "Phi(BA)^2"}, {"quarter", fc.phi_BA_sq / 4.0}};
        r.conventions.push_back("both normalizations reported");
      } else {
        r.L = make_constant(fc.L_diametral, "sampled");
        r.mu = make_constant(fc.mu_star_grad, "sampled");
      }
      r.mu_star = missing();
      r.mu_sharp = missing();
      const std::vector<Vec>& V = X.vertices();
      int start = 0;
      for (int i = 1; i < static_cast<int>(V.size()); ++i) {
        if (f.value(V[i]) > f.value(V[start])) start = i;
      }
      run.trace = fw_away(f, X, r.L.value, start, opts.iters, &run.sol);
      run.check = "away-step";
    }
    r.condition_number = r.mu.value > 0.0 ? r.L.value / r.mu.value : std::numeric_limits<double>::infinity();
  } else {
    fail(ErrorKind::InvalidArgument, "unknown algorithm '" + algorithm + "'");
  }
  run.trace.metadata["check"] = run.check;
  run.trace.metadata["seed"] = opts.seed;
  run.trace.metadata["problem"] = p.name;
  run.trace.metadata["f_star"] = run.sol.f_star;
  return run;
}

void print_report(std::ostream& log, const ConditioningReport& r) {
  auto line = [&](const char* name, const Constant& c) {
    log << "  " << std::left << std::setw(9) << name << std::setprecision(10) << c.value << "  [" << c.method
        << "]\n";
  };
  line("L", r.L);
  line("mu", r.mu);
  line("mu_star", r.mu_star);
  line("mu_sharp", r.mu_sharp);
  log << "  kappa    " << r.condition_number << '\n';
}

double flag(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

Problem load_problem(const CommandOptions& opts) {
  if (!opts.problem.empty() && !opts.builtin.empty()) {
    fail(ErrorKind::InvalidArgument, "give either --problem or --builtin, not both");
  }
  if (!opts.builtin.empty()) return make_builtin(opts.builtin).problem;
  if (opts.problem.empty()) fail(ErrorKind::InvalidArgument, "a problem file or builtin name is required");
  return problem_from_json(read_json_file(opts.problem));
}

int cmd_analyze(const CommandOptions& opts, std::ostream& log) {
  return run_guarded(log, [&] {
    const Problem p = load_problem(opts);
    const ConditioningReport r = analyze(p, analyze_options(opts));
    json j = to_json(r);
    j["problem"] = p.name;
    const std::string path = out_path(opts, "report.json");
    write_json_file(path, j);
    log << "analyze " << p.name << '\n';
    print_report(log, r);
    log << "wrote " << path << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_solve(const CommandOptions& opts, std::ostream& log) {
  return run_guarded(log, [&] {
    const Problem p = load_problem(opts);
    std::string algorithm = opts.algorithm;
    if (algorithm.empty() && !opts.builtin.empty()) algorithm = make_builtin(opts.builtin).solver;
    if (algorithm.empty()) algorithm = "mirror";
    const SolveRun run = run_solver(p, algorithm, opts);
    const std::string trace_path = out_path(opts, "trace.csv");
    save_trace(trace_path, run.trace);
    json rep = to_json(run.report);
    rep["problem"] = p.name;
    write_json_file(out_path(opts, "report.json"), rep);
    log << "solve " << p.name << " with " << algorithm << ": " << run.trace.rows.size() - 1 << " iterations, f = "
        << std::setprecision(12) << run.trace.rows.back().f_value << " (f* = " << run.sol.f_star << ")\n";
    log << "wrote " << trace_path << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_verify(const CommandOptions& opts, std::ostream& log) {
  return run_guarded(log, [&] {
    const std::string trace_path = opts.trace.empty() ? (fs::path(opts.out_dir) / "trace.csv").string() : opts.trace;
    const std::string report_path =
        opts.report.empty() ? (fs::path(opts.out_dir) / "report.json").string() : opts.report;
    const SolverTrace trace = load_trace(trace_path);
    const json rj = read_json_file(report_path);
    const ConditioningReport report = report_from_json(rj);
    std::string check = opts.check;
    if (check.empty()) check = trace.metadata.value("check", "");
    if (check.empty()) fail(ErrorKind::InvalidArgument, "no envelope named; pass --check");
    double f_star = 0.0;
    if (report.certificates.contains("solution")) {
      f_star = report.certificates["solution"]["f_star"].get<double>();
    } else if (trace.metadata.contains("f_star")) {
      f_star = trace.metadata["f_star"].get<double>();
    } else {
      fail(ErrorKind::InvalidArgument, "the optimal value is missing from both inputs");
    }
    const Verification v = verify_rates(trace, report, f_star, parse_envelope(check));
    json j = to_json(v);
    j["check"] = check;
    write_json_file(out_path(opts, "verification.json"), j);
    log << "verify " << check << ": " << (v.advisory ? "advisory" : (v.passed ? "pass" : "FAIL"))
        << std::setprecision(6) << " (theoretical rate " << v.theoretical_rate << ", fitted " << v.fitted_rate
        << ")";
    if (!v.passed) log << " first violation at k = " << v.first_violation;
    log << '\n';
    return static_cast<int>(v.passed ? kExitOk : kExitEnvelope);
  });
}

json reproduce_values(const Builtin& b, const CommandOptions& opts) {
  json vals = json::object();
  const Problem& p = b.problem;
  const AnalyzeOptions aopts = analyze_options(opts);
  auto put_report = [&](const ConditioningReport& r) {
    vals["L"] = r.L.value;
    vals["mu"] = r.mu.value;
    vals["mu_star"] = r.mu_star.value;
    vals["mu_sharp"] = r.mu_sharp.value;
  };
  const bool facial = b.name.rfind("fig-facial", 0) == 0;
  if (!facial && b.solver != "fw" && b.solver != "fwa") put_report(analyze(p, aopts));

  if (b.name == "ex1b" || b.name == "ex1c") {
    const SvdExtremes s = svd_extremes(p.objective.A());
    vals["L_f"] = s.sigma_max * s.sigma_max;
    vals["mu_f"] = numerical_rank(p.objective.A()) == p.objective.A().cols() ? s.sigma_min_plus * s.sigma_min_plus : 0.0;
    vals["sigma_min_sq"] = s.sigma_min_plus * s.sigma_min_plus;
  } else if (b.name == "ex2-norms") {
    const Cone C = cone_of_set(p.set);
    vals["op_norm"] = op_norm(p.objective.A(), C, p.norm_in, p.norm_out).value;
    vals["inv_norm"] = inv_norm(p.objective.A(), C, p.norm_in, p.norm_out, aopts.inv).value;
  } else if (b.name == "ex5-counter") {
    const Solution sol = solve_reference(p.objective, p.set);
    vals["mu_star_sampled"] = estimate_mu_family(p.objective, p.set, p.distance, MuKind::MuStar, &sol, aopts.sampling).value;
    vals["mu_sharp_sampled"] = estimate_mu_family(p.objective, p.set, p.distance, MuKind::MuSharp, &sol, aopts.sampling).value;
    const GrowthResult g = mu_sharp_growth(p.objective, p.set, sol, std::nullopt, p.norm_in, p.norm_out);
    vals["growth_case"] = g.case_id;
    vals["growth_bound"] = g.bound;
    // The same objective over the truncated orthant {x >= 0 : <v, x - y> <= delta}.
    const double delta = opts.delta.value_or(1.0);
    const ConvexSet orthant = ConvexSet::orthant(p.set.dim());
    const Solution sol_o = solve_reference(p.objective, orthant);
    const Vec v = 2.0 * p.objective.gradient(sol_o.x_hat);
    Polyhedron P = orthant.h_rep();
    P.add_ineq(v, delta + v.dot(sol_o.x_hat));
    const ConvexSet Xd = ConvexSet::polyhedron(P);
    const Solution sol_d = solve_reference(p.objective, Xd);
    vals["delta"] = delta;
    vals["mu_sharp_X_delta"] = estimate_mu_family(p.objective, Xd, p.distance, MuKind::MuSharp, &sol_d, aopts.sampling).value;
    vals["mu_sharp_X_delta_target"] = 2.0 / (2.0 + delta / 2.0);
  } else if (facial) {
    const std::vector<Vec> cols = columns_of(p.objective.A());
    vals["facial_distance"] = facial_distance(cols, NormKind::L2).value;
    vals["diameter"] = column_diameter(cols, NormKind::L2);
    vals["hoffman"] = hoffman_min(p.objective.A(), p.set, NormKind::L1, NormKind::L2, aopts.inv).value;
  }

  if (!b.solver.empty()) {
    CommandOptions so = opts;
    const SolveRun run = run_solver(p, b.solver, so);
    const Verification v = verify_rates(run.trace, run.report, run.sol.f_star, parse_envelope(run.check));
    vals["verify_passed"] = flag(v.passed && !v.advisory);
    vals["theoretical_rate"] = v.theoretical_rate;
    vals["fitted_rate"] = v.fitted_rate;
    if (b.solver == "mirror") {
      vals["descent_step_ok"] = flag(check_descent_step(run.trace, p.objective, run.sol, run.h, run.report.L.value,
                                            std::max(0.0, run.report.mu_star.value))
                                   .ok);
      vals["three_point_ok"] = flag(check_three_point(run.trace, run.sol, run.h).ok);
    }
    if (b.solver == "fw") {
      put_report(run.report);
      vals["bound_L"] = run.report.L.value;
      vals["bound_mu_interior"] = run.report.mu_star.value;
      vals["fw_decrease_ok"] = flag(check_fw_decrease(run.trace, run.report.L.value).ok);
      bool mono = true;
      for (std::size_t k = 1; k < run.trace.rows.size(); ++k) {
        mono = mono && run.trace.rows[k].f_value <= run.trace.rows[k - 1].f_value + 1e-15;
      }
      vals["optimality_gap_monotone"] = flag(mono);
    }
    if (b.solver == "fwa") {
      put_report(run.report);
      vals["drop_counts_ok"] = flag(check_drop_counts(run.trace).ok);
      bool kinds[3] = {false, false, false};
      for (const TraceRow& r : run.trace.rows) {
        if (r.step == StepKind::Regular) kinds[0] = true;
        if (r.step == StepKind::Away) kinds[1] = true;
        if (r.step == StepKind::Drop) kinds[2] = true;
      }
      vals["has_regular"] = flag(kinds[0]);
      vals["has_away"] = flag(kinds[1]);
      vals["has_drop"] = flag(kinds[2]);
    }
  }
  for (auto& [k, v] : vals.items()) {
    if (v.is_number_float() && !std::isfinite(v.get<double>())) v = nullptr;
  }
  return vals;
}

int cmd_reproduce(const CommandOptions& opts, std::ostream& log) {
  return run_guarded(log, [&] {
    if (opts.builtin.empty()) fail(ErrorKind::InvalidArgument, "reproduce needs --builtin");
    const Builtin b = make_builtin(opts.builtin);
    const json vals = reproduce_values(b, opts);
    json checks = json::array();
    bool ok = true;
    log << "reproduce " << b.name << ": " << b.description << '\n';
    for (const Expectation& e : b.expectations) {
      const double value =
          vals.contains(e.key) && vals[e.key].is_number() ? vals[e.key].get<double>() : std::nan("");
      const bool holds = e.holds(value);
      ok = ok && holds;
      const char* mode = e.mode == Expectation::Mode::Near ? "near" : (e.mode == Expectation::Mode::AtMost ? "at-most" : "at-least");
      checks.push_back({{"key", e.key},
                        {"value", vals.contains(e.key) ? vals[e.key] : json(nullptr)},
                        {"target", e.target},
                        {"abs_tol", e.abs_tol},
                        {"rel_tol", e.rel_tol},
                        {"mode", mode},
                        {"source", e.source},
                        {"ok", holds}});
      log << "  " << (holds ? "ok      " : "MISMATCH") << ' ' << std::left << std::setw(24) << e.key
          << std::setprecision(10) << value << "  (" << mode << ' ' << e.target << ")\n";
    }
    json out = {{"builtin", b.name}, {"values", vals}, {"checks", checks}, {"passed", ok}};
    write_json_file(out_path(opts, "reproduce.json"), out);
    return static_cast<int>(ok ? kExitOk : kExitMismatch);
  });
}

}  // namespace relcond
