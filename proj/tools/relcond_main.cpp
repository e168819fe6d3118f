#include <iostream>

#include <CLI11.hpp>

#include "relcond/commands.hpp"

int main(int argc, char** argv) {
  relcond::CommandOptions opts;
  double delta = 0.0;

  CLI::App app{"Relative smoothness and strong convexity constants, first-order solvers and rate checks"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--problem", opts.problem, "problem JSON file");
    sub->add_option("--builtin", opts.builtin, "builtin problem name");
    sub->add_option("--seed", opts.seed, "sampling seed");
    sub->add_option("--samples", opts.samples, "number of samples")->check(CLI::PositiveNumber);
    sub->add_option("--iters", opts.iters, "solver iterations")->check(CLI::NonNegativeNumber);
    sub->add_option("--delta", delta, "growth truncation level")->check(CLI::PositiveNumber);
    sub->add_option("--out", opts.out_dir, "output directory");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "write a conditioning report");
  CLI::App* solve = app.add_subcommand("solve", "run a solver and record its trace");
  CLI::App* verify = app.add_subcommand("verify", "check a trace against a rate envelope");
  CLI::App* reproduce = app.add_subcommand("reproduce", "run a builtin end to end against stored values");
  for (CLI::App* sub : {analyze, solve, verify, reproduce}) common(sub);
  solve->add_option("--algorithm", opts.algorithm, "mirror, fw or fwa");
  verify->add_option("--trace", opts.trace, "trace CSV");
  verify->add_option("--report", opts.report, "report JSON");
  verify->add_option("--check", opts.check, "mirror-linear, mirror-halving, frank-wolfe or away-step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : relcond::kExitParse;
  }

  for (CLI::App* sub : {analyze, solve, verify, reproduce}) {
    if (sub->count("--delta")) opts.delta = delta;
  }
  if (*analyze) return relcond::cmd_analyze(opts, std::cout);
  if (*solve) return relcond::cmd_solve(opts, std::cout);
  if (*verify) return relcond::cmd_verify(opts, std::cout);
  return relcond::cmd_reproduce(opts, std::cout);
}
