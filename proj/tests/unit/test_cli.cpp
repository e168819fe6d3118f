#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "relcond/commands.hpp"
#include "relcond/io.hpp"

using namespace relcond;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("relcond_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CommandOptions builtin_options(const std::string& name, const fs::path& dir) {
  CommandOptions o;
  o.builtin = name;
  o.out_dir = dir.string();
  o.samples = 300;
  return o;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("trace csv round trip") {
    SolverTrace tr;
    tr.rows.push_back({0, 1.5, 0.25, 0.125, StepKind::Regular, 1.0 / 3.0, 1});
    tr.rows.push_back({1, 0.1, std::nan(""), 1e-300, StepKind::Drop, 0.0, 2});
    std::stringstream s;
    write_trace_csv(s, tr);
    const std::string text = s.str();
    CHECK(text.rfind("k,f_value,gap,dist_to_opt,step_kind,alpha,support_size\n", 0) == 0);
    const SolverTrace back = read_trace_csv(s);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0].alpha == tr.rows[0].alpha);
    CHECK(back.rows[1].step == StepKind::Drop);
    CHECK(std::isnan(back.rows[1].gap));
    CHECK(back.rows[1].dist_to_opt == 1e-300);
    CHECK(back.rows[1].support == 2);
  }

  TEST_CASE("problem json round trip") {
    for (const std::string& name : builtin_names()) {
      const Problem p = make_builtin(name).problem;
      const json j = problem_to_json(p);
      CHECK(problem_to_json(problem_from_json(j)) == j);
    }
  }

  TEST_CASE("malformed problems are parse errors") {
    const fs::path dir = scratch("parse");
    std::ofstream(dir / "bad.json") << "{\"objective\": {\"type\": \"cubic\"}}";
    CommandOptions o;
    o.problem = (dir / "bad.json").string();
    o.out_dir = dir.string();
    std::ostringstream log;
    CHECK(cmd_analyze(o, log) == kExitParse);
    std::ofstream(dir / "broken.json") << "{not json";
    o.problem = (dir / "broken.json").string();
    CHECK(cmd_analyze(o, log) == kExitParse);
    o.problem.clear();
    o.builtin = "no-such-builtin";
    CHECK(cmd_analyze(o, log) == kExitParse);
  }

  TEST_CASE("violated hypotheses exit with the precondition code") {
    const fs::path dir = scratch("precondition");
    const json problem = {{"objective", {{"type", "quadratic"}, {"A", {{1.0, 0.0}, {0.0, 1.0}}}, {"b", {1.0, 1.0}}}},
                          {"set", {{"type", "orthant"}, {"n", 2}}},
                          {"distance", {{"type", "squared-norm"}, {"norm", "l2"}}}};
    write_json_file((dir / "p.json").string(), problem);
    CommandOptions o;
    o.problem = (dir / "p.json").string();
    o.out_dir = dir.string();
    o.algorithm = "fw";
    std::ostringstream log;
    CHECK(cmd_solve(o, log) == kExitPrecondition);
    CHECK(log.str().find("polytope") != std::string::npos);
  }

  TEST_CASE("analyze writes identical reports for identical seeds") {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    std::ostringstream log;
    REQUIRE(cmd_analyze(builtin_options("ex5-counter", a), log) == kExitOk);
    REQUIRE(cmd_analyze(builtin_options("ex5-counter", b), log) == kExitOk);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    const json r = read_json_file((a / "report.json").string());
    for (const char* key : {"L", "mu", "mu_star", "mu_sharp"}) CHECK(r.at(key).contains("method"));
  }

  TEST_CASE("solve output is deterministic and verifies") {
    const fs::path a = scratch("solve_a");
    const fs::path b = scratch("solve_b");
    std::ostringstream log;
    CommandOptions oa = builtin_options("ex4-simplex", a);
    CommandOptions ob = builtin_options("ex4-simplex", b);
    oa.iters = ob.iters = 200;
    REQUIRE(cmd_solve(oa, log) == kExitOk);
    REQUIRE(cmd_solve(ob, log) == kExitOk);
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    CHECK(slurp(a / "trace.csv.json") == slurp(b / "trace.csv.json"));
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(cmd_verify(oa, log) == kExitOk);
    const json v = read_json_file((a / "verification.json").string());
    CHECK(v.at("passed").get<bool>());
    CHECK(v.at("check") == "mirror-linear");
  }

  TEST_CASE("verification with sampled constants is advisory") {
    const fs::path dir = scratch("advisory");
    std::ostringstream log;
    CommandOptions o = builtin_options("fw-interior", dir);
    o.iters = 100;
    REQUIRE(cmd_solve(o, log) == kExitOk);
    json rep = read_json_file((dir / "report.json").string());
    for (const char* key : {"L", "mu", "mu_star", "mu_sharp"}) rep[key]["method"] = "sampled";
    rep["mu_star"]["value"] = 100.0;
    write_json_file((dir / "report.json").string(), rep);
    CHECK(cmd_verify(o, log) == kExitOk);
    const json v = read_json_file((dir / "verification.json").string());
    CHECK(v.at("advisory").get<bool>());
  }

  TEST_CASE("inflated constants fail verification with exit code four") {
    const fs::path dir = scratch("inflated");
    std::ostringstream log;
    CommandOptions o = builtin_options("fw-interior", dir);
    o.iters = 100;
    REQUIRE(cmd_solve(o, log) == kExitOk);
    json rep = read_json_file((dir / "report.json").string());
    rep["mu_star"]["value"] = 10.0 * rep["mu_star"]["value"].get<double>();
    write_json_file((dir / "report.json").string(), rep);
    CHECK(cmd_verify(o, log) == kExitEnvelope);
    CHECK(read_json_file((dir / "verification.json").string()).at("first_violation").get<int>() >= 0);
  }

  TEST_CASE("reproduce passes for a worked example") {
    const fs::path dir = scratch("reproduce");
    std::ostringstream log;
    CHECK(cmd_reproduce(builtin_options("ex1c", dir), log) == kExitOk);
    const json r = read_json_file((dir / "reproduce.json").string());
    for (const json& c : r.at("checks")) CHECK(c.at("ok").get<bool>());
  }

  TEST_CASE("expectation modes") {
    const Expectation near{"k", 1.0, 0.1, 0.0, Expectation::Mode::Near, "derived"};
    CHECK(near.holds(1.05));
    CHECK_FALSE(near.holds(1.2));
    CHECK_FALSE(near.holds(std::nan("")));
    const Expectation rel{"k", 2.0, 0.0, 0.05, Expectation::Mode::Near, "derived"};
    CHECK(rel.holds(2.09));
    CHECK_FALSE(rel.holds(2.11));
    const Expectation most{"k", 1.0, 0.0, 0.0, Expectation::Mode::AtMost, "derived"};
    CHECK(most.holds(1.0));
    CHECK_FALSE(most.holds(1.0 + 1e-12));
    const Expectation least{"k", 1.0, 0.0, 0.0, Expectation::Mode::AtLeast, "derived"};
    CHECK(least.holds(3.0));
  }

  TEST_CASE("every builtin is constructible") {
    CHECK(builtin_names().size() == 10);
    for (const std::string& name : builtin_names()) {
      const Builtin b = make_builtin(name);
      CHECK(b.name == name);
      CHECK_FALSE(b.expectations.empty());
    }
  }
}
