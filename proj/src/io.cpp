#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

#include "relcond/io.hpp"

namespace relcond {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::InvalidArgument, what); }

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  bad("expected a number, got " + j.dump());
}

json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<Vec> vec_list(const json& j) {
  if (!j.is_array()) bad("expected a list of vectors");
  std::vector<Vec> out;
  for (const auto& e : j) out.push_back(vec_from_json(e));
  return out;
}

DistanceFn distance_from_json(const json& j, const ConvexSet& X, const Objective& f) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "squared-norm") return DistanceFn::squared_norm(parse_norm(j.value("norm", "l2")));
  if (type == "bregman") {
    const std::string ref = j.value("reference", "squared-euclidean");
    if (ref == "squared-euclidean") return DistanceFn::bregman_of(ReferenceFn::squared_euclidean());
    if (ref == "negative-entropy") return DistanceFn::bregman_of(ReferenceFn::negative_entropy());
    bad("unknown reference function '" + ref + "'");
  }
  if (type == "radial") return DistanceFn::radial_sq(X);
  if (type == "diametral") return DistanceFn::diametral_sq(X);
  if (type == "gradiental") return DistanceFn::gradiental_sq(X, f);
  bad("unknown distance type '" + type + "'");
}

json distance_to_json(const DistanceFn& D) {
  switch (D.kind) {
    case DistanceKind::SquaredNorm: return {{"type", "squared-norm"}, {"norm", to_string(D.norm)}};
    case DistanceKind::Bregman: return {{"type", "bregman"}, {"reference", D.h.describe()}};
    case DistanceKind::Radial: return {{"type", "radial"}};
    case DistanceKind::Diametral: return {{"type", "diametral"}};
    case DistanceKind::Gradiental: return {{"type", "gradiental"}};
  }
  return nullptr;
}

Objective objective_from_json(const json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "quadratic") {
    const Mat A = mat_from_json(field(j, "A"));
    const Vec b = j.contains("b") ? vec_from_json(j.at("b")) : Vec::Zero(A.rows());
    if (b.size() != A.rows()) bad("b must have one entry per row of A");
    const double scale = j.contains("scale") ? number(j.at("scale")) : 1.0;
    if (!(scale > 0.0)) bad("scale must be positive");
    if (j.contains("c")) {
      const Vec c = vec_from_json(j.at("c"));
      if (c.size() != A.cols()) bad("c must have one entry per column of A");
      return Objective::composite(A, StrongFn::squared_distance(b), c).scaled(scale);
    }
    return Objective::quadratic(A, b, scale);
  }
  if (type == "exponential") return Objective::exponential(number(field(j, "a")));
  bad("unknown objective type '" + type + "'");
}

json objective_to_json(const Objective& f) {
  if (f.kind() == ObjectiveKind::Exponential) return {{"type", "exponential"}, {"a", f.rate()}};
  if (!f.is_quadratic()) bad("only quadratic and exponential objectives serialize");
  json j = {{"type", "quadratic"}, {"A", json_from_mat(f.A())}, {"b", json_from_vec(f.g().b)},
            {"scale", f.weight()}};
  if (f.has_linear_term()) j["c"] = json_from_vec(f.c());
  return j;
}

}  // namespace

Vec vec_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array, got " + j.dump());
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = number(j[i]);
  return v;
}

json json_from_vec(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(number_json(v(i)));
  return a;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("expected a nonempty nested array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) bad("ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(r, c) = number(j[r][c]);
  }
  return m;
}

json json_from_mat(const Mat& m) {
  json a = json::array();
  for (int r = 0; r < m.rows(); ++r) a.push_back(json_from_vec(m.row(r).transpose()));
  return a;
}

ConvexSet set_from_json(const json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "simplex") return ConvexSet::simplex(field(j, "n").get<int>());
  if (type == "orthant") return ConvexSet::orthant(field(j, "n").get<int>());
  if (type == "box") return ConvexSet::box(vec_from_json(field(j, "lower")), vec_from_json(field(j, "upper")));
  if (type == "subspace") {
    const std::vector<Vec> cols = vec_list(field(j, "basis"));
    if (cols.empty()) bad("subspace basis is empty");
    return ConvexSet::subspace(matrix_of(cols, static_cast<int>(cols.front().size())));
  }
  if (type == "polytope") return ConvexSet::polytope(vec_list(field(j, "vertices")));
  if (type == "polyhedron") {
    const Mat A = mat_from_json(field(j, "A"));
    const Vec b = vec_from_json(field(j, "b"));
    Polyhedron P(static_cast<int>(A.cols()));
    for (int r = 0; r < A.rows(); ++r) P.add_ineq(A.row(r).transpose(), b(r));
    if (j.contains("A_eq")) {
      const Mat E = mat_from_json(j.at("A_eq"));
      const Vec e = vec_from_json(field(j, "b_eq"));
      for (int r = 0; r < E.rows(); ++r) P.add_eq(E.row(r).transpose(), e(r));
    }
    return ConvexSet::polyhedron(P);
  }
  if (type == "ball") return ConvexSet::ball(vec_from_json(field(j, "center")), number(field(j, "radius")));
  bad("unknown set type '" + type + "'");
}

json set_to_json(const ConvexSet& X) {
  switch (X.kind()) {
    case SetKind::StandardSimplex: return {{"type", "simplex"}, {"n", X.dim()}};
    case SetKind::NonnegOrthant: return {{"type", "orthant"}, {"n", X.dim()}};
    case SetKind::Box: return {{"type", "box"}, {"lower", json_from_vec(X.lower())}, {"upper", json_from_vec(X.upper())}};
    case SetKind::Subspace: {
      json cols = json::array();
      for (int c = 0; c < X.basis().cols(); ++c) cols.push_back(json_from_vec(X.basis().col(c)));
      return {{"type", "subspace"}, {"basis", cols}};
    }
    case SetKind::PolytopeV: {
      json vs = json::array();
      for (const Vec& v : X.vertices()) vs.push_back(json_from_vec(v));
      return {{"type", "polytope"}, {"vertices", vs}};
    }
    case SetKind::PolyhedronH: {
      const Polyhedron& H = X.h_rep();
      json j = {{"type", "polyhedron"}, {"A", json_from_mat(H.A_ub)}, {"b", json_from_vec(H.b_ub)}};
      if (H.A_eq.rows() > 0) {
        j["A_eq"] = json_from_mat(H.A_eq);
        j["b_eq"] = json_from_vec(H.b_eq);
      }
      return j;
    }
    case SetKind::Ball2: return {{"type", "ball"}, {"center", json_from_vec(X.center())}, {"radius", X.radius()}};
  }
  return nullptr;
}

Problem problem_from_json(const json& j) {
  Problem p;
  try {
    p.name = j.value("name", "problem");
    p.objective = objective_from_json(field(j, "objective"));
    p.set = set_from_json(field(j, "set"));
    if (p.objective.dim() != p.set.dim()) bad("objective and set dimensions differ");
    if (j.contains("norms")) {
      p.norm_in = parse_norm(j.at("norms").value("in", "l2"));
      p.norm_out = parse_norm(j.at("norms").value("out", "l2"));
    }
    p.distance = j.contains("distance") ? distance_from_json(j.at("distance"), p.set, p.objective) : DistanceFn::squared_norm(p.norm_in);
  } catch (const json::exception& e) {
    bad(std::string("malformed problem: ") + e.what());
  }
  return p;
}

json problem_to_json(const Problem& p) {
  return {{"name", p.name},
          {"objective", objective_to_json(p.objective)},
          {"set", set_to_json(p.set)},
          {"distance", distance_to_json(p.distance)},
          {"norms", {{"in", to_string(p.norm_in)}, {"out", to_string(p.norm_out)}}}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad("cannot parse '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) bad("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(17);
  s << "k,f_value,gap,dist_to_opt,step_kind,alpha,support_size\n";
  for (const TraceRow& r : trace.rows) {
    s << r.k << ',' << r.f_value << ',' << r.gap << ',' << r.dist_to_opt << ',' << to_string(r.step) << ','
      << r.alpha << ',' << r.support << '\n';
  }
  out << s.str();
}

SolverTrace read_trace_csv(std::istream& in) {
  SolverTrace tr;
  std::string line;
  if (!std::getline(in, line) || line.rfind("k,f_value", 0) != 0) bad("trace CSV lacks its header row");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) bad("trace row has " + std::to_string(cells.size()) + " cells");
    auto num = [&](const std::string& c) {
      std::istringstream is(c);
      is.imbue(std::locale::classic());
      double v = 0.0;
      if (c == "nan" || c == "-nan") return std::numeric_limits<double>::quiet_NaN();
      if (c == "inf") return std::numeric_limits<double>::infinity();
      if (!(is >> v)) bad("bad number '" + c + "' in trace");
      return v;
    };
    TraceRow r;
    r.k = static_cast<int>(num(cells[0]));
    r.f_value = num(cells[1]);
    r.gap = num(cells[2]);
    r.dist_to_opt = num(cells[3]);
    r.step = parse_step_kind(cells[4]);
    r.alpha = num(cells[5]);
    r.support = static_cast<int>(num(cells[6]));
    tr.rows.push_back(r);
  }
  return tr;
}

void save_trace(const std::string& path, const SolverTrace& trace) {
  std::ofstream out(path);
  if (!out) bad("cannot write '" + path + "'");
  write_trace_csv(out, trace);
  write_json_file(path + ".json", trace.metadata);
}

SolverTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  SolverTrace tr = read_trace_csv(in);
  std::ifstream meta(path + ".json");
  if (meta) tr.metadata = json::parse(meta);
  return tr;
}

}  // namespace relcond
