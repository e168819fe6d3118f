#pragma once

#include <iosfwd>
#include <string>

#include "relcond/solvers.hpp"

namespace relcond {

Vec vec_from_json(const json& j);
json json_from_vec(const Vec& v);
/// Row-major nested array.
Mat mat_from_json(const json& j);
json json_from_mat(const Mat& m);

/**
 * Problem file layout:
 *   objective: {type: quadratic, A, b, c?, scale?} or {type: exponential, a}
 *   set:       {type: simplex|orthant (n), box (lower, upper), subspace (basis columns),
 *               polytope (vertices), polyhedron (A, b, A_eq?, b_eq?), ball (center, radius)}
 *   distance:  {type: squared-norm (norm), bregman (reference), radial, diametral, gradiental}
 *   norms:     {in, out}
 *
 * @throws Error(InvalidArgument) on malformed input.
 */
Problem problem_from_json(const json& j);
json problem_to_json(const Problem& p);

json set_to_json(const ConvexSet& X);
ConvexSet set_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Header row k,f_value,gap,dist_to_opt,step_kind,alpha,support_size; classic locale, 17 digits.
void write_trace_csv(std::ostream& out, const SolverTrace& trace);
SolverTrace read_trace_csv(std::istream& in);

/// CSV at path plus metadata at path + ".json".
void save_trace(const std::string& path, const SolverTrace& trace);
SolverTrace load_trace(const std::string& path);

}  // namespace relcond
