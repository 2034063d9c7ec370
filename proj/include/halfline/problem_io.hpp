#pragma once

#include <optional>
#include <string>

#include "halfline/model.hpp"
#include "halfline/operator.hpp"
#include "halfline/pendulum.hpp"
#include "halfline/solver.hpp"

namespace halfline {

/// A problem read from JSON, plus the solver and quadrature settings the file asks for.
/// See docs/problem-format.md for the schema.
struct ProblemFile {
  ImpulsiveCoupledBVP problem;
  SolverConfig solver;
  QuadratureConfig quadrature;
  /// Set when the file names the built-in spring-pendulum model.
  std::optional<PendulumParams> pendulum;
  /// Lower bound on u under which the attached bounds are claimed, if any.
  std::optional<double> u_floor;
  std::string source;  // path or "<string>"
};

/// Parses a problem document. Throws ProblemFormatError naming the field (and the line
/// for syntax errors) on malformed input or inadmissible parameters.
ProblemFile parse_problem(const std::string& text, const std::string& source = "<string>");
ProblemFile load_problem_file(const std::string& path);

}  // namespace halfline
