#include "halfline/errors.hpp"

#include <sstream>

namespace halfline {

namespace {

std::string describe(const std::string& base, double s, const std::array<double, 4>& args,
                     std::optional<int> iteration) {
  std::ostringstream out;
  out.precision(17);
  out << base << " at s=" << s << " with (x,y,z,w)=(" << args[0] << ", " << args[1] << ", "
      << args[2] << ", " << args[3] << ")";
  if (iteration) out << " [iteration " << *iteration << "]";
  return out.str();
}

}  // namespace

EvaluationError::EvaluationError(const std::string& what, double s, std::array<double, 4> args,
                                 std::optional<int> iteration)
    : std::runtime_error(describe(what, s, args, iteration)),
      base_(what),
      point_(s),
      args_(args),
      iteration_(iteration) {}

EvaluationError EvaluationError::with_iteration(int iteration) const {
  return EvaluationError(base_, point_, args_, iteration);
}

ProblemFormatError::ProblemFormatError(const std::string& field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field) {}

}  // namespace halfline
