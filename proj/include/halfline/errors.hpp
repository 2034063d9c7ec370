#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace halfline {

/// Raised when the problem statement itself is unusable (bad schedule, bad parameters).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a right-hand side, impulse map or integrand returns a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double s, std::array<double, 4> args,
                  std::optional<int> iteration = std::nullopt);

  double point() const noexcept { return point_; }
  const std::array<double, 4>& arguments() const noexcept { return args_; }
  std::optional<int> iteration() const noexcept { return iteration_; }

  EvaluationError with_iteration(int iteration) const;

 private:
  std::string base_;
  double point_;
  std::array<double, 4> args_;
  std::optional<int> iteration_;
};

/// Raised by the problem-file reader; the message names the offending field path.
class ProblemFormatError : public std::runtime_error {
 public:
  ProblemFormatError(const std::string& field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace halfline
