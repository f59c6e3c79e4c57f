#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace halflap {

// Error taxonomy mirrored by the C API status codes.
enum class ErrorCode {
  invalid_argument,
  overflow,
  solver_failure,
  non_convergence,
  grid_mismatch,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(std::string msg) : Error(ErrorCode::invalid_argument, std::move(msg)) {}
};

// Raised when an integrand exponent passes the representability cap; carries
// the offending node so callers can report where the blow-up happened.
class OverflowError : public Error {
 public:
  OverflowError(std::string msg, int node = -1, double x = 0.0)
      : Error(ErrorCode::overflow, std::move(msg)), node_(node), x_(x) {}
  int node() const noexcept { return node_; }
  double node_x() const noexcept { return x_; }

 private:
  int node_;
  double x_;
};

class SolverFailureError : public Error {
 public:
  SolverFailureError(std::string msg, std::vector<double> residual_history = {})
      : Error(ErrorCode::solver_failure, std::move(msg)), history_(std::move(residual_history)) {}
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::string msg, std::vector<double> path_levels = {})
      : Error(ErrorCode::non_convergence, std::move(msg)), path_levels_(std::move(path_levels)) {}
  const std::vector<double>& path_levels() const noexcept { return path_levels_; }

 private:
  std::vector<double> path_levels_;
};

class GridMismatchError : public Error {
 public:
  explicit GridMismatchError(std::string msg) : Error(ErrorCode::grid_mismatch, std::move(msg)) {}
};

}  // namespace halflap
