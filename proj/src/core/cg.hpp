#pragma once

#include <functional>
#include <vector>

namespace halflap {

using MatVec = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct CGResult {
  std::vector<double> x;
  int iterations = 0;
  double final_relative_residual = 0.0;
  std::vector<double> residual_history;
};

struct CGOptions {
  double rel_tol = 1e-12;
  int max_iterations = 0;          // 0 -> 10*n
  const std::vector<double>* diagonal_preconditioner = nullptr;  // optional
  const std::vector<double>* initial_guess = nullptr;            // optional warm start
  bool keep_history = false;
};

/// Conjugate gradients for SPD systems given as a matvec callback.
/// Stops at ||b - A x|| <= rel_tol * ||b||; throws SolverFailureError with the
/// residual history when the iteration cap is exhausted.
CGResult conjugate_gradient(const MatVec& apply, const std::vector<double>& b, const CGOptions& opts = {});

}  // namespace halflap
