#pragma once

#include <utility>
#include <vector>

#include "nonlocal.hpp"

namespace halflap {

/// Output of the generalized eigensolve A v = lambda M v.
/// lambda1_X is the Poincare constant in Gagliardo-form units
/// (min u'Au / u'Mu); lambda1_spec = lambda1_X / (2 pi) is the corresponding
/// eigenvalue of (-Delta)^{1/2}. The eigenfunction is M-normalized and sign
/// normalized so its maximal-magnitude nodal value is positive.
struct EigenResult {
  double lambda1_X = 0.0;
  double lambda1_spec = 0.0;
  GridFunction eigenfunction;
  std::vector<std::pair<double, GridFunction>> higher;  // pairs beyond the first
  double residual = 0.0;                                 // ||A v - lambda M v||_2 of the ground pair
  int iterations = 0;                                    // inverse-iteration count, ground pair
};

struct EigenOptions {
  double residual_tol = 1e-10;  // relative to lambda
  int max_iterations = 400;
  double cg_rel_tol = 1e-13;
};

/// k smallest generalized eigenpairs by shift-0 inverse iteration on the CG
/// solver, with M-orthogonal deflation against already-converged pairs.
EigenResult smallest_eigenpairs(const GagliardoForm& A, const MassMatrix& M, int k,
                                const EigenOptions& opts = {});

}  // namespace halflap
