#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nonlinearity.hpp"
#include "nonlocal.hpp"

namespace halflap {

/// phi(u) = ||u||_X^2 / (4 pi) - int F(u), with the nonlinear term integrated
/// by the mass-lumped nodal rule. The discrete weak form is the exact
/// gradient: r(u) = A u / (2 pi) - h f(u).
struct EnergyFunctional {
  const GagliardoForm* A = nullptr;
  const MassMatrix* M = nullptr;
  Nonlinearity nl;

  const Grid& grid() const { return A->grid(); }
};

struct MPConfig {
  int path_points = 41;
  double descent_tol = 1e-8;
  int max_outer = 5000;
  double step_init = 1.0;
  double step_backtrack = 0.5;
  double armijo_c = 1e-4;
  double step_cap_fraction = 0.5;  // of the initial path spacing, in X-norm
  double newton_tol = 1e-12;
  double newton_engage = 0.1;      // dual residual that triggers Newton attempts
  int newton_max_iterations = 60;
  double kink_gap = 1e-9;          // Newton falls back to gradient steps this close to |t|=1
  double deflation_radius = 1e-3;
  int max_restarts = 3;
  std::uint64_t seed = 42;
};

struct MPResult {
  GridFunction solution;
  double level_c = 0.0;
  double residual = 0.0;
  std::vector<double> path_levels;
  int iterations = 0;
  bool refined = false;
};

struct NewtonReport {
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
  GridFunction best_iterate;  // filled even when the iteration fails
};

double energy(const EnergyFunctional& E, const GridFunction& u);

struct GradientResult {
  GridFunction sobolev;            // g with A g = 2 pi r
  std::vector<double> algebraic;   // r = A u / (2 pi) - h f(u)
  double residual = 0.0;           // sqrt(r' A^{-1} r), dual norm of phi'
};
GradientResult gradient(const EnergyFunctional& E, const GridFunction& u);

/// Endpoint e = t * direction/||direction||_X with phi(e) < -1, t doubling
/// from 1. Throws when t exceeds 2^60 without reaching phi < -1.
GridFunction find_endpoint(const EnergyFunctional& E, const GridFunction& direction);

/// Path-deformation mountain pass: discretize [0, e], repeatedly move the
/// maximal interior point one backtracking Sobolev-gradient descent step
/// (step length capped by the path spacing), keep the path resolved by
/// arclength resampling around the pinned maximum, and polish with Newton
/// once the maximal point enters its basin.
MPResult mountain_pass(const EnergyFunctional& E, const MPConfig& cfg,
                       const GridFunction& direction);

/// Same iteration on a caller-supplied initial path (first point is kept as
/// the low endpoint, last as the high endpoint).
MPResult mountain_pass_on_path(const EnergyFunctional& E, const MPConfig& cfg,
                               std::vector<GridFunction> path);

/// Newton polish of the discrete weak form, Jacobian A/(2pi) - h diag(f'(u)).
/// Gradient fallback when a nodal value sits within cfg.kink_gap of |t|=1.
GridFunction newton_refine(const EnergyFunctional& E, const GridFunction& u,
                           const MPConfig& cfg = {}, NewtonReport* report = nullptr);

/// Damped Newton on the residual deflated against `known` solutions and their
/// negatives: eta(u) r(u) with eta = prod (1 + ||u -+ s||_X^{-2}), solved via
/// the Sherman-Morrison rescaling of the plain Newton step. Returns the final
/// iterate; *converged reports whether newton_tol was reached.
GridFunction deflated_newton(const EnergyFunctional& E, const GridFunction& start,
                             const std::vector<GridFunction>& known, const MPConfig& cfg,
                             bool* converged, NewtonReport* report = nullptr);

/// Mountain-pass runs from eigen directions and seeded random starts with
/// residual deflation against found solutions and their negatives. Returns up
/// to k solutions pairwise distinct modulo sign, sorted by energy.
std::vector<GridFunction> deflated_search(const EnergyFunctional& E, const MPConfig& cfg, int k);

enum class HvVerdict { holds, fails, unbounded };

struct HvResult {
  double sup_value = 0.0;
  double threshold = 0.0;
  HvVerdict verdict = HvVerdict::fails;
  double t_at_sup = 0.0;
};

/// sup_t (t^2/(4 pi) - int F(t psi)) against omega_hat/(2 alpha0); coarse
/// scan plus golden-section refinement. psi is X-normalized internally.
HvResult check_Hv(const EnergyFunctional& E, const GridFunction& psi, double alpha0,
                  double omega_hat);

}  // namespace halflap
