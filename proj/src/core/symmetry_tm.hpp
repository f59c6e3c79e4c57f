#pragma once

#include <cstdint>
#include <string>

#include "energy_mp.hpp"
#include "nonlocal.hpp"

namespace halflap {

/// Two-point rearrangement of a nonnegative grid function with respect to the
/// half-line H = (a_node, infinity). a_node must be a grid node or element
/// midpoint no greater than the domain midpoint, so the reflection maps nodes
/// to nodes and the rearranged function still vanishes outside (a,b).
GridFunction polarize(const GridFunction& u, double a_node);

struct PolarizationReport {
  int trials = 0;
  int violations = 0;
  double worst_energy_margin = 0.0;    // max of qf(u^H) - qf(u) observed
  double worst_integral_margin = 0.0;  // max |int F(u^H) - int F(u)|
  std::string counterexample;          // empty when no violation
  bool pass() const { return violations == 0; }
};

/// Randomized check of the polarization inequality
///   qf(u^H) <= qf(u) + 1e-12 and int F(u^H) = int F(u) to 1e-12
/// over `trials` nonnegative functions and valid reflection points. Energies
/// are evaluated with compensated summation so the 1e-12 slack is meaningful.
PolarizationReport verify_polarization_inequality(const GagliardoForm& A,
                                                  const EnergyFunctional& E, int trials,
                                                  std::uint64_t seed);

struct SymmetryReport {
  double evenness_defect = 0.0;      // max |u(x) - u(-x)| over nodes
  double monotonicity_defect = 0.0;  // max positive increment along nodes in (0,b)
  double nonneg_defect = 0.0;        // max(0, -min u)
  bool pass(double tol) const {
    return evenness_defect <= tol && monotonicity_defect <= tol && nonneg_defect <= tol;
  }
};

/// Requires a grid symmetric about 0.
SymmetryReport verify_symmetry(const GridFunction& u);

struct TMProbeConfig {
  int restarts = 8;
  int max_iterations = 500;
  double step_init = 0.5;
  std::uint64_t seed = 42;
};

struct TMProbeResult {
  double alpha = 0.0;
  double sup_estimate = 0.0;  // max of int_a^b e^{alpha u^2} found on ||u||_X = 1
  GridFunction maximizer;
  int restarts = 0;
  bool saturated = false;  // overflow cap hit during the search
};

/// Maximizes J(u) = (b-a) + int (e^{alpha u^2} - 1) over u'Au = 1 by projected
/// Sobolev-gradient ascent with random restarts; `inject` adds one extra
/// deterministic start (used to chain alpha sweeps and mesh refinements).
TMProbeResult tm_probe(const GagliardoForm& A, double alpha, const TMProbeConfig& cfg = {},
                       const GridFunction* inject = nullptr);

}  // namespace halflap
