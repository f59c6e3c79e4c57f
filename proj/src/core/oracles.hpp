#pragma once

#include <functional>
#include <vector>

#include "nonlocal.hpp"

namespace halflap {
namespace oracles {

/// Brute-force Gagliardo pairing B(phi_0, phi_k) of unit-spacing hat functions
/// by nested adaptive quadrature with the singularity split at y = x and the
/// exterior tails integrated in closed form. Independent of the closed-form
/// assembly path.
double gagliardo_entry_bruteforce(int k, double rel_tol = 1e-10);

/// Brute-force Gagliardo integral
///   iint (w(x)-w(y))^2 / (x-y)^2 dx dy
/// of a function supported in [lo, hi] (zero outside), by nested adaptive
/// quadrature with diagonal splitting and closed-form tails.
double gagliardo_seminorm_sq_bruteforce(const std::function<double(double)>& w, double lo,
                                        double hi, double rel_tol = 1e-9);

/// (-Delta)^{1/2} u(x) evaluated from the singular-integral definition
///   -(C/2) int_R (u(x+y)+u(x-y)-2u(x))/y^2 dy,  C = 1/pi,
/// by adaptive quadrature with kink splitting. `kinks` lists points where u is
/// not smooth; `second_derivative` supplies u''(x) for the near-origin series.
double half_laplacian_pointwise(const std::function<double(double)>& u, double x,
                                const std::vector<double>& kinks, double support_radius,
                                double second_derivative, double rel_tol = 1e-9);

/// Dense generalized symmetric eigensolve A v = lambda M v (all eigenvalues
/// ascending); reference oracle for the iterative path, O(n^3).
std::vector<double> dense_generalized_eigenvalues(const GagliardoForm& A, const MassMatrix& M);

/// Aitken/Richardson extrapolation from three values at h, h/2, h/4.
/// Returns the limit and the observed order through *order when non-null.
double richardson_extrapolate(double v_h, double v_h2, double v_h4, double* order = nullptr);

}  // namespace oracles
}  // namespace halflap
