#pragma once

#include <functional>
#include <vector>

namespace halflap {

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
/// Splits recursively until the K15-G7 error estimate is below
/// max(abs_tol, rel_tol*|I|) per subinterval share. Never evaluates at the
/// interval endpoints, so removable endpoint singularities are safe.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 1e-14, int max_depth = 48);

/// Same, with mandatory initial split points (kinks, removable singularities).
double integrate_adaptive_split(const std::function<double(double)>& f, double a, double b,
                                const std::vector<double>& split_points, double rel_tol = 1e-10,
                                double abs_tol = 1e-14, int max_depth = 48);

}  // namespace halflap
