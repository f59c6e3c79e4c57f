#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace halflap {

/// Uniform grid on (a,b) with n interior nodes at a + i*h, h = (b-a)/(n+1).
/// Grid functions are piecewise linear in the interior nodal values and
/// identically zero at the endpoints and outside [a,b].
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int n = 0;
  double h = 0.0;

  double node(int i) const { return a + (i + 1) * h; }  // i in [0, n)
  double length() const { return b - a; }
  bool same_as(const Grid& other) const {
    return n == other.n && a == other.a && b == other.b;
  }
  /// Symmetric about the origin (used by the symmetry/polarization checks).
  bool symmetric_about_zero() const { return std::abs(a + b) <= 1e-12 * (b - a); }
};

Grid make_grid(double a, double b, int n);

/// Nodal values of the piecewise-linear interpolant vanishing outside (a,b).
struct GridFunction {
  Grid grid;
  std::vector<double> values;  // length grid.n

  GridFunction() = default;
  explicit GridFunction(const Grid& g) : grid(g), values(static_cast<size_t>(g.n), 0.0) {}
  GridFunction(const Grid& g, std::vector<double> v);

  int size() const { return grid.n; }
  /// Evaluate the interpolant at any real x (zero outside (a,b)).
  double eval(double x) const;
};

GridFunction interpolate(const Grid& grid, const std::function<double(double)>& sampler);

/// Mass-lumped nodal quadrature of g(u) over (a,b): h * sum_i [g(u_i) - g(0)].
/// Subtracting g(0) makes the exterior-zero tails contribute exactly zero, so
/// integrands like e^{alpha t^2} must be passed as-is and the caller adds
/// g(0)*(b-a) if the constant part is wanted.
double integrate_nodal(const GridFunction& u, const std::function<double(double)>& g);

/// Largest exponent fed to std::exp anywhere in the library; beyond it an
/// OverflowError is raised instead of returning inf.
inline constexpr double kExpCap = 700.0;

/// exp with the cap; `node` only labels the error message.
double checked_exp(double exponent, int node = -1, double x = 0.0);

/// Write `x,u` CSV, one row per interior node, 17 significant digits.
void write_csv(const GridFunction& u, const std::string& path);

}  // namespace halflap
