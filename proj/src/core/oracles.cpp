#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "quadrature.hpp"

namespace halflap {
namespace oracles {

namespace {

double hat(double x, double center) { return std::max(0.0, 1.0 - std::abs(x - center)); }

}  // namespace

double gagliardo_entry_bruteforce(int k, double rel_tol) {
  // supports of phi_0 and phi_k lie in [A, B]
  const double A = std::min(-1.0, k - 1.0);
  const double B = std::max(1.0, k + 1.0);
  std::vector<double> breaks = {-1.0, 0.0, 1.0, k - 1.0, static_cast<double>(k), k + 1.0};

  auto inner = [&](double x) {
    const double f0x = hat(x, 0.0);
    const double fkx = hat(x, k);
    auto integrand = [&](double y) {
      const double d = x - y;
      if (std::abs(d) < 1e-14) return 0.0;  // removable; adaptive nodes never land here
      return (f0x - hat(y, 0.0)) * (fkx - hat(y, k)) / (d * d);
    };
    double total = 0.0;
    if (f0x * fkx != 0.0) {
      // tails beyond [A,B] in both variables, each integrable in closed form
      total += 2.0 * f0x * fkx * (1.0 / (x - A) + 1.0 / (B - x));
    }
    std::vector<double> inner_splits = breaks;
    inner_splits.push_back(x);
    total += integrate_adaptive_split(integrand, A, B, inner_splits, rel_tol * 0.1, 1e-14);
    return total;
  };
  return integrate_adaptive_split(inner, A, B, breaks, rel_tol, 1e-13);
}

double gagliardo_seminorm_sq_bruteforce(const std::function<double(double)>& w, double lo,
                                        double hi, double rel_tol) {
  auto inner = [&](double x) {
    const double wx = w(x);
    auto integrand = [&](double y) {
      const double d = x - y;
      if (std::abs(d) < 1e-14) return 0.0;
      const double diff = wx - w(y);
      return diff * diff / (d * d);
    };
    double total = 2.0 * wx * wx * (1.0 / (x - lo) + 1.0 / (hi - x));
    total += integrate_adaptive_split(integrand, lo, hi, {x}, rel_tol * 0.1, 1e-13);
    return total;
  };
  return integrate_adaptive(inner, lo, hi, rel_tol, 1e-12);
}

double half_laplacian_pointwise(const std::function<double(double)>& u, double x,
                                const std::vector<double>& kinks, double support_radius,
                                double second_derivative, double rel_tol) {
  const double ux = u(x);
  auto integrand = [&](double y) { return (u(x + y) + u(x - y) - 2.0 * ux) / (y * y); };

  const double eps = 1e-8;
  const double Y = support_radius + std::abs(x) + 1.0;
  // second differences are even in y: integrate 2x over (0, Y) with the
  // near-origin cell handled by the series u'' * eps and the far tail by the
  // closed form -2 u(x)/Y.
  std::vector<double> splits;
  for (double kx : kinks) {
    splits.push_back(std::abs(kx - x));
    splits.push_back(std::abs(kx + x));
  }
  double total = second_derivative * eps;
  total += integrate_adaptive_split(integrand, eps, Y, splits, rel_tol, 1e-13);
  total *= 2.0;
  total += -4.0 * ux / Y;
  return -total / kTwoPi;  // -(C/2) with C = 1/pi
}

std::vector<double> dense_generalized_eigenvalues(const GagliardoForm& A, const MassMatrix& M) {
  const int n = A.size();
  Eigen::MatrixXd Ad(n, n), Md = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Ad(i, j) = A.first_row()[static_cast<size_t>(std::abs(i - j))];
    }
    Md(i, i) = M.diagonal_consistent();
    if (i > 0) Md(i, i - 1) = M.offdiagonal_consistent();
    if (i + 1 < n) Md(i, i + 1) = M.offdiagonal_consistent();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(Ad, Md);
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + n);
}

double richardson_extrapolate(double v_h, double v_h2, double v_h4, double* order) {
  const double d1 = v_h - v_h2;
  const double d2 = v_h2 - v_h4;
  if (order) *order = std::log2(std::abs(d1 / d2));
  return v_h4 - d2 * d2 / (d1 - d2);
}

}  // namespace oracles
}  // namespace halflap
