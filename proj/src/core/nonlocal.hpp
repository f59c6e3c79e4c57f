#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cg.hpp"
#include "grid.hpp"

namespace halflap {

/// Symmetric positive-definite Toeplitz matrix of the Gagliardo bilinear form
///   A[i][j] = a_{|i-j|},  a_k = B(phi_0, phi_k),
///   B(u,v) = iint_{R^2} (u(x)-u(y))(v(x)-v(y)) / |x-y|^2 dx dy,
/// for piecewise-linear hat functions extended by zero. In one dimension the
/// H^{1/2} seminorm is dilation invariant, so the entries do not depend on h.
/// u' A u is exactly ||u_h||_X^2 of the interpolant.
class GagliardoForm {
 public:
  explicit GagliardoForm(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int size() const { return grid_.n; }
  const std::vector<double>& first_row() const { return row_; }

  /// A*v. Uses circulant-embedding FFT convolution for n >= 512, the direct
  /// O(n^2) product below; both agree to 1e-12 in max norm.
  std::vector<double> apply(const std::vector<double>& v) const;
  /// Direct O(n^2) product from the Toeplitz generator (reference path).
  std::vector<double> apply_direct(const std::vector<double>& v) const;

  /// u' A u = ||u||_X^2 of the interpolant; zero iff u == 0.
  double quadratic_form(const GridFunction& u) const;
  /// Compensated-summation direct evaluation; used where 1e-12 absolute
  /// comparisons between near-equal energies are required.
  double quadratic_form_compensated(const std::vector<double>& u) const;

  double xnorm(const GridFunction& u) const;

  void write_first_row_csv(const std::string& path) const;

  /// Entry of the infinite Toeplitz generator (independent of this grid).
  static double entry(int k);

 private:
  Grid grid_;
  std::vector<double> row_;
  // circulant spectrum for the fast path (empty when n < fast threshold)
  std::vector<std::complex<double>> circulant_fft_;
  size_t fft_size_ = 0;
};

/// L^2(a,b) Gram matrix of the P1 basis: consistent tridiagonal
/// h/6 * [1, 4, 1] plus the lumped variant diag(h).
class MassMatrix {
 public:
  explicit MassMatrix(const Grid& grid) : grid_(grid) {}

  const Grid& grid() const { return grid_; }
  double diagonal_consistent() const { return 2.0 * grid_.h / 3.0; }
  double offdiagonal_consistent() const { return grid_.h / 6.0; }
  double lumped() const { return grid_.h; }

  std::vector<double> apply_consistent(const std::vector<double>& v) const;
  std::vector<double> apply_lumped(const std::vector<double>& v) const;

  /// u' M u with the consistent matrix: exact squared L^2 norm of the interpolant.
  double quadratic_form_consistent(const GridFunction& u) const;
  double quadratic_form_lumped(const GridFunction& u) const;

 private:
  Grid grid_;
};

GagliardoForm assemble_stiffness(const Grid& grid);
MassMatrix assemble_mass(const Grid& grid);

struct LinearSolveReport {
  int n = 0;
  int iterations = 0;
  double final_residual = 0.0;
};

/// Solve (1/2pi) A u = M g_nodal by CG to relative residual 1e-12. The 1/2pi
/// factor makes A/(2pi) the discrete (-Delta)^{1/2} in the weak form.
GridFunction solve_dirichlet_linear(const GagliardoForm& A, const MassMatrix& M,
                                    const std::function<double(double)>& g,
                                    LinearSolveReport* report = nullptr,
                                    double rel_tol = 1e-12);

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace halflap
