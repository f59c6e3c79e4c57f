#include "nonlocal.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fft.hpp"

namespace halflap {

namespace {

constexpr int kFastMatvecThreshold = 512;

// t^2 ln|t| with the 0 ln 0 = 0 convention.
double s_t2log(double t) { return t == 0.0 ? 0.0 : t * t * std::log(std::abs(t)); }

// Exact value: fourth central difference of t^2 ln|t| at k. The -3t^2/4 part
// of the second log antiderivative is annihilated by the difference stencil.
// Accurate in double only for small k (cancellation grows like k^4 ln k).
double entry_closed(int k) {
  return s_t2log(k + 2) - 4.0 * s_t2log(k + 1) + 6.0 * s_t2log(k) - 4.0 * s_t2log(k - 1) +
         s_t2log(k - 2);
}

// Convergent expansion of the same fourth difference,
//   a_k = -k^2 sum_{m even >= 4} 2 (2^{m+1} - 8) / (m(m-1)(m-2)) k^{-m},
// leading term -2/k^2. Converges for k > 2; used for k >= 7 where the closed
// form starts losing digits.
double entry_series(int k) {
  const double x2 = 1.0 / (static_cast<double>(k) * k);
  double total = 0.0;
  double pw = x2 * x2;  // x^4
  for (int m = 4; m <= 400; m += 2) {
    const double c = 2.0 * (std::ldexp(2.0, m) - 8.0) / (static_cast<double>(m) * (m - 1) * (m - 2));
    const double term = c * pw;
    total += term;
    if (term < 1e-19 * total) break;
    pw *= x2;
  }
  return -(static_cast<double>(k) * k) * total;
}

}  // namespace

double GagliardoForm::entry(int k) {
  if (k < 0) throw InvalidArgumentError("GagliardoForm::entry: negative lag");
  return k <= 6 ? entry_closed(k) : entry_series(k);
}

GagliardoForm::GagliardoForm(const Grid& grid) : grid_(grid) {
  const int n = grid_.n;
  row_.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) row_[k] = entry(k);

  if (n >= kFastMatvecThreshold) {
    // symmetric circulant embedding: first column [a_0..a_{n-1}, 0.., a_{n-1}..a_1]
    fft_size_ = next_pow2(static_cast<size_t>(2 * n));
    circulant_fft_.assign(fft_size_, {0.0, 0.0});
    for (int k = 0; k < n; ++k) circulant_fft_[k] = {row_[k], 0.0};
    for (int k = 1; k < n; ++k) circulant_fft_[fft_size_ - k] = {row_[k], 0.0};
    fft_radix2(circulant_fft_, false);
  }
}

std::vector<double> GagliardoForm::apply_direct(const std::vector<double>& v) const {
  const int n = size();
  if (static_cast<int>(v.size()) != n) {
    throw InvalidArgumentError("GagliardoForm::apply: vector length mismatch");
  }
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += row_[static_cast<size_t>(std::abs(i - j))] * v[j];
    out[i] = s;
  }
  return out;
}

std::vector<double> GagliardoForm::apply(const std::vector<double>& v) const {
  const int n = size();
  if (static_cast<int>(v.size()) != n) {
    throw InvalidArgumentError("GagliardoForm::apply: vector length mismatch");
  }
  if (circulant_fft_.empty()) return apply_direct(v);

  std::vector<std::complex<double>> work(fft_size_, {0.0, 0.0});
  for (int i = 0; i < n; ++i) work[i] = {v[i], 0.0};
  fft_radix2(work, false);
  for (size_t i = 0; i < fft_size_; ++i) work[i] *= circulant_fft_[i];
  fft_radix2(work, true);
  std::vector<double> out(static_cast<size_t>(n));
  const double scale = 1.0 / static_cast<double>(fft_size_);
  for (int i = 0; i < n; ++i) out[i] = work[i].real() * scale;
  return out;
}

double GagliardoForm::quadratic_form(const GridFunction& u) const {
  if (!u.grid.same_as(grid_)) {
    throw GridMismatchError("quadratic_form: grid mismatch");
  }
  const std::vector<double> Au = apply(u.values);
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += u.values[i] * Au[i];
  return s;
}

double GagliardoForm::quadratic_form_compensated(const std::vector<double>& u) const {
  const int n = size();
  if (static_cast<int>(u.size()) != n) {
    throw InvalidArgumentError("quadratic_form_compensated: length mismatch");
  }
  // u'Au = a_0 sum u_i^2 + 2 sum_k a_k sum_i u_i u_{i+k}, Neumaier-accumulated.
  long double sum = 0.0L, comp = 0.0L;
  auto add = [&](long double x) {
    const long double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  };
  for (int i = 0; i < n; ++i) add(static_cast<long double>(row_[0]) * u[i] * u[i]);
  for (int k = 1; k < n; ++k) {
    const long double ak = row_[static_cast<size_t>(k)];
    for (int i = 0; i + k < n; ++i) add(2.0L * ak * u[i] * u[i + k]);
  }
  return static_cast<double>(sum + comp);
}

double GagliardoForm::xnorm(const GridFunction& u) const {
  return std::sqrt(std::max(0.0, quadratic_form(u)));
}

void GagliardoForm::write_first_row_csv(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw InvalidArgumentError("write_first_row_csv: cannot open " + path);
  std::fputs("k,a_k\n", fp);
  for (int k = 0; k < size(); ++k) std::fprintf(fp, "%d,%.17g\n", k, row_[k]);
  std::fclose(fp);
}

std::vector<double> MassMatrix::apply_consistent(const std::vector<double>& v) const {
  const int n = grid_.n;
  if (static_cast<int>(v.size()) != n) {
    throw InvalidArgumentError("MassMatrix::apply: vector length mismatch");
  }
  const double d = diagonal_consistent(), o = offdiagonal_consistent();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = d * v[i];
    if (i > 0) s += o * v[i - 1];
    if (i + 1 < n) s += o * v[i + 1];
    out[i] = s;
  }
  return out;
}

std::vector<double> MassMatrix::apply_lumped(const std::vector<double>& v) const {
  const int n = grid_.n;
  if (static_cast<int>(v.size()) != n) {
    throw InvalidArgumentError("MassMatrix::apply: vector length mismatch");
  }
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = grid_.h * v[i];
  return out;
}

double MassMatrix::quadratic_form_consistent(const GridFunction& u) const {
  if (!u.grid.same_as(grid_)) throw GridMismatchError("mass quadratic_form: grid mismatch");
  const auto Mv = apply_consistent(u.values);
  double s = 0.0;
  for (int i = 0; i < grid_.n; ++i) s += u.values[i] * Mv[i];
  return s;
}

double MassMatrix::quadratic_form_lumped(const GridFunction& u) const {
  if (!u.grid.same_as(grid_)) throw GridMismatchError("mass quadratic_form: grid mismatch");
  double s = 0.0;
  for (int i = 0; i < grid_.n; ++i) s += u.values[i] * u.values[i];
  return grid_.h * s;
}

GagliardoForm assemble_stiffness(const Grid& grid) { return GagliardoForm(grid); }
MassMatrix assemble_mass(const Grid& grid) { return MassMatrix(grid); }

GridFunction solve_dirichlet_linear(const GagliardoForm& A, const MassMatrix& M,
                                    const std::function<double(double)>& g,
                                    LinearSolveReport* report, double rel_tol) {
  const Grid& grid = A.grid();
  if (!M.grid().same_as(grid)) throw GridMismatchError("solve_dirichlet_linear: grid mismatch");
  GridFunction gn = interpolate(grid, g);
  std::vector<double> rhs = M.apply_consistent(gn.values);
  for (double& v : rhs) v *= kTwoPi;  // (1/2pi) A u = M g  <=>  A u = 2pi M g

  CGOptions opts;
  opts.rel_tol = rel_tol;
  opts.keep_history = true;
  CGResult res = conjugate_gradient([&A](const std::vector<double>& v, std::vector<double>& out) { out = A.apply(v); },
                                    rhs, opts);
  if (report) {
    report->n = grid.n;
    report->iterations = res.iterations;
    report->final_residual = res.final_relative_residual;
  }
  return GridFunction(grid, std::move(res.x));
}

}  // namespace halflap
