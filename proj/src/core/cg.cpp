#include "cg.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace halflap {

namespace {
double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace

CGResult conjugate_gradient(const MatVec& apply, const std::vector<double>& b, const CGOptions& opts) {
  const size_t n = b.size();
  const int max_it = opts.max_iterations > 0 ? opts.max_iterations : static_cast<int>(10 * n);
  const double bnorm = std::sqrt(dot(b, b));

  CGResult out;
  out.x.assign(n, 0.0);
  if (bnorm == 0.0) return out;

  std::vector<double> r = b;
  std::vector<double> tmp(n);
  if (opts.initial_guess && opts.initial_guess->size() == n) {
    out.x = *opts.initial_guess;
    apply(out.x, tmp);
    for (size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
  }

  auto precond = [&](const std::vector<double>& v, std::vector<double>& z) {
    if (opts.diagonal_preconditioner) {
      const auto& d = *opts.diagonal_preconditioner;
      for (size_t i = 0; i < n; ++i) z[i] = v[i] / d[i];
    } else {
      z = v;
    }
  };

  std::vector<double> z(n), p(n), Ap(n);
  precond(r, z);
  p = z;
  double rz = dot(r, z);
  double rnorm = std::sqrt(dot(r, r));
  if (opts.keep_history) out.residual_history.push_back(rnorm / bnorm);

  for (int it = 0; it < max_it; ++it) {
    if (rnorm <= opts.rel_tol * bnorm) {
      out.iterations = it;
      out.final_relative_residual = rnorm / bnorm;
      return out;
    }
    apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0)) {
      throw SolverFailureError("conjugate_gradient: matrix is not positive definite (p'Ap <= 0)",
                               out.residual_history);
    }
    const double alpha = rz / pAp;
    for (size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_new;
    rnorm = std::sqrt(dot(r, r));
    if (opts.keep_history) out.residual_history.push_back(rnorm / bnorm);
  }
  if (rnorm <= opts.rel_tol * bnorm) {
    out.iterations = max_it;
    out.final_relative_residual = rnorm / bnorm;
    return out;
  }
  std::ostringstream os;
  os << "conjugate_gradient: no convergence within " << max_it
     << " iterations (relative residual " << rnorm / bnorm << ")";
  std::vector<double> hist = out.residual_history;
  if (hist.empty()) hist.push_back(rnorm / bnorm);
  throw SolverFailureError(os.str(), hist);
}

}  // namespace halflap
