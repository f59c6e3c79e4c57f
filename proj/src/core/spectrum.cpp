#include "spectrum.hpp"

#include <cmath>
#include <sstream>

namespace halflap {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void sign_normalize(std::vector<double>& v) {
  size_t imax = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  }
  if (v[imax] < 0.0) {
    for (double& x : v) x = -x;
  }
}

}  // namespace

EigenResult smallest_eigenpairs(const GagliardoForm& A, const MassMatrix& M, int k,
                                const EigenOptions& opts) {
  const Grid& grid = A.grid();
  if (!M.grid().same_as(grid)) throw GridMismatchError("smallest_eigenpairs: grid mismatch");
  const int n = grid.n;
  if (k < 1 || k > n) throw InvalidArgumentError("smallest_eigenpairs: requires 1 <= k <= n");

  std::vector<std::vector<double>> vecs;   // M-normalized eigenvectors
  std::vector<double> lambdas;
  std::vector<double> residuals;
  std::vector<int> iter_counts;

  auto mdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    return dot(a, M.apply_consistent(b));
  };
  auto deflate = [&](std::vector<double>& v) {
    for (const auto& w : vecs) {
      const double c = mdot(v, w);
      for (int i = 0; i < n; ++i) v[i] -= c * w[i];
    }
  };

  for (int j = 0; j < k; ++j) {
    // smooth deterministic start resembling the j-th Dirichlet mode
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      v[i] = std::sin((j + 1) * M_PI * (i + 1) / static_cast<double>(n + 1));
    }
    deflate(v);
    double vm = std::sqrt(mdot(v, v));
    for (double& x : v) x /= vm;

    double lambda = 0.0;
    double resid = std::numeric_limits<double>::infinity();
    double best_resid = resid;
    int stagnant = 0;
    int it = 0;
    std::vector<double> w;
    for (; it < opts.max_iterations; ++it) {
      CGOptions cg;
      cg.rel_tol = opts.cg_rel_tol;
      if (!w.empty()) cg.initial_guess = &w;
      CGResult sol = conjugate_gradient(
          [&A](const std::vector<double>& x, std::vector<double>& out) { out = A.apply(x); },
          M.apply_consistent(v), cg);
      w = std::move(sol.x);
      deflate(w);
      const double wm = std::sqrt(mdot(w, w));
      if (!(wm > 0.0)) {
        throw SolverFailureError("smallest_eigenpairs: iterate vanished under deflation");
      }
      std::vector<double> vn = w;
      for (double& x : vn) x /= wm;
      const std::vector<double> Av = A.apply(vn);
      const std::vector<double> Mv = M.apply_consistent(vn);
      lambda = dot(vn, Av);  // vn is M-normalized
      double r2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ri = Av[i] - lambda * Mv[i];
        r2 += ri * ri;
      }
      resid = std::sqrt(r2);
      v = std::move(vn);
      if (resid <= opts.residual_tol * lambda) break;
      if (resid >= 0.999 * best_resid) {
        if (++stagnant >= 12) {
          std::ostringstream os;
          os << "smallest_eigenpairs: stagnation at pair " << j << " (residual " << resid
             << ", lambda " << lambda << ")";
          throw SolverFailureError(os.str());
        }
      } else {
        stagnant = 0;
        best_resid = resid;
      }
    }
    if (resid > opts.residual_tol * lambda) {
      std::ostringstream os;
      os << "smallest_eigenpairs: pair " << j << " did not reach residual tolerance within "
         << opts.max_iterations << " iterations";
      throw SolverFailureError(os.str());
    }
    sign_normalize(v);
    vecs.push_back(v);
    lambdas.push_back(lambda);
    residuals.push_back(resid);
    iter_counts.push_back(it + 1);
  }

  EigenResult out;
  out.lambda1_X = lambdas[0];
  out.lambda1_spec = lambdas[0] / kTwoPi;
  out.eigenfunction = GridFunction(grid, vecs[0]);
  out.residual = residuals[0];
  out.iterations = iter_counts[0];
  for (int j = 1; j < k; ++j) {
    out.higher.emplace_back(lambdas[j], GridFunction(grid, vecs[j]));
  }
  return out;
}

}  // namespace halflap
