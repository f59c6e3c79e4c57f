#include "energy_mp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "spectrum.hpp"

namespace halflap {

namespace {

constexpr double kFourPi = 2.0 * kTwoPi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> axpy(const std::vector<double>& x, double t, const std::vector<double>& y) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + t * y[i];
  return out;
}

// phi with overflow mapped to -inf: F blowing up means the energy is far
// below any level the algorithms care about.
double energy_clamped(const EnergyFunctional& E, const std::vector<double>& v) {
  double nodal = 0.0;
  const int n = E.grid().n;
  try {
    for (int i = 0; i < n; ++i) nodal += E.nl.F(v[i]);
  } catch (const OverflowError&) {
    return kNegInf;
  }
  if (!std::isfinite(nodal)) return kNegInf;
  std::vector<double> Av = E.A->apply(v);
  return dot(v, Av) / kFourPi - E.grid().h * nodal;
}

std::vector<double> algebraic_residual(const EnergyFunctional& E, const std::vector<double>& v) {
  const int n = E.grid().n;
  std::vector<double> r = E.A->apply(v);
  const double h = E.grid().h;
  for (int i = 0; i < n; ++i) r[i] = r[i] / kTwoPi - h * E.nl.f(v[i]);
  return r;
}

struct DualSolver {
  const GagliardoForm* A;
  std::vector<double> warm;

  // Sobolev gradient: solves A g = 2 pi r, warm-started across calls.
  std::vector<double> sobolev(const std::vector<double>& r) {
    std::vector<double> rhs = r;
    for (double& x : rhs) x *= kTwoPi;
    CGOptions opts;
    opts.rel_tol = 1e-12;
    if (warm.size() == rhs.size()) opts.initial_guess = &warm;
    CGResult res = conjugate_gradient(
        [this](const std::vector<double>& v, std::vector<double>& out) { out = A->apply(v); }, rhs,
        opts);
    warm = res.x;
    return res.x;
  }

  static double dual_norm(const std::vector<double>& r, const std::vector<double>& g) {
    return std::sqrt(std::max(0.0, dot(r, g) / kTwoPi));
  }
};

double xnorm_of(const GagliardoForm& A, const std::vector<double>& v) {
  return std::sqrt(std::max(0.0, dot(v, A.apply(v))));
}

bool is_odd_about_center(const std::vector<double>& v) {
  const size_t n = v.size();
  double scale = 0.0, defect = 0.0;
  for (size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(v[i]));
    defect = std::max(defect, std::abs(v[i] + v[n - 1 - i]));
  }
  return scale > 0.0 && defect <= 1e-12 * scale;
}

void project_odd(std::vector<double>& v) {
  const size_t n = v.size();
  for (size_t i = 0; i < (n + 1) / 2; ++i) {
    const double w = 0.5 * (v[i] - v[n - 1 - i]);
    v[i] = w;
    v[n - 1 - i] = -w;
  }
}

struct NewtonOutcome {
  std::vector<double> u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

// Damped Newton on r(u) = A u/(2pi) - h f(u); deflation_points (with their
// negatives) rescale the step by the Sherman-Morrison factor of the deflated
// residual eta(u) r(u).
NewtonOutcome newton_iterate(const EnergyFunctional& E, std::vector<double> u, const MPConfig& cfg,
                             const std::vector<std::vector<double>>* deflation_points = nullptr,
                             bool keep_odd = false) {
  const int n = E.grid().n;
  const double h = E.grid().h;
  NewtonOutcome out;
  DualSolver dual{E.A, {}};

  Eigen::MatrixXd J(n, n);
  int grow_streak = 0;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> best_u = u;

  for (int it = 0; it <= cfg.newton_max_iterations; ++it) {
    if (keep_odd) project_odd(u);
    std::vector<double> r;
    try {
      r = algebraic_residual(E, u);
    } catch (const OverflowError&) {
      out.u = best_u;
      out.residual = best_res;
      out.iterations = it;
      return out;
    }
    const std::vector<double> g = dual.sobolev(r);
    const double res = DualSolver::dual_norm(r, g);
    out.history.push_back(res);
    if (res < best_res) {
      best_res = res;
      best_u = u;
      grow_streak = 0;
    } else if (++grow_streak >= 3) {
      out.u = best_u;
      out.residual = best_res;
      out.iterations = it;
      return out;  // diverging: hand back the best iterate
    }
    if (res <= cfg.newton_tol) {
      out.u = u;
      out.residual = res;
      out.iterations = it;
      out.converged = true;
      return out;
    }
    if (it == cfg.newton_max_iterations) break;

    bool kink = false;
    if (E.nl.has_kink_at_one) {
      for (int i = 0; i < n; ++i) {
        if (std::abs(std::abs(u[i]) - 1.0) < cfg.kink_gap) {
          kink = true;
          break;
        }
      }
    }
    std::vector<double> step;
    if (kink) {
      step = g;  // Sobolev gradient fallback off the kink
    } else {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          J(i, j) = E.A->first_row()[static_cast<size_t>(std::abs(i - j))] / kTwoPi;
        }
        J(i, i) -= h * E.nl.fprime(u[i]);
      }
      Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
      Eigen::VectorXd d = lu.solve(rv);
      if (!d.allFinite()) {
        throw SolverFailureError("newton_refine: Jacobian solve produced non-finite step");
      }
      step.assign(d.data(), d.data() + n);
      if (deflation_points && !deflation_points->empty()) {
        // eta(u) = prod_j (1 + 1/||u - s_j||_X^2)(1 + 1/||u + s_j||_X^2);
        // Sherman-Morrison gives the deflated Newton step as beta * step with
        // beta = eta / (eta + grad_eta . step).
        double log_eta = 0.0;
        std::vector<double> grad_over_eta(static_cast<size_t>(n), 0.0);
        for (const auto& s : *deflation_points) {
          for (double sign : {1.0, -1.0}) {
            std::vector<double> d2v(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) d2v[i] = u[i] - sign * s[i];
            const std::vector<double> Ad = E.A->apply(d2v);
            const double d2 = std::max(dot(d2v, Ad), 1e-30);
            const double factor = 1.0 + 1.0 / d2;
            log_eta += std::log(factor);
            const double coef = -2.0 / (d2 * d2 * factor);
            for (int i = 0; i < n; ++i) grad_over_eta[i] += coef * Ad[i];
          }
        }
        const double eta = std::exp(std::min(log_eta, 600.0));
        const double wTp = eta * dot(grad_over_eta, step);
        const double denom = eta + wTp;
        const double beta = (denom != 0.0) ? eta / denom : 2.0;
        for (double& x : step) x *= beta;
      }
    }

    const double base = std::sqrt(dot(r, r));
    double tau = 1.0;
    bool moved = false;
    while (tau > 1e-10) {
      std::vector<double> cand = axpy(u, -tau, step);
      if (keep_odd) project_odd(cand);
      try {
        const std::vector<double> rc = algebraic_residual(E, cand);
        if (std::sqrt(dot(rc, rc)) <= (1.0 - cfg.armijo_c * tau) * base) {
          u = std::move(cand);
          moved = true;
          break;
        }
      } catch (const OverflowError&) {
        // shrink the step until representable
      }
      tau *= 0.5;
    }
    if (!moved) {
      out.u = best_u;
      out.residual = best_res;
      out.iterations = it + 1;
      return out;
    }
  }
  out.u = best_u;
  out.residual = best_res;
  out.iterations = cfg.newton_max_iterations;
  return out;
}

}  // namespace

double energy(const EnergyFunctional& E, const GridFunction& u) {
  if (!u.grid.same_as(E.grid())) throw GridMismatchError("energy: grid mismatch");
  const double quad = E.A->quadratic_form(u);
  const double nonlinear = integrate_nodal(u, E.nl.F);
  return quad / kFourPi - nonlinear;
}

GradientResult gradient(const EnergyFunctional& E, const GridFunction& u) {
  if (!u.grid.same_as(E.grid())) throw GridMismatchError("gradient: grid mismatch");
  GradientResult out;
  out.algebraic = algebraic_residual(E, u.values);
  DualSolver dual{E.A, {}};
  std::vector<double> g = dual.sobolev(out.algebraic);
  out.residual = DualSolver::dual_norm(out.algebraic, g);
  out.sobolev = GridFunction(u.grid, std::move(g));
  return out;
}

GridFunction find_endpoint(const EnergyFunctional& E, const GridFunction& direction) {
  if (!direction.grid.same_as(E.grid())) throw GridMismatchError("find_endpoint: grid mismatch");
  const double dn = xnorm_of(*E.A, direction.values);
  if (!(dn > 0.0)) throw InvalidArgumentError("find_endpoint: direction must be nonzero");
  std::vector<double> d = direction.values;
  for (double& x : d) x /= dn;

  double t = 1.0;
  const double t_cap = std::ldexp(1.0, 60);
  while (t <= t_cap) {
    std::vector<double> e(d.size());
    for (size_t i = 0; i < d.size(); ++i) e[i] = t * d[i];
    double phi = energy_clamped(E, e);
    if (phi == kNegInf) {
      // back off to the largest representable scaling with phi < -1
      double tb = t;
      while (phi == kNegInf && tb > 1.0) {
        tb *= 0.75;
        for (size_t i = 0; i < d.size(); ++i) e[i] = tb * d[i];
        phi = energy_clamped(E, e);
      }
      if (phi < -1.0) return GridFunction(E.grid(), std::move(e));
      throw NonConvergenceError("find_endpoint: energy overflow before reaching phi < -1");
    }
    if (phi < -1.0) return GridFunction(E.grid(), std::move(e));
    t *= 2.0;
  }
  throw NonConvergenceError(
      "find_endpoint: phi(t d) >= -1 up to t = 2^60; growth hypotheses likely violated");
}

namespace {

// Resample a polyline into m points uniformly by X-norm arclength.
std::vector<std::vector<double>> resample_polyline(const GagliardoForm& A,
                                                   const std::vector<std::vector<double>>& poly,
                                                   size_t m) {
  const size_t p = poly.size();
  std::vector<double> cum(p, 0.0);
  for (size_t j = 0; j + 1 < p; ++j) {
    std::vector<double> diff(poly[j].size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = poly[j + 1][i] - poly[j][i];
    cum[j + 1] = cum[j] + xnorm_of(A, diff);
  }
  const double total = cum.back();
  std::vector<std::vector<double>> out;
  out.reserve(m);
  out.push_back(poly.front());
  for (size_t j = 1; j + 1 < m; ++j) {
    const double s = total * static_cast<double>(j) / static_cast<double>(m - 1);
    size_t k = static_cast<size_t>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin());
    k = std::min(std::max<size_t>(k, 1), p - 1) - 1;
    const double seg = cum[k + 1] - cum[k];
    const double t = seg > 0.0 ? (s - cum[k]) / seg : 0.0;
    std::vector<double> z(poly[k].size());
    for (size_t i = 0; i < z.size(); ++i) z[i] = (1.0 - t) * poly[k][i] + t * poly[k + 1][i];
    out.push_back(std::move(z));
  }
  out.push_back(poly.back());
  return out;
}

MPResult mp_run(const EnergyFunctional& E, const MPConfig& cfg,
                std::vector<std::vector<double>> path, bool keep_odd) {
  const size_t P = path.size();
  if (P < 3) throw InvalidArgumentError("mountain_pass: path needs at least 3 points");

  std::vector<double> seg(path.back().size());
  for (size_t i = 0; i < seg.size(); ++i) seg[i] = path.back()[i] - path.front()[i];
  const double spacing = xnorm_of(*E.A, seg) / static_cast<double>(P - 1);

  DualSolver dual{E.A, {}};
  std::vector<double> levels;
  levels.reserve(256);
  double engage = cfg.newton_engage;
  int stall = 0;

  const double nontrivial_norm = 100.0 * cfg.descent_tol;

  auto finish = [&](std::vector<double> u, int outer) {
    NewtonOutcome polished = newton_iterate(E, u, cfg, nullptr, keep_odd);
    const std::vector<double>& final_u = polished.converged ? polished.u : u;
    MPResult res;
    res.solution = GridFunction(E.grid(), final_u);
    res.level_c = energy(E, res.solution);
    std::vector<double> r = algebraic_residual(E, final_u);
    std::vector<double> g = dual.sobolev(r);
    res.residual = DualSolver::dual_norm(r, g);
    res.path_levels = levels;
    res.iterations = outer;
    res.refined = polished.converged;
    return res;
  };

  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    // interior maximum, ties -> smallest index
    size_t jstar = 1;
    double pmax = kNegInf;
    std::vector<double> pl(P, kNegInf);
    for (size_t j = 1; j + 1 < P; ++j) {
      pl[j] = energy_clamped(E, path[j]);
      if (pl[j] > pmax) {
        pmax = pl[j];
        jstar = j;
      }
    }
    std::vector<double>& z = path[jstar];
    std::vector<double> r = algebraic_residual(E, z);
    std::vector<double> g = dual.sobolev(r);
    const double res = DualSolver::dual_norm(r, g);
    levels.push_back(pmax);

    if (res <= cfg.descent_tol) return finish(z, outer);
    if (res <= engage) {
      NewtonOutcome attempt = newton_iterate(E, z, cfg, nullptr, keep_odd);
      if (attempt.converged && xnorm_of(*E.A, attempt.u) > nontrivial_norm) {
        MPResult out;
        out.solution = GridFunction(E.grid(), attempt.u);
        out.level_c = energy(E, out.solution);
        out.residual = attempt.residual;
        out.path_levels = levels;
        out.iterations = outer;
        out.refined = true;
        return out;
      }
      engage *= 0.5;
    }

    // one backtracking descent step on the maximal point, capped so the point
    // cannot jump past the crest region
    const double gnorm = xnorm_of(*E.A, g);
    double tau = std::min(cfg.step_init, cfg.step_cap_fraction * spacing / std::max(gnorm, 1e-300));
    const double slope = dot(r, g);
    bool moved = false;
    while (tau > 1e-16) {
      std::vector<double> cand = axpy(z, -tau, g);
      const double pc = energy_clamped(E, cand);
      if (pc != kNegInf && pc <= pmax - cfg.armijo_c * tau * slope) {
        z = std::move(cand);
        moved = true;
        break;
      }
      tau *= cfg.step_backtrack;
    }
    if (!moved && ++stall > 50) {
      throw NonConvergenceError("mountain_pass: descent stalled before reaching tolerance", levels);
    }
    if (moved) stall = 0;
    if (keep_odd) project_odd(z);

    // pinned arclength resampling: keep the stepped maximum as a vertex,
    // redistribute each side so the crest stays resolved
    std::vector<std::vector<double>> left(path.begin(), path.begin() + jstar + 1);
    std::vector<std::vector<double>> right(path.begin() + jstar, path.end());
    left = resample_polyline(*E.A, left, jstar + 1);
    right = resample_polyline(*E.A, right, P - jstar);
    for (size_t j = 0; j < jstar; ++j) path[j] = std::move(left[j]);
    for (size_t j = jstar + 1; j < P; ++j) path[j] = std::move(right[j - jstar]);
    if (keep_odd) {
      for (size_t j = 1; j + 1 < P; ++j) project_odd(path[j]);
    }
  }
  throw NonConvergenceError("mountain_pass: max_outer exceeded", levels);
}

}  // namespace

namespace {
void validate(const MPConfig& cfg) {
  if (cfg.path_points < 3) throw InvalidArgumentError("MPConfig: path_points must be >= 3");
  if (!(cfg.descent_tol > 0.0) || !(cfg.newton_tol > 0.0) || !(cfg.step_init > 0.0) ||
      !(cfg.newton_engage > 0.0) || !(cfg.deflation_radius > 0.0)) {
    throw InvalidArgumentError("MPConfig: tolerances and steps must be positive");
  }
  if (cfg.max_outer < 1) throw InvalidArgumentError("MPConfig: max_outer must be positive");
}
}  // namespace

MPResult mountain_pass(const EnergyFunctional& E, const MPConfig& cfg,
                       const GridFunction& direction) {
  validate(cfg);
  if (!direction.grid.same_as(E.grid())) throw GridMismatchError("mountain_pass: grid mismatch");
  const bool keep_odd = E.nl.odd && is_odd_about_center(direction.values);

  GridFunction e = find_endpoint(E, direction);
  for (int restart = 0;; ++restart) {
    const size_t P = static_cast<size_t>(std::max(cfg.path_points, 3));
    std::vector<std::vector<double>> path(P);
    for (size_t j = 0; j < P; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(P - 1);
      path[j].resize(e.values.size());
      for (size_t i = 0; i < e.values.size(); ++i) path[j][i] = t * e.values[i];
    }
    MPResult res = mp_run(E, cfg, std::move(path), keep_odd);
    if (E.A->xnorm(res.solution) > 100.0 * cfg.descent_tol) return res;
    // collapsed to zero: restart with a longer path
    if (restart >= cfg.max_restarts) {
      throw NonConvergenceError("mountain_pass: collapsed to the trivial solution repeatedly",
                                res.path_levels);
    }
    for (double& x : e.values) x *= 2.0;
    const double pe = energy_clamped(E, e.values);
    if (!(pe < -1.0)) e = find_endpoint(E, GridFunction(E.grid(), e.values));
  }
}

MPResult mountain_pass_on_path(const EnergyFunctional& E, const MPConfig& cfg,
                               std::vector<GridFunction> path) {
  validate(cfg);
  if (path.size() < 3) throw InvalidArgumentError("mountain_pass_on_path: need >= 3 path points");
  std::vector<std::vector<double>> raw;
  raw.reserve(path.size());
  for (auto& p : path) {
    if (!p.grid.same_as(E.grid())) throw GridMismatchError("mountain_pass_on_path: grid mismatch");
    raw.push_back(std::move(p.values));
  }
  bool odd = E.nl.odd;
  for (const auto& v : raw) odd = odd && is_odd_about_center(v);
  return mp_run(E, cfg, std::move(raw), odd && raw.size() > 1);
}

GridFunction newton_refine(const EnergyFunctional& E, const GridFunction& u, const MPConfig& cfg,
                           NewtonReport* report) {
  if (!u.grid.same_as(E.grid())) throw GridMismatchError("newton_refine: grid mismatch");
  NewtonOutcome out = newton_iterate(E, u.values, cfg);
  if (report) {
    report->residual = out.residual;
    report->iterations = out.iterations;
    report->residual_history = out.history;
    report->best_iterate = GridFunction(E.grid(), out.u);
  }
  if (!out.converged) {
    std::ostringstream os;
    os << "newton_refine: no convergence (best residual " << out.residual << " after "
       << out.iterations << " iterations)";
    throw SolverFailureError(os.str(), out.history);
  }
  return GridFunction(E.grid(), out.u);
}

GridFunction deflated_newton(const EnergyFunctional& E, const GridFunction& start,
                             const std::vector<GridFunction>& known, const MPConfig& cfg,
                             bool* converged, NewtonReport* report) {
  if (!start.grid.same_as(E.grid())) throw GridMismatchError("deflated_newton: grid mismatch");
  std::vector<std::vector<double>> points;
  for (const auto& s : known) {
    if (!s.grid.same_as(E.grid())) throw GridMismatchError("deflated_newton: grid mismatch");
    points.push_back(s.values);
  }
  NewtonOutcome out = newton_iterate(E, start.values, cfg, &points);
  if (converged) *converged = out.converged;
  if (report) {
    report->residual = out.residual;
    report->iterations = out.iterations;
    report->residual_history = out.history;
    report->best_iterate = GridFunction(E.grid(), out.u);
  }
  return GridFunction(E.grid(), out.u);
}

std::vector<GridFunction> deflated_search(const EnergyFunctional& E, const MPConfig& cfg, int k) {
  std::vector<GridFunction> found;
  if (k <= 0) return found;

  const int n = E.grid().n;
  MassMatrix M = assemble_mass(E.grid());
  const int n_eigen = std::min(std::max(k + 1, 2), std::min(n, k + 3));
  EigenResult eig = smallest_eigenpairs(*E.A, M, n_eigen);

  std::vector<GridFunction> directions;
  directions.push_back(eig.eigenfunction);
  for (const auto& [lam, vec] : eig.higher) directions.push_back(vec);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int attempts = std::max(2 * k, k + 4);
  while (static_cast<int>(directions.size()) < attempts) {
    GridFunction d(E.grid());
    for (double& x : d.values) x = gauss(rng);
    directions.push_back(std::move(d));
  }

  auto distinct_mod_sign = [&](const std::vector<double>& u) {
    for (const auto& s : found) {
      std::vector<double> dm(u.size()), dp(u.size());
      for (size_t i = 0; i < u.size(); ++i) {
        dm[i] = u[i] - s.values[i];
        dp[i] = u[i] + s.values[i];
      }
      if (xnorm_of(*E.A, dm) <= cfg.deflation_radius || xnorm_of(*E.A, dp) <= cfg.deflation_radius) {
        return false;
      }
    }
    return true;
  };

  for (const auto& dir : directions) {
    if (static_cast<int>(found.size()) >= k) break;
    std::vector<double> candidate;
    try {
      MPResult mp = mountain_pass(E, cfg, dir);
      candidate = mp.solution.values;
    } catch (const Error&) {
      continue;  // this start failed; try the next direction
    }
    if (xnorm_of(*E.A, candidate) <= 100.0 * cfg.descent_tol) continue;
    if (!distinct_mod_sign(candidate)) {
      // rerun Newton on the deflated residual from a scaled start
      GridFunction start(E.grid(), candidate);
      for (double& x : start.values) x *= 1.05;
      bool ok = false;
      GridFunction alt = deflated_newton(E, start, found, cfg, &ok);
      if (!ok || xnorm_of(*E.A, alt.values) <= 100.0 * cfg.descent_tol ||
          !distinct_mod_sign(alt.values)) {
        continue;
      }
      candidate = alt.values;
    }
    found.emplace_back(E.grid(), candidate);
  }

  std::sort(found.begin(), found.end(), [&](const GridFunction& a, const GridFunction& b) {
    return energy(E, a) < energy(E, b);
  });
  return found;
}

HvResult check_Hv(const EnergyFunctional& E, const GridFunction& psi, double alpha0,
                  double omega_hat) {
  if (!psi.grid.same_as(E.grid())) throw GridMismatchError("check_Hv: grid mismatch");
  if (!(alpha0 > 0.0)) throw InvalidArgumentError("check_Hv: alpha0 must be positive");
  if (!(omega_hat > 0.0 && omega_hat <= M_PI + 1e-12)) {
    throw InvalidArgumentError("check_Hv: omega_hat must lie in (0, pi]");
  }
  const double pn = xnorm_of(*E.A, psi.values);
  if (!(pn > 0.0)) throw InvalidArgumentError("check_Hv: psi must be nonzero");
  std::vector<double> p = psi.values;
  double pmax = 0.0;
  for (double& x : p) {
    x /= pn;
    pmax = std::max(pmax, std::abs(x));
  }

  HvResult out;
  out.threshold = omega_hat / (2.0 * alpha0);

  const double h = E.grid().h;
  auto gval = [&](double t) -> double {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += E.nl.F(t * p[i]);
    return t * t / kFourPi - h * s;
  };

  const double step = 0.05 / std::max(pmax, 1e-12);
  double best_g = 0.0, best_t = 0.0;
  int decreasing = 0;
  bool capped = false;
  const long max_steps = 200000;
  for (long j = 1; j <= max_steps; ++j) {
    const double t = step * static_cast<double>(j);
    double gj;
    try {
      gj = gval(t);
    } catch (const OverflowError&) {
      capped = true;
      break;
    }
    if (gj > best_g) {
      best_g = gj;
      best_t = t;
      decreasing = 0;
    } else if (++decreasing >= 10) {
      break;
    }
    if (j == max_steps) capped = true;
  }
  if (capped && decreasing < 10) {
    out.verdict = HvVerdict::unbounded;
    out.sup_value = best_g;
    out.t_at_sup = best_t;
    return out;
  }

  // golden-section refinement around the scan maximum
  const double inv_phi = 0.6180339887498949;
  double a = std::max(best_t - step, 0.0), b = best_t + step;
  for (int it = 0; it < 200; ++it) {
    const double c1 = b - inv_phi * (b - a);
    const double c2 = a + inv_phi * (b - a);
    if (gval(c1) > gval(c2)) {
      b = c2;
    } else {
      a = c1;
    }
  }
  out.t_at_sup = 0.5 * (a + b);
  out.sup_value = std::max(gval(out.t_at_sup), best_g);
  out.verdict = out.sup_value < out.threshold ? HvVerdict::holds : HvVerdict::fails;
  return out;
}

}  // namespace halflap
