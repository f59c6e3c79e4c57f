#include "symmetry_tm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cg.hpp"

namespace halflap {

namespace {

// Neumaier-compensated sum.
double csum(const std::vector<double>& xs) {
  long double sum = 0.0L, comp = 0.0L;
  for (double x : xs) {
    const long double t = sum + static_cast<long double>(x);
    if (std::abs(static_cast<double>(sum)) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (static_cast<long double>(x) - t) + sum;
    }
    sum = t;
  }
  return static_cast<double>(sum + comp);
}

}  // namespace

GridFunction polarize(const GridFunction& u, double a_node) {
  const Grid& g = u.grid;
  for (int i = 0; i < g.n; ++i) {
    if (u.values[i] < 0.0) {
      std::ostringstream os;
      os << "polarize: requires u >= 0, found u[" << i << "]=" << u.values[i];
      throw InvalidArgumentError(os.str());
    }
  }
  // reflection x -> 2a - x maps nodes to nodes iff 2(a_node - g.a)/h is an integer
  const double idx2 = 2.0 * (a_node - g.a) / g.h;
  const double rounded = std::round(idx2);
  if (std::abs(idx2 - rounded) > 1e-9) {
    throw InvalidArgumentError("polarize: a_node must be a grid node or element midpoint");
  }
  const double mid = 0.5 * (g.a + g.b);
  if (a_node > mid + 1e-9 * (g.b - g.a)) {
    throw InvalidArgumentError(
        "polarize: a_node must not exceed the domain midpoint (the reflection would move mass "
        "outside the interval)");
  }
  const long long r2 = static_cast<long long>(rounded);  // node i reflects to r2 - 2 - i (0-based)

  auto value_at = [&](long long j) -> double {
    return (j >= 0 && j < g.n) ? u.values[static_cast<size_t>(j)] : 0.0;
  };

  GridFunction out(g);
  for (int i = 0; i < g.n; ++i) {
    const long long jr = r2 - 2 - i;  // index of the reflected node
    const double self = u.values[i];
    const double refl = value_at(jr);
    if (static_cast<long long>(2 * i) + 2 == r2) {
      out.values[i] = self;  // node on the reflection axis
    } else if (static_cast<long long>(2 * i) + 2 > r2) {
      out.values[i] = std::max(self, refl);  // x > a_node
    } else {
      out.values[i] = std::min(self, refl);  // x < a_node
    }
  }
  return out;
}

PolarizationReport verify_polarization_inequality(const GagliardoForm& A,
                                                  const EnergyFunctional& E, int trials,
                                                  std::uint64_t seed) {
  const Grid& g = A.grid();
  if (!g.symmetric_about_zero()) {
    throw InvalidArgumentError("verify_polarization_inequality: requires a grid symmetric about 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // valid reflection points: nodes and midpoints at or left of the center
  std::vector<double> candidates;
  for (int m = 1; m <= g.n + 1; ++m) {
    const double x = g.a + 0.5 * m * g.h;
    if (x <= 0.5 * (g.a + g.b) + 1e-15) candidates.push_back(x);
  }

  PolarizationReport rep;
  rep.trials = trials;
  std::vector<double> terms;
  auto nodal_F = [&](const std::vector<double>& v) {
    terms.clear();
    for (double x : v) terms.push_back(E.nl.F(x));
    return g.h * csum(terms);
  };

  for (int trial = 0; trial < trials; ++trial) {
    GridFunction u(g);
    if (trial % 2 == 0) {
      for (double& x : u.values) x = std::abs(gauss(rng));
    } else {
      // smooth random bump plus noise
      const double c = g.a + unif(rng) * (g.b - g.a);
      const double w = 0.05 + 0.3 * unif(rng);
      const double amp = 0.5 + 2.0 * unif(rng);
      for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        u.values[i] = amp * std::exp(-(x - c) * (x - c) / (2.0 * w * w)) + 0.1 * std::abs(gauss(rng));
      }
    }
    const double a_node = candidates[static_cast<size_t>(unif(rng) * candidates.size()) %
                                     candidates.size()];
    const GridFunction uh = polarize(u, a_node);

    const double q_before = A.quadratic_form_compensated(u.values);
    const double q_after = A.quadratic_form_compensated(uh.values);
    const double f_before = nodal_F(u.values);
    const double f_after = nodal_F(uh.values);

    const double e_margin = q_after - q_before;
    const double i_margin = std::abs(f_after - f_before);
    rep.worst_energy_margin = std::max(rep.worst_energy_margin, e_margin);
    rep.worst_integral_margin = std::max(rep.worst_integral_margin, i_margin);
    if (e_margin > 1e-12 || i_margin > 1e-12) {
      ++rep.violations;
      if (rep.counterexample.empty()) {
        std::ostringstream os;
        os << "trial " << trial << " a_node=" << a_node << " qf margin " << e_margin
           << " integral margin " << i_margin;
        rep.counterexample = os.str();
      }
    }
  }
  return rep;
}

SymmetryReport verify_symmetry(const GridFunction& u) {
  const Grid& g = u.grid;
  if (!g.symmetric_about_zero()) {
    throw InvalidArgumentError("verify_symmetry: requires a grid symmetric about 0");
  }
  SymmetryReport rep;
  const int n = g.n;
  for (int i = 0; i < n; ++i) {
    rep.evenness_defect = std::max(rep.evenness_defect, std::abs(u.values[i] - u.values[n - 1 - i]));
    rep.nonneg_defect = std::max(rep.nonneg_defect, -u.values[i]);
  }
  rep.nonneg_defect = std::max(rep.nonneg_defect, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    if (g.node(i) >= 0.0) {
      rep.monotonicity_defect = std::max(rep.monotonicity_defect, u.values[i + 1] - u.values[i]);
    }
  }
  rep.monotonicity_defect = std::max(rep.monotonicity_defect, 0.0);
  return rep;
}

TMProbeResult tm_probe(const GagliardoForm& A, double alpha, const TMProbeConfig& cfg,
                       const GridFunction* inject) {
  if (!(alpha > 0.0)) throw InvalidArgumentError("tm_probe: alpha must be positive");
  const Grid& g = A.grid();
  const int n = g.n;
  const double length = g.length();

  TMProbeResult best;
  best.alpha = alpha;
  best.restarts = cfg.restarts;
  best.sup_estimate = length;  // the u -> 0 limit

  auto xnorm = [&](const std::vector<double>& v) {
    const auto Av = A.apply(v);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[i] * Av[i];
    return std::sqrt(std::max(0.0, s));
  };
  // objective J(u) = (b-a) + h sum (e^{alpha u^2} - 1); nullopt marks the cap
  auto objective = [&](const std::vector<double>& v) -> std::optional<double> {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = alpha * v[i] * v[i];
      if (e > kExpCap) return std::nullopt;
      s += std::expm1(e);
    }
    return length + g.h * s;
  };

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> starts;
  if (inject) {
    if (!inject->grid.same_as(g)) throw GridMismatchError("tm_probe: inject grid mismatch");
    starts.push_back(inject->values);
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> v(static_cast<size_t>(n));
    for (double& x : v) x = gauss(rng);
    starts.push_back(std::move(v));
  }

  std::vector<double> grad(static_cast<size_t>(n));
  for (const auto& v0 : starts) {
    std::vector<double> u = v0;
    const double un = xnorm(u);
    if (!(un > 0.0)) continue;
    for (double& x : u) x /= un;
    auto J = objective(u);
    if (!J) {
      best.saturated = true;
      continue;
    }
    double step = cfg.step_init;
    std::vector<double> warm;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      for (int i = 0; i < n; ++i) {
        const double e = std::min(alpha * u[i] * u[i], kExpCap);
        grad[i] = g.h * 2.0 * alpha * u[i] * std::exp(e);
      }
      CGOptions opts;
      opts.rel_tol = 1e-10;
      if (warm.size() == grad.size()) opts.initial_guess = &warm;
      CGResult dir = conjugate_gradient(
          [&A](const std::vector<double>& x, std::vector<double>& out) { out = A.apply(x); }, grad,
          opts);
      warm = dir.x;
      std::vector<double> cand(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) cand[i] = u[i] + step * dir.x[i];
      const double cn = xnorm(cand);
      if (cn > 0.0) {
        for (double& x : cand) x /= cn;
      }
      const auto Jc = objective(cand);
      if (Jc && *Jc > *J) {
        u = std::move(cand);
        J = Jc;
      } else {
        if (!Jc) best.saturated = true;
        step *= 0.5;
        if (step < 1e-12) break;
      }
    }
    if (*J > best.sup_estimate) {
      best.sup_estimate = *J;
      best.maximizer = GridFunction(g, u);
    }
  }
  if (best.maximizer.values.empty()) {
    // even the zero-limit bound needs a representative
    best.maximizer = GridFunction(g);
  }
  return best;
}

}  // namespace halflap
