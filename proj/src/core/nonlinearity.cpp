#include "nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grid.hpp"

namespace halflap {

namespace {
constexpr double kFourPi = 12.566370614359172953850573533118;
}

Nonlinearity make_subcritical_example(double mu, double q) {
  if (!(q > 1.0 && q < 2.0)) {
    std::ostringstream os;
    os << "make_subcritical_example: q must satisfy 1 < q < 2, got q=" << q;
    throw InvalidArgumentError(os.str());
  }
  if (!(mu > 0.0)) {
    throw InvalidArgumentError("make_subcritical_example: mu must be positive");
  }
  Nonlinearity nl;
  nl.mu = mu;
  nl.q = q;
  nl.odd = true;
  nl.growth_class = GrowthClass::subcritical;
  nl.name = "ex1";
  nl.has_kink_at_one = true;
  nl.f = [mu, q](double t) {
    const double a = std::abs(t);
    if (a <= 1.0) return mu * t;
    const double v = mu * std::pow(a, q - 1.0) * checked_exp(std::pow(a, q) - 1.0);
    return t > 0.0 ? v : -v;
  };
  nl.F = [mu, q](double t) {
    const double a = std::abs(t);
    if (a <= 1.0) return 0.5 * mu * t * t;
    return 0.5 * mu + (mu / q) * (checked_exp(std::pow(a, q) - 1.0) - 1.0);
  };
  nl.fprime = [mu, q](double t) {
    const double a = std::abs(t);
    if (a < 1.0) return mu;
    // right-hand derivative of the odd extension at |t| = 1 and beyond
    const double e = checked_exp(std::pow(a, q) - 1.0);
    return mu * e * ((q - 1.0) * std::pow(a, q - 2.0) + q * std::pow(a, 2.0 * q - 2.0));
  };
  nl.log_abs_f = [mu, q](double t) {
    const double a = std::abs(t);
    if (a == 0.0) return -std::numeric_limits<double>::infinity();
    if (a <= 1.0) return std::log(mu * a);
    return std::log(mu) + (q - 1.0) * std::log(a) + std::pow(a, q) - 1.0;
  };
  return nl;
}

Nonlinearity make_critical_example(double mu, double alpha0) {
  if (!(mu > 0.0) || !(alpha0 > 0.0)) {
    throw InvalidArgumentError("make_critical_example: mu and alpha0 must be positive");
  }
  Nonlinearity nl;
  nl.mu = mu;
  nl.alpha0 = alpha0;
  nl.odd = true;
  nl.growth_class = GrowthClass::critical;
  nl.name = "ex2";
  nl.has_kink_at_one = true;
  nl.f = [mu, alpha0](double t) {
    const double a = std::abs(t);
    if (a <= 1.0) return mu * t;
    const double v = mu * a * checked_exp(alpha0 * (a * a - 1.0));
    return t > 0.0 ? v : -v;
  };
  nl.F = [mu, alpha0](double t) {
    const double a = std::abs(t);
    if (a <= 1.0) return 0.5 * mu * t * t;
    return 0.5 * mu + mu * (checked_exp(alpha0 * (a * a - 1.0)) - 1.0) / (2.0 * alpha0);
  };
  nl.fprime = [mu, alpha0](double t) {
    const double a = std::abs(t);
    if (a < 1.0) return mu;
    const double e = checked_exp(alpha0 * (a * a - 1.0));
    return mu * e * (1.0 + 2.0 * alpha0 * a * a);
  };
  nl.log_abs_f = [mu, alpha0](double t) {
    const double a = std::abs(t);
    if (a == 0.0) return -std::numeric_limits<double>::infinity();
    if (a <= 1.0) return std::log(mu * a);
    return std::log(mu) + std::log(a) + alpha0 * (a * a - 1.0);
  };
  return nl;
}

std::vector<double> default_hypothesis_grid() {
  std::vector<double> grid;
  // log-spaced near zero, covers (0, 40]; negatives added by mirroring
  for (int i = 0; i <= 60; ++i) grid.push_back(1e-8 * std::pow(10.0, i * (8.0 / 60.0) * 0.999));
  for (double t = 0.05; t <= 5.0; t += 0.05) grid.push_back(t);
  for (double t = 5.25; t <= 40.0; t += 0.25) grid.push_back(t);
  const size_t m = grid.size();
  for (size_t i = 0; i < m; ++i) grid.push_back(-grid[i]);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

struct SafeEval {
  double f = 0.0, F = 0.0;
  bool ok = false;
};

SafeEval try_eval(const Nonlinearity& nl, double t) {
  SafeEval s;
  try {
    s.f = nl.f(t);
    s.F = nl.F(t);
    s.ok = std::isfinite(s.f) && std::isfinite(s.F);
  } catch (const OverflowError&) {
    s.ok = false;
  }
  return s;
}

}  // namespace

HypothesisReport check_hypotheses(const Nonlinearity& nl, double lambda1_X,
                                  const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InvalidArgumentError("check_hypotheses: empty sample grid");
  HypothesisReport rep;
  rep.lambda1_X = lambda1_X;
  rep.critical_variant = (nl.growth_class == GrowthClass::critical);

  std::vector<double> ts = t_grid;
  std::sort(ts.begin(), ts.end());
  rep.sample_min = ts.front();
  rep.sample_max = ts.back();

  // ---- H(ii): 0 < 2F(t) <= f(t) t on every evaluable sample (non-strict).
  {
    bool pass = true;
    double worst = std::numeric_limits<double>::infinity();
    std::ostringstream fail;
    for (double t : ts) {
      if (t == 0.0) continue;
      const SafeEval s = try_eval(nl, t);
      if (!s.ok) continue;
      const double lhs = 2.0 * s.F;
      const double rhs = s.f * t;
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(rhs);
      if (!(lhs > 0.0) || lhs > rhs + slack) {
        pass = false;
        fail << "violated at t=" << t << " (2F=" << lhs << ", f t=" << rhs << ")";
        break;
      }
      worst = std::min(worst, rhs - lhs);
    }
    rep.h2.pass = pass;
    rep.h2_worst_margin = std::isfinite(worst) ? worst : 0.0;
    rep.h2.detail = pass ? "0 < 2F <= f t on all samples (equality on the linear branch)"
                         : fail.str();
  }

  // ---- H(iii): max of F(t)/t^2 over small samples vs lambda1/(4 pi).
  {
    rep.h3_threshold = lambda1_X / kFourPi;
    double worst = 0.0;
    for (double t : ts) {
      if (t == 0.0 || std::abs(t) > 0.1) continue;
      const SafeEval s = try_eval(nl, t);
      if (!s.ok) continue;
      worst = std::max(worst, s.F / (t * t));
    }
    rep.h3_limsup_estimate = worst;
    rep.h3.pass = worst < rep.h3_threshold;
    std::ostringstream os;
    os << "limsup estimate " << worst << (rep.h3.pass ? " < " : " >= ") << rep.h3_threshold;
    rep.h3.detail = os.str();
  }

  // ---- H(i): find t0 where F, f stay positive and the ratio F/|f| is
  // non-increasing from there on; M = max ratio beyond t0.
  {
    std::vector<std::pair<double, double>> ratios;  // (t, F/|f|) for positive evaluable t
    for (double t : ts) {
      if (t < 1e-6) continue;
      const SafeEval s = try_eval(nl, t);
      if (!s.ok) continue;
      if (s.F > 0.0 && std::abs(s.f) > 0.0) ratios.emplace_back(t, s.F / std::abs(s.f));
    }
    bool found = false;
    size_t start = 0;
    for (size_t i = 0; i + 1 < ratios.size(); ++i) {
      if (ratios[i + 1].second <= ratios[i].second * (1.0 + 1e-12)) {
        // ratio stabilized (non-increasing from here): candidate t0
        bool mono = true;
        for (size_t j = i; j + 1 < ratios.size(); ++j) {
          if (ratios[j + 1].second > ratios[j].second * (1.0 + 1e-9)) {
            mono = false;
            break;
          }
        }
        if (mono) {
          start = i;
          found = true;
          break;
        }
      }
    }
    if (found && !ratios.empty()) {
      rep.t0 = ratios[start].first;
      double m = 0.0;
      for (size_t j = start; j < ratios.size(); ++j) m = std::max(m, ratios[j].second);
      rep.M = m;
      rep.h1.pass = true;
      std::ostringstream os;
      os << "0 < F <= M|f| for samples |t| >= " << rep.t0 << " with M=" << rep.M;
      rep.h1.detail = os.str();
    } else {
      rep.h1.pass = false;
      rep.h1.detail = "no t0 with positive F,f and stabilizing ratio found on the sample grid";
    }
  }

  // ---- H(iv) / H'(iv): growth ratio tests in log scale (never overflows).
  {
    if (!nl.log_abs_f) {
      rep.h4.pass = false;
      rep.h4.detail = "log|f| not provided; growth test skipped";
      return rep;
    }
    // slope of log|f| against t^2 on the sampled tail estimates alpha0
    const double tm = 0.5 * ts.back();
    const double tl = 0.75 * ts.back();
    const double th = ts.back();
    const double slope_mid = (nl.log_abs_f(tl) - nl.log_abs_f(tm)) / (tl * tl - tm * tm);
    const double slope_tail = (nl.log_abs_f(th) - nl.log_abs_f(tl)) / (th * th - tl * tl);
    rep.detected_alpha0 = std::max(0.0, slope_tail);
    if (!rep.critical_variant) {
      // subcritical means the slope of log|f| in t^2 vanishes at infinity: the
      // sampled slope must shrink along the tail, and any ladder alpha above
      // it already drives the ratio |f| e^{-alpha t^2} down in-sample.
      const bool slope_decaying = slope_tail < 0.97 * slope_mid + 1e-12;
      bool ladder_ok = true;
      std::ostringstream os;
      for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
        if (alpha < 2.0 * slope_tail) continue;  // not yet decisive at this sample range
        const double tail = nl.log_abs_f(th) - alpha * th * th;
        const double mid = nl.log_abs_f(tl) - alpha * tl * tl;
        if (!(tail < mid)) {
          ladder_ok = false;
          os << "ratio |f| e^{-alpha t^2} not decaying for alpha=" << alpha;
          break;
        }
      }
      rep.h4.pass = slope_decaying && ladder_ok;
      if (rep.h4.pass) {
        std::ostringstream ok;
        ok << "d log|f| / d t^2 shrinks along the tail (" << slope_mid << " -> " << slope_tail
           << "); ladder ratios decay";
        rep.h4.detail = ok.str();
      } else if (!slope_decaying) {
        std::ostringstream bad;
        bad << "growth exponent does not vanish: slope " << slope_mid << " -> " << slope_tail;
        rep.h4.detail = bad.str();
      } else {
        rep.h4.detail = os.str();
      }
    } else {
      // critical: ratio grows below the detected alpha0 and decays above it
      const double a_lo = 0.9 * rep.detected_alpha0;
      const double a_hi = 1.1 * rep.detected_alpha0;
      const bool grows = (nl.log_abs_f(th) - a_lo * th * th) > (nl.log_abs_f(tl) - a_lo * tl * tl);
      const bool decays = (nl.log_abs_f(th) - a_hi * th * th) < (nl.log_abs_f(tl) - a_hi * tl * tl);
      rep.h4.pass = grows && decays && rep.detected_alpha0 > 0.0;
      std::ostringstream os;
      os << "detected alpha0=" << rep.detected_alpha0 << "; ratio "
         << (grows ? "grows" : "does not grow") << " at 0.9 alpha0 and "
         << (decays ? "decays" : "does not decay") << " at 1.1 alpha0";
      rep.h4.detail = os.str();
    }
  }
  return rep;
}

}  // namespace halflap
