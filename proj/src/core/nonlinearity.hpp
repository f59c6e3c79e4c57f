#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace halflap {

enum class GrowthClass { subcritical, critical };

/// A nonlinearity f with primitive F (F(0)=0), one-sided derivative fprime
/// (right-hand at the kink |t|=1 of the built-in families) and log|f| for
/// growth tests that would overflow in linear scale.
struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> F;
  std::function<double(double)> fprime;
  std::function<double(double)> log_abs_f;  // may be empty for custom nonlinearities
  GrowthClass growth_class = GrowthClass::subcritical;
  double alpha0 = 0.0;  // critical exponent when growth_class == critical
  bool odd = false;
  double mu = 0.0;
  double q = 0.0;
  std::string name = "custom";

  bool has_kink_at_one = false;  // built-in families are only Lipschitz at |t|=1
};

/// f(t) = mu t on [0,1], mu t^{q-1} e^{t^q - 1} beyond, odd extension.
/// Requires 1 < q < 2, mu > 0.
Nonlinearity make_subcritical_example(double mu, double q);

/// f(t) = mu t on [0,1], mu t e^{alpha0 (t^2 - 1)} beyond, odd extension.
/// Requires mu > 0, alpha0 > 0.
Nonlinearity make_critical_example(double mu, double alpha0);

struct HypothesisVerdict {
  bool pass = false;
  std::string detail;
};

/// Sampled verdicts for the growth hypotheses; numerical evidence only, the
/// limits involved cannot be certified from finitely many evaluations.
struct HypothesisReport {
  HypothesisVerdict h1;  // 0 < F(t) <= M |f(t)| for |t| >= t0
  double t0 = 0.0;
  double M = 0.0;
  HypothesisVerdict h2;  // 0 < 2F(t) <= f(t) t for t != 0 (equality allowed)
  double h2_worst_margin = 0.0;
  HypothesisVerdict h3;  // limsup_{t->0} F(t)/t^2 < lambda1 / (4 pi)
  double h3_limsup_estimate = 0.0;
  double h3_threshold = 0.0;
  HypothesisVerdict h4;  // growth: subcritical decay for every alpha, or
                         // critical transition at alpha0 (H'(iv))
  double detected_alpha0 = 0.0;
  bool critical_variant = false;
  double lambda1_X = 0.0;
  double sample_min = 0.0;
  double sample_max = 0.0;
  bool all_pass() const { return h1.pass && h2.pass && h3.pass && h4.pass; }
};

/// Default sample grid: logarithmic near zero, dense mid-range, large-t tail,
/// both signs.
std::vector<double> default_hypothesis_grid();

HypothesisReport check_hypotheses(const Nonlinearity& nl, double lambda1_X,
                                  const std::vector<double>& t_grid);

}  // namespace halflap
