#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "spectrum.hpp"
#include "symmetry_tm.hpp"

using namespace halflap;

namespace {

GridFunction even_bump(const Grid& g) {
  GridFunction u(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    u.values[i] = std::exp(-4.0 * x * x);
  }
  return u;
}

// compensated phi used by the 1e-12 comparisons
double energy_compensated(const GagliardoForm& A, const EnergyFunctional& E,
                          const GridFunction& u) {
  long double s = 0.0L;
  for (double v : u.values) s += static_cast<long double>(E.nl.F(v));
  return A.quadratic_form_compensated(u.values) / (2.0 * kTwoPi) -
         u.grid.h * static_cast<double>(s);
}

}  // namespace

TEST_CASE("polarize: fixed points, idempotence, value multiset") {
  Grid g = make_grid(-1.0, 1.0, 31);
  GridFunction u = even_bump(g);

  // an even decreasing bump is already polarized for any axis left of center:
  // polarization returns it unchanged, bit for bit, and is idempotent
  for (double a_node : {-0.5, -0.25, 0.0}) {
    GridFunction uh = polarize(u, a_node);
    for (int i = 0; i < g.n; ++i) CHECK(uh.values[i] == u.values[i]);
    GridFunction uhh = polarize(uh, a_node);
    for (int i = 0; i < g.n; ++i) CHECK(uhh.values[i] == uh.values[i]);
  }

  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  GridFunction r(g);
  for (double& x : r.values) x = unif(rng);
  const double a_node = -0.25;  // node-aligned: h = 1/16, 2(a-(-1))/h integer
  GridFunction rh = polarize(r, a_node);
  std::vector<double> before = r.values, after = rh.values;
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  CHECK(before == after);

  GridFunction rhh = polarize(rh, a_node);
  for (int i = 0; i < g.n; ++i) CHECK(rhh.values[i] == rh.values[i]);  // idempotent
}

TEST_CASE("polarize validates its inputs") {
  Grid g = make_grid(-1.0, 1.0, 31);
  GridFunction u = even_bump(g);
  CHECK_THROWS_AS(polarize(u, -0.123456), InvalidArgumentError);  // not node aligned
  CHECK_THROWS_AS(polarize(u, 0.5), InvalidArgumentError);        // beyond the midpoint
  GridFunction neg = u;
  neg.values[3] = -0.1;
  CHECK_THROWS_AS(polarize(neg, -0.25), InvalidArgumentError);
}

TEST_CASE("already-polarized bump: energies equal to 1e-12") {
  Grid g = make_grid(-1.0, 1.0, 63);
  GagliardoForm A(g);
  GridFunction u = even_bump(g);
  for (double a_node : {-0.5, -0.25}) {
    GridFunction uh = polarize(u, a_node);
    const double q0 = A.quadratic_form_compensated(u.values);
    const double q1 = A.quadratic_form_compensated(uh.values);
    CHECK(std::abs(q1 - q0) <= 1e-12);
  }
}

TEST_CASE("randomized polarization trials: no violations, integrals preserved") {
  Grid g = make_grid(-1.0, 1.0, 63);
  GagliardoForm A(g);
  MassMatrix M(g);
  EnergyFunctional E{&A, &M, make_subcritical_example(1.0, 1.5)};
  PolarizationReport rep = verify_polarization_inequality(A, E, 100, 777);
  CHECK(rep.trials == 100);
  CHECK(rep.violations == 0);
  CHECK(rep.worst_energy_margin <= 1e-12);
  CHECK(rep.worst_integral_margin <= 1e-12);
}

TEST_CASE("polarization never increases the energy functional") {
  Grid g = make_grid(-1.0, 1.0, 63);
  GagliardoForm A(g);
  MassMatrix M(g);
  EnergyFunctional E{&A, &M, make_subcritical_example(1.0, 1.5)};
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> unif(0.0, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    GridFunction u(g);
    for (double& x : u.values) x = unif(rng);
    GridFunction uh = polarize(u, -0.25);
    CHECK(energy_compensated(A, E, uh) <= energy_compensated(A, E, u) + 1e-12);
  }
}

TEST_CASE("verify_symmetry on analytic profiles") {
  Grid g = make_grid(-1.0, 1.0, 127);
  GridFunction semi = interpolate(g, [](double x) { return std::sqrt(1.0 - x * x); });
  SymmetryReport rep = verify_symmetry(semi);
  CHECK(rep.evenness_defect <= 1e-12);
  CHECK(rep.monotonicity_defect <= 1e-15);
  CHECK(rep.nonneg_defect == 0.0);
  CHECK(rep.pass(1e-8));

  GridFunction lin = interpolate(g, [](double x) { return x; });
  SymmetryReport odd = verify_symmetry(lin);
  CHECK(odd.evenness_defect == doctest::Approx(2.0 * g.node(g.n - 1)).epsilon(1e-12));
  CHECK(!odd.pass(1e-8));

  GridFunction wrong(make_grid(0.0, 1.0, 9));
  CHECK_THROWS_AS(verify_symmetry(wrong), InvalidArgumentError);
}

TEST_CASE("mountain-pass solution on the symmetric interval is even and monotone") {
  Grid g = make_grid(-1.0, 1.0, 64);
  GagliardoForm A(g);
  MassMatrix M(g);
  EigenResult eig = smallest_eigenpairs(A, M, 1);
  EnergyFunctional E{&A, &M,
                     make_subcritical_example(eig.lambda1_X / (2.0 * kTwoPi), 1.5)};
  MPConfig cfg;
  MPResult mp = mountain_pass(E, cfg, eig.eigenfunction);
  SymmetryReport rep = verify_symmetry(mp.solution);
  CHECK(rep.pass(1e-8));
}

TEST_CASE("tm_probe: zero-alpha limit, constraint maintenance, saturation flag") {
  Grid g = make_grid(0.0, 1.0, 96);
  GagliardoForm A(g);

  TMProbeResult tiny = tm_probe(A, 1e-6);
  CHECK(tiny.sup_estimate == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(tiny.sup_estimate >= g.length());

  TMProbeResult mid = tm_probe(A, 0.5);
  CHECK(!mid.saturated);
  CHECK(mid.sup_estimate > 1.0);
  GridFunction m = mid.maximizer;
  CHECK(std::abs(A.quadratic_form(m) - 1.0) <= 1e-10);

  CHECK_THROWS_AS(tm_probe(A, -1.0), InvalidArgumentError);
}

TEST_CASE("tm_probe is monotone in alpha with chained restarts") {
  Grid g = make_grid(0.0, 1.0, 64);
  GagliardoForm A(g);
  double prev = 0.0;
  GridFunction carry;
  const GridFunction* inject = nullptr;
  for (double alpha : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    TMProbeResult r = tm_probe(A, alpha, {}, inject);
    CHECK(r.sup_estimate >= prev);
    prev = r.sup_estimate;
    carry = r.maximizer;
    inject = &carry;
  }
}

TEST_CASE("tm_probe cannot decrease under nested refinement with injection") {
  Grid coarse = make_grid(0.0, 1.0, 63);
  Grid fine = make_grid(0.0, 1.0, 127);  // nodes of the coarse grid are kept
  GagliardoForm Ac(coarse), Af(fine);
  TMProbeResult rc = tm_probe(Ac, 1.0);
  GridFunction lifted = interpolate(fine, [&](double x) { return rc.maximizer.eval(x); });
  TMProbeResult rf = tm_probe(Af, 1.0, {}, &lifted);
  CHECK(rf.sup_estimate >= rc.sup_estimate - 1e-9);
}
