#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cg.hpp"
#include "nonlocal.hpp"
#include "oracles.hpp"
#include "spectrum.hpp"

using namespace halflap;

TEST_CASE("stiffness entries match the brute-force double-quadrature oracle") {
  Grid g = make_grid(0.0, 1.0, 2);
  GagliardoForm A = assemble_stiffness(g);
  REQUIRE(A.first_row().size() == 2);
  for (int k = 0; k < 2; ++k) {
    const double oracle = oracles::gagliardo_entry_bruteforce(k);
    CHECK(A.first_row()[k] ==
          doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("closed-form and series entry branches agree across the crossover") {
  // both evaluations are accurate near k = 6/7 where the implementation switches
  for (int k : {5, 6, 7, 8, 10}) {
    const double oracle = oracles::gagliardo_entry_bruteforce(k, 1e-11);
    CHECK(GagliardoForm::entry(k) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("first row is independent of the spacing (dilation invariance)") {
  // n = 16 with h = 1/17 and with h = 1/5
  GagliardoForm A1 = assemble_stiffness(make_grid(0.0, 1.0, 16));
  GagliardoForm A2 = assemble_stiffness(make_grid(0.0, 17.0 / 5.0, 16));
  for (int k = 0; k < 16; ++k) {
    CHECK(std::abs(A1.first_row()[k] - A2.first_row()[k]) <= 1e-12);
  }
}

TEST_CASE("leading entries: positive diagonal dominating the first off-diagonal") {
  GagliardoForm A = assemble_stiffness(make_grid(0.0, 1.0, 8));
  CHECK(A.first_row()[0] > 0.0);
  CHECK(A.first_row()[0] > std::abs(A.first_row()[1]));
  for (int k = 1; k < 8; ++k) CHECK(A.first_row()[k] < 0.0);
}

TEST_CASE("Toeplitz tail decays like k^{-2} and rows sum towards zero") {
  const int n = 2048;
  GagliardoForm A = assemble_stiffness(make_grid(0.0, 1.0, n));
  // reference constant measured once at high accuracy from the series tail
  const double c = std::abs(GagliardoForm::entry(100000)) * 1.0e10;
  for (int k = 4; k < n; k += 13) {
    const double scaled = std::abs(A.first_row()[k]) * static_cast<double>(k) * k;
    CHECK(scaled >= 0.5 * c);
    CHECK(scaled <= 2.0 * c);
  }
  // the bi-infinite rows annihilate constants: a_0 + 2 sum a_k -> 0 like 4/K
  double partial = A.first_row()[0];
  for (int k = 1; k < n; ++k) partial += 2.0 * A.first_row()[k];
  CHECK(partial == doctest::Approx(4.0 / n).epsilon(0.02));
}

TEST_CASE("quadratic form: zero, single hat, analytic limit") {
  Grid g = make_grid(0.0, 1.0, 31);
  GagliardoForm A = assemble_stiffness(g);
  GridFunction zero(g);
  CHECK(A.quadratic_form(zero) == 0.0);

  // one nodal value 1: the energy of the reference hat, independent of n and h
  const double hat_energy = oracles::gagliardo_entry_bruteforce(0);
  for (const Grid& gg : {make_grid(0.0, 1.0, 9), make_grid(-3.0, 5.0, 17)}) {
    GagliardoForm AA = assemble_stiffness(gg);
    GridFunction e(gg);
    e.values[gg.n / 2] = 1.0;
    CHECK(AA.quadratic_form(e) == doctest::Approx(hat_energy).epsilon(1e-8));
  }

  // interpolant of sqrt(1-x^2) on (-1,1): energy tends to pi^2 from above
  double prev = 0.0;
  int level = 0;
  for (int n : {64, 256, 1024}) {
    Grid gs = make_grid(-1.0, 1.0, n);
    GagliardoForm As = assemble_stiffness(gs);
    GridFunction u = interpolate(gs, [](double x) { return std::sqrt(1.0 - x * x); });
    const double qf = As.quadratic_form(u);
    CHECK(qf > M_PI * M_PI);
    if (level > 0) CHECK(std::abs(qf - M_PI * M_PI) < std::abs(prev - M_PI * M_PI));
    prev = qf;
    ++level;
  }
  CHECK(prev == doctest::Approx(M_PI * M_PI).epsilon(5e-4));
}

TEST_CASE("quadratic form of smooth-bump interpolants converges to the Gagliardo integral") {
  auto bump = [](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(-0.1 / (x * (1.0 - x)));
  };
  const double target = oracles::gagliardo_seminorm_sq_bruteforce(bump, 0.0, 1.0, 1e-9);
  double prev_err = 0.0;
  int level = 0;
  for (int n : {32, 64, 128, 256}) {
    Grid g = make_grid(0.0, 1.0, n);
    GagliardoForm A = assemble_stiffness(g);
    const double qf = A.quadratic_form(interpolate(g, bump));
    const double err = std::abs(qf - target);
    if (level > 0) CHECK(err < prev_err);
    prev_err = err;
    ++level;
  }
  CHECK(prev_err < 1e-3 * target);
}

TEST_CASE("SPD: random nonzero functions have positive energy") {
  Grid g = make_grid(0.0, 1.0, 57);
  GagliardoForm A = assemble_stiffness(g);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u(g);
    for (double& x : u.values) x = gauss(rng);
    CHECK(A.quadratic_form(u) > 0.0);
  }
}

TEST_CASE("apply: zero vector, fast path agreement, symmetry") {
  const int n = 1000;  // fast convolution path active
  Grid g = make_grid(0.0, 1.0, n);
  GagliardoForm A = assemble_stiffness(g);

  std::vector<double> zero(n, 0.0);
  for (double v : A.apply(zero)) CHECK(v == 0.0);

  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> v(n), w(n);
  for (int i = 0; i < n; ++i) {
    v[i] = unif(rng);
    w[i] = unif(rng);
  }
  const auto fast = A.apply(v);
  const auto direct = A.apply_direct(v);
  double maxdiff = 0.0;
  for (int i = 0; i < n; ++i) maxdiff = std::max(maxdiff, std::abs(fast[i] - direct[i]));
  CHECK(maxdiff <= 1e-12);

  const auto Aw = A.apply(w);
  double avw = 0.0, vaw = 0.0;
  for (int i = 0; i < n; ++i) {
    avw += fast[i] * w[i];
    vaw += v[i] * Aw[i];
  }
  CHECK(avw == doctest::Approx(vaw).epsilon(1e-12));

  CHECK_THROWS_AS(A.apply(std::vector<double>(5, 1.0)), InvalidArgumentError);
}

TEST_CASE("mass matrix entries and L2 convergence") {
  Grid g = make_grid(0.0, 1.0, 3);  // h = 0.25
  MassMatrix M = assemble_mass(g);
  CHECK(M.diagonal_consistent() == doctest::Approx(1.0 / 6.0));
  CHECK(M.offdiagonal_consistent() == doctest::Approx(1.0 / 24.0));
  CHECK(M.lumped() == doctest::Approx(0.25));

  // partition of unity: interior rows of the consistent matrix sum to h
  Grid gl = make_grid(0.0, 1.0, 9);
  MassMatrix Ml = assemble_mass(gl);
  const auto row_sums = Ml.apply_consistent(std::vector<double>(9, 1.0));
  for (int i = 1; i + 1 < 9; ++i) CHECK(row_sums[i] == doctest::Approx(gl.h).epsilon(1e-15));

  double prev_err = 0.0;
  int level = 0;
  for (int n : {32, 128, 512}) {
    Grid gn = make_grid(0.0, 1.0, n);
    MassMatrix Mn = assemble_mass(gn);
    GridFunction u = interpolate(gn, [](double x) { return std::sin(M_PI * x); });
    const double err = std::abs(Mn.quadratic_form_consistent(u) - 0.5);
    if (level > 0) CHECK(err < prev_err);
    prev_err = err;
    ++level;
  }
  CHECK(prev_err < 1e-5);
}

TEST_CASE("lumped and consistent mass agree to O(h^2) for smooth data") {
  double prev_gap = 0.0;
  int level = 0;
  for (int n : {32, 64, 128}) {
    Grid g = make_grid(0.0, 1.0, n);
    MassMatrix M = assemble_mass(g);
    GridFunction u = interpolate(g, [](double x) { return std::sin(M_PI * x); });
    const double gap =
        std::abs(M.quadratic_form_consistent(u) - M.quadratic_form_lumped(u));
    if (level > 0) CHECK(prev_gap / gap > 3.0);
    prev_gap = gap;
    ++level;
  }
}

TEST_CASE("linear Dirichlet solve: zero load, closed form, linearity") {
  Grid g = make_grid(-1.0, 1.0, 255);
  GagliardoForm A = assemble_stiffness(g);
  MassMatrix M = assemble_mass(g);

  GridFunction u0 = solve_dirichlet_linear(A, M, [](double) { return 0.0; });
  for (double v : u0.values) CHECK(v == 0.0);

  // g = 1 -> u = sqrt(1-x^2); interior max error decreases like C h^{1/2}
  double prev_err = 0.0;
  int level = 0;
  for (int n : {64, 128, 256}) {
    Grid gs = make_grid(-1.0, 1.0, n);
    GagliardoForm As = assemble_stiffness(gs);
    MassMatrix Ms = assemble_mass(gs);
    GridFunction u = solve_dirichlet_linear(As, Ms, [](double) { return 1.0; });
    double maxerr = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = gs.node(i);
      maxerr = std::max(maxerr, std::abs(u.values[i] - std::sqrt(1.0 - x * x)));
    }
    CHECK(maxerr <= 2.0 * std::sqrt(gs.h));
    if (level > 0) CHECK(maxerr < prev_err);
    prev_err = maxerr;
    ++level;
  }

  LinearSolveReport rep;
  GridFunction u1 = solve_dirichlet_linear(A, M, [](double) { return 1.0; }, &rep);
  CHECK(rep.n == 255);
  CHECK(rep.final_residual <= 1e-12);
  GridFunction u2 = solve_dirichlet_linear(A, M, [](double) { return 2.0; });
  for (int i = 0; i < g.n; ++i) {
    CHECK(u2.values[i] == doctest::Approx(2.0 * u1.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("discrete Poincare: L2 norm bounded through lambda1") {
  Grid g = make_grid(-1.0, 1.0, 127);
  GagliardoForm A = assemble_stiffness(g);
  MassMatrix M = assemble_mass(g);
  EigenResult eig = smallest_eigenpairs(A, M, 1);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u(g);
    for (double& x : u.values) x = gauss(rng);
    CHECK(M.quadratic_form_consistent(u) <= A.quadratic_form(u) / eig.lambda1_X);
  }
}

TEST_CASE("conjugate gradient accepts a diagonal preconditioner") {
  // Jacobi makes sense for shifted systems whose diagonal varies
  Grid g = make_grid(0.0, 1.0, 64);
  GagliardoForm A = assemble_stiffness(g);
  std::vector<double> shift(64);
  for (int i = 0; i < 64; ++i) shift[i] = 0.5 + 0.4 * std::sin(0.3 * i);
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    out = A.apply(v);
    for (int i = 0; i < 64; ++i) out[i] += shift[i] * v[i];
  };
  std::vector<double> b(64, 1.0);
  std::vector<double> diag(64);
  for (int i = 0; i < 64; ++i) diag[i] = A.first_row()[0] + shift[i];

  CGOptions plain;
  CGResult x0 = conjugate_gradient(apply, b, plain);
  CGOptions pre;
  pre.diagonal_preconditioner = &diag;
  CGResult x1 = conjugate_gradient(apply, b, pre);
  for (int i = 0; i < 64; ++i) CHECK(x1.x[i] == doctest::Approx(x0.x[i]).epsilon(1e-10));
}

TEST_CASE("conjugate gradient exhausts its budget with a residual history") {
  Grid g = make_grid(0.0, 1.0, 64);
  GagliardoForm A = assemble_stiffness(g);
  std::vector<double> b(64, 1.0);
  CGOptions opts;
  opts.max_iterations = 2;
  opts.keep_history = true;
  try {
    conjugate_gradient(
        [&A](const std::vector<double>& v, std::vector<double>& out) { out = A.apply(v); }, b,
        opts);
    FAIL("expected SolverFailureError");
  } catch (const SolverFailureError& e) {
    CHECK(!e.residual_history().empty());
  }
}

TEST_CASE("quadratic form rejects mismatched grids") {
  GagliardoForm A = assemble_stiffness(make_grid(0.0, 1.0, 8));
  GridFunction u(make_grid(0.0, 1.0, 9));
  CHECK_THROWS_AS(A.quadratic_form(u), GridMismatchError);
}
