#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "grid.hpp"
#include "quadrature.hpp"

using namespace halflap;

TEST_CASE("make_grid computes spacing and nodes") {
  Grid g = make_grid(0.0, 1.0, 3);
  CHECK(g.h == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.node(0) == doctest::Approx(0.25));
  CHECK(g.node(1) == doctest::Approx(0.5));
  CHECK(g.node(2) == doctest::Approx(0.75));

  Grid s = make_grid(-1.0, 1.0, 7);
  CHECK(s.h == doctest::Approx(0.25));
  CHECK(s.symmetric_about_zero());
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0), InvalidArgumentError);
  CHECK_THROWS_AS(make_grid(1.0, 0.0, 4), InvalidArgumentError);
  CHECK_THROWS_AS(make_grid(0.0, 0.0, 4), InvalidArgumentError);
  CHECK_THROWS_AS(make_grid(std::nan(""), 1.0, 4), InvalidArgumentError);
}

TEST_CASE("interpolate hits nodal values and keeps exterior zero") {
  Grid g = make_grid(0.0, 1.0, 3);
  GridFunction zero = interpolate(g, [](double) { return 0.0; });
  for (double v : zero.values) CHECK(v == 0.0);

  GridFunction id = interpolate(g, [](double x) { return x; });
  CHECK(id.values[0] == doctest::Approx(0.25));
  CHECK(id.values[1] == doctest::Approx(0.5));
  CHECK(id.values[2] == doctest::Approx(0.75));
  CHECK(id.eval(-1.0) == 0.0);
  CHECK(id.eval(2.0) == 0.0);
  // interpolant is linear between nodes and drops to zero at the endpoints
  CHECK(id.eval(0.375) == doctest::Approx(0.375));
  CHECK(id.eval(0.125) == doctest::Approx(0.125));

  Grid s = make_grid(-1.0, 1.0, 9);
  GridFunction semi = interpolate(s, [](double x) { return std::sqrt(1.0 - x * x); });
  for (int i = 0; i < s.n; ++i) {
    CHECK(semi.values[i] == doctest::Approx(semi.values[s.n - 1 - i]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(interpolate(g, [](double x) { return x == 0.5 ? std::nan("") : x; }),
                  InvalidArgumentError);
}

TEST_CASE("integrate_nodal basic values") {
  Grid g = make_grid(0.0, 1.0, 3);
  GridFunction zero(g);
  auto square = [](double t) { return t * t; };
  CHECK(integrate_nodal(zero, square) == 0.0);

  GridFunction ones(g, {1.0, 1.0, 1.0});
  CHECK(integrate_nodal(ones, square) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("integrate_nodal subtracts g(0) so exterior tails vanish") {
  Grid g = make_grid(0.0, 1.0, 7);
  GridFunction zero(g);
  auto expish = [](double t) { return std::exp(t * t); };  // g(0) = 1
  CHECK(integrate_nodal(zero, expish) == 0.0);
}

TEST_CASE("integrate_nodal converges to the exact integral (sin^2 example)") {
  auto u_exact = [](double x) { return std::sin(M_PI * x); };
  auto gfun = [](double t) { return t * t; };
  const double ref = integrate_adaptive([&](double x) { return gfun(u_exact(x)); }, 0.0, 1.0,
                                        1e-13, 1e-15);
  CHECK(ref == doctest::Approx(0.5).epsilon(1e-10));  // int_0^1 sin^2 = 1/2
  Grid g = make_grid(0.0, 1.0, 512);
  CHECK(integrate_nodal(interpolate(g, u_exact), gfun) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("integrate_nodal converges at second order for smooth data") {
  // g with g'(0) != 0 so the Euler-Maclaurin boundary term is active
  auto u_exact = [](double x) { return x * (1.0 - x) * std::exp(x); };
  auto gfun = [](double t) { return t + t * t * t; };
  const double ref = integrate_adaptive([&](double x) { return gfun(u_exact(x)); }, 0.0, 1.0,
                                        1e-13, 1e-15);
  double prev_err = 0.0;
  int level = 0;
  for (int n : {64, 128, 256, 512}) {
    Grid g = make_grid(0.0, 1.0, n);
    GridFunction u = interpolate(g, u_exact);
    const double err = std::abs(integrate_nodal(u, gfun) - ref);
    if (level > 0) {
      CHECK(err < prev_err);
      CHECK(prev_err / err > 3.0);  // O(h^2) halving
    }
    prev_err = err;
    ++level;
  }
}

TEST_CASE("integrate_nodal is linear in g and reflection invariant") {
  Grid g = make_grid(0.0, 1.0, 33);
  GridFunction u = interpolate(g, [](double x) { return x * (1.0 - x) * std::exp(x); });
  auto g1 = [](double t) { return t * t; };
  auto g2 = [](double t) { return std::sin(t); };
  const double lhs = integrate_nodal(u, [&](double t) { return 2.0 * g1(t) + 3.0 * g2(t); });
  const double rhs = 2.0 * integrate_nodal(u, g1) + 3.0 * integrate_nodal(u, g2);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));

  GridFunction refl(g);
  for (int i = 0; i < g.n; ++i) refl.values[i] = u.values[g.n - 1 - i];
  CHECK(integrate_nodal(refl, g1) == doctest::Approx(integrate_nodal(u, g1)).epsilon(1e-14));
}

TEST_CASE("integrate_nodal reports the overflowing node") {
  Grid g = make_grid(0.0, 1.0, 3);
  GridFunction u(g, {1.0, 40.0, 1.0});
  auto growing = [](double t) { return checked_exp(t * t); };
  try {
    integrate_nodal(u, growing);
    FAIL("expected OverflowError");
  } catch (const OverflowError& e) {
    CHECK(e.node() == 1);
    CHECK(std::string(e.what()).find("node 1") != std::string::npos);
  }
}

TEST_CASE("checked_exp enforces the cap") {
  CHECK(checked_exp(1.0) == doctest::Approx(std::exp(1.0)));
  CHECK_THROWS_AS(checked_exp(700.5), OverflowError);
}

TEST_CASE("grid function CSV round-trips 17 significant digits") {
  Grid g = make_grid(0.0, 1.0, 2);
  GridFunction u(g, {M_PI, std::sqrt(2.0)});
  const std::string path = "test_grid_function.csv";
  write_csv(u, path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,u");
  double x = 0.0, v = 0.0;
  char comma = 0;
  in >> x >> comma >> v;
  CHECK(x == g.node(0));
  CHECK(v == M_PI);  // %.17g round-trips doubles exactly
  in >> x >> comma >> v;
  CHECK(v == std::sqrt(2.0));
  std::remove(path.c_str());
}
