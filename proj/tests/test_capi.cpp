// Exercises the public extern-C surface the way an external client would:
// through halflap.h only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "halflap.h"

namespace {
double one(double, void*) { return 1.0; }
double identity(double x, void*) { return x; }
double square(double t, void*) { return t * t; }
}  // namespace

TEST_CASE("grid lifecycle and validation through the C API") {
  hl_grid* g = nullptr;
  CHECK(hl_grid_create(0.0, 1.0, 3, &g) == HL_OK);
  CHECK(hl_grid_size(g) == 3);
  CHECK(hl_grid_spacing(g) == doctest::Approx(0.25));
  CHECK(hl_grid_node(g, 1) == doctest::Approx(0.5));
  hl_grid_free(g);

  hl_grid* bad = nullptr;
  CHECK(hl_grid_create(0.0, 1.0, 0, &bad) == HL_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::string(hl_last_error()).find("n >= 1") != std::string::npos);
  CHECK(hl_grid_create(1.0, 0.0, 4, &bad) == HL_ERR_INVALID_ARGUMENT);
  CHECK(hl_grid_create(0.0, 1.0, 4, nullptr) == HL_ERR_NULL_POINTER);
  CHECK(std::string(hl_status_name(HL_ERR_OVERFLOW)) == "overflow");
}

TEST_CASE("functions, sampling and nodal integration") {
  hl_grid* g = nullptr;
  REQUIRE(hl_grid_create(0.0, 1.0, 3, &g) == HL_OK);

  hl_function* u = nullptr;
  REQUIRE(hl_function_sample(g, identity, nullptr, &u) == HL_OK);
  std::vector<double> vals(3);
  CHECK(hl_function_values(u, vals.data(), 3) == HL_OK);
  CHECK(vals[0] == doctest::Approx(0.25));
  CHECK(hl_function_eval(u, -2.0) == 0.0);

  double integral = 0.0;
  hl_function* ones = nullptr;
  const double three_ones[3] = {1.0, 1.0, 1.0};
  REQUIRE(hl_function_create(g, three_ones, 3, &ones) == HL_OK);
  CHECK(hl_integrate_nodal(ones, square, nullptr, &integral) == HL_OK);
  CHECK(integral == doctest::Approx(0.75));

  hl_function_free(ones);
  hl_function_free(u);
  hl_grid_free(g);
}

TEST_CASE("operator assembly, apply, linear solve via the C API") {
  hl_grid* g = nullptr;
  REQUIRE(hl_grid_create(-1.0, 1.0, 127, &g) == HL_OK);
  hl_operator* op = nullptr;
  REQUIRE(hl_operator_create(g, &op) == HL_OK);

  std::vector<double> row(127);
  CHECK(hl_operator_first_row(op, row.data(), 127) == HL_OK);
  CHECK(row[0] == doctest::Approx(8.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(hl_operator_first_row(op, row.data(), 5) == HL_ERR_INVALID_ARGUMENT);

  hl_function* u = nullptr;
  hl_linear_report rep{};
  REQUIRE(hl_solve_linear(op, one, nullptr, &u, &rep) == HL_OK);
  CHECK(rep.n == 127);
  CHECK(rep.final_residual <= 1e-12);
  std::vector<double> vals(127);
  CHECK(hl_function_values(u, vals.data(), 127) == HL_OK);
  CHECK(vals[63] == doctest::Approx(1.0).epsilon(0.05));  // sqrt(1-0) = 1 at center

  double qf = 0.0;
  CHECK(hl_operator_quadratic_form(op, u, &qf) == HL_OK);
  CHECK(qf == doctest::Approx(M_PI * M_PI).epsilon(0.05));

  hl_function_free(u);
  hl_operator_free(op);
  hl_grid_free(g);
}

TEST_CASE("eigen, mountain pass, symmetry and polarization via the C API") {
  hl_grid* g = nullptr;
  REQUIRE(hl_grid_create(-1.0, 1.0, 64, &g) == HL_OK);
  hl_operator* op = nullptr;
  REQUIRE(hl_operator_create(g, &op) == HL_OK);

  double lambda = 0.0;
  hl_eigen_report eig{};
  REQUIRE(hl_eigen_smallest(op, 1, &lambda, nullptr, &eig) == HL_OK);
  CHECK(eig.lambda1_spec == doctest::Approx(lambda / (2.0 * M_PI)));

  hl_nonlinearity* nl = nullptr;
  REQUIRE(hl_nonlinearity_subcritical(lambda / (4.0 * M_PI), 1.5, &nl) == HL_OK);
  CHECK(hl_nonlinearity_f(nl, 1.0) == doctest::Approx(lambda / (4.0 * M_PI)));
  CHECK(hl_nonlinearity_F(nl, 0.0) == 0.0);

  hl_mp_config cfg;
  hl_mp_config_defaults(&cfg);
  CHECK(cfg.path_points == 41);
  CHECK(cfg.descent_tol == doctest::Approx(1e-8));

  hl_function* sol = nullptr;
  hl_mp_report rep{};
  double* levels = nullptr;
  int levels_len = 0;
  REQUIRE(hl_mountain_pass(op, nl, &cfg, nullptr, &sol, &rep, &levels, &levels_len) == HL_OK);
  CHECK(rep.nontrivial == 1);
  CHECK(rep.residual <= 1e-8);
  CHECK(rep.level_c > 0.0);
  CHECK(levels_len > 0);
  hl_buffer_free(levels);

  double e = 0.0, r = 0.0;
  CHECK(hl_energy(op, nl, sol, &e) == HL_OK);
  CHECK(e == doctest::Approx(rep.level_c));
  CHECK(hl_energy_residual(op, nl, sol, &r) == HL_OK);
  CHECK(r <= 1e-8);

  hl_symmetry_report sym{};
  int pass = 0;
  CHECK(hl_verify_symmetry(sol, 1e-8, &sym, &pass) == HL_OK);
  CHECK(pass == 1);

  hl_function* pol = nullptr;
  CHECK(hl_polarize(sol, hl_grid_node(g, 15), &pol) == HL_OK);  // a node left of center
  hl_function_free(pol);
  CHECK(hl_polarize(sol, -0.513, &pol) == HL_ERR_INVALID_ARGUMENT);  // between nodes

  hl_polarization_report prep{};
  CHECK(hl_polarize_verify(op, nl, 25, 12345, &prep) == HL_OK);
  CHECK(prep.violations == 0);

  char* json = nullptr;
  REQUIRE(hl_check_hypotheses(nl, lambda, nullptr, 0, &json) == HL_OK);
  CHECK(std::string(json).find("\"all_pass\": true") != std::string::npos);
  hl_string_free(json);

  hl_function_free(sol);
  hl_nonlinearity_free(nl);
  hl_operator_free(op);
  hl_grid_free(g);
}

TEST_CASE("critical-family probes via the C API") {
  hl_grid* g = nullptr;
  REQUIRE(hl_grid_create(0.0, 1.0, 64, &g) == HL_OK);
  hl_operator* op = nullptr;
  REQUIRE(hl_operator_create(g, &op) == HL_OK);

  double lambda = 0.0;
  REQUIRE(hl_eigen_smallest(op, 1, &lambda, nullptr, nullptr) == HL_OK);
  hl_nonlinearity* nl = nullptr;
  REQUIRE(hl_nonlinearity_critical(lambda / (4.0 * M_PI), 1.0, &nl) == HL_OK);

  hl_hv_report hv{};
  CHECK(hl_check_hv(op, nl, nullptr, 1.0, M_PI, &hv) == HL_OK);
  CHECK(hv.threshold == doctest::Approx(M_PI / 2.0));
  CHECK(std::isfinite(hv.sup_value));

  hl_tm_config tmc;
  hl_tm_config_defaults(&tmc);
  tmc.restarts = 4;
  hl_tm_report tmr{};
  CHECK(hl_tm_probe(op, 0.5, &tmc, nullptr, nullptr, &tmr) == HL_OK);
  CHECK(tmr.saturated == 0);
  CHECK(tmr.sup_estimate >= 1.0);

  // invalid parameter surface
  hl_nonlinearity* bad = nullptr;
  CHECK(hl_nonlinearity_subcritical(1.0, 2.5, &bad) == HL_ERR_INVALID_ARGUMENT);
  CHECK(std::string(hl_last_error()).find("1 < q < 2") != std::string::npos);

  hl_nonlinearity_free(nl);
  hl_operator_free(op);
  hl_grid_free(g);
}

TEST_CASE("verification entry points exist and label criteria") {
  CHECK(hl_verify_criteria_count() == 12);
  // run the cheapest criterion end to end through the C surface
  hl_verify_result res{};
  CHECK(hl_verify_criterion(3, &res) == HL_OK);
  CHECK(res.criterion == 3);
  CHECK(res.pass == 1);
  CHECK(std::strlen(res.name) > 0);
}
