#include "halflap.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "core/energy_mp.hpp"
#include "core/nonlinearity.hpp"
#include "core/nonlocal.hpp"
#include "core/spectrum.hpp"
#include "core/symmetry_tm.hpp"
#include "core/verify.hpp"

using namespace halflap;

// Opaque handle definitions. Each wraps the immutable core object; the
// operator bundles stiffness and mass so one handle serves every solve.
struct hl_grid {
  Grid grid;
};
struct hl_function {
  GridFunction fn;
};
struct hl_operator {
  GagliardoForm A;
  MassMatrix M;
  explicit hl_operator(const Grid& g) : A(g), M(g) {}
};
struct hl_nonlinearity {
  Nonlinearity nl;
};

namespace {

thread_local std::string g_last_error;

hl_status set_error(hl_status code, const char* msg) {
  g_last_error = msg ? msg : "";
  return code;
}

hl_status map_error(const Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case ErrorCode::invalid_argument:
      return HL_ERR_INVALID_ARGUMENT;
    case ErrorCode::overflow:
      return HL_ERR_OVERFLOW;
    case ErrorCode::solver_failure:
      return HL_ERR_SOLVER_FAILURE;
    case ErrorCode::non_convergence:
      return HL_ERR_NONCONVERGENCE;
    case ErrorCode::grid_mismatch:
      return HL_ERR_GRID_MISMATCH;
    default:
      return HL_ERR_INTERNAL;
  }
}

// Every API body runs under this wrapper so exceptions never cross the ABI.
template <typename Fn>
hl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return map_error(e);
  } catch (const std::bad_alloc&) {
    return set_error(HL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(HL_ERR_INTERNAL, "unknown error");
  }
}

MPConfig to_core(const hl_mp_config* cfg) {
  MPConfig out;
  if (cfg) {
    out.path_points = cfg->path_points;
    out.descent_tol = cfg->descent_tol;
    out.max_outer = cfg->max_outer;
    out.step_init = cfg->step_init;
    out.newton_tol = cfg->newton_tol;
    out.newton_engage = cfg->newton_engage;
    out.deflation_radius = cfg->deflation_radius;
    out.seed = cfg->seed;
  }
  return out;
}

TMProbeConfig to_core(const hl_tm_config* cfg) {
  TMProbeConfig out;
  if (cfg) {
    out.restarts = cfg->restarts;
    out.max_iterations = cfg->max_iters;
    out.step_init = cfg->step_init;
    out.seed = cfg->seed;
  }
  return out;
}

GridFunction eigen_direction(const hl_operator* op) {
  EigenResult eig = smallest_eigenpairs(op->A, op->M, 1);
  return eig.eigenfunction;
}

void json_escape_append(std::string& out, const std::string& s) {
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
}

void fill_verify_result(const verify::CriterionResult& r, hl_verify_result* out) {
  out->criterion = r.index;
  out->pass = r.pass ? 1 : 0;
  out->seconds = r.seconds;
  std::snprintf(out->name, sizeof(out->name), "%s", r.name.c_str());
  std::snprintf(out->detail, sizeof(out->detail), "%s", r.detail.c_str());
}

void fill_mp_report(const hl_operator* op, const MPResult& mp, const MPConfig& cfg,
                    hl_mp_report* report) {
  if (!report) return;
  report->level_c = mp.level_c;
  report->residual = mp.residual;
  report->iterations = mp.iterations;
  report->refined = mp.refined ? 1 : 0;
  report->nontrivial = op->A.xnorm(mp.solution) > 100.0 * cfg.descent_tol ? 1 : 0;
}

}  // namespace

extern "C" {

const char* hl_last_error(void) { return g_last_error.c_str(); }

const char* hl_status_name(hl_status status) {
  switch (status) {
    case HL_OK: return "ok";
    case HL_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case HL_ERR_OVERFLOW: return "overflow";
    case HL_ERR_SOLVER_FAILURE: return "solver-failure";
    case HL_ERR_NONCONVERGENCE: return "non-convergence";
    case HL_ERR_GRID_MISMATCH: return "grid-mismatch";
    case HL_ERR_NULL_POINTER: return "null-pointer";
    case HL_ERR_IO: return "io-error";
    default: return "internal-error";
  }
}

hl_status hl_grid_create(double a, double b, int n, hl_grid** out) {
  if (!out) return set_error(HL_ERR_NULL_POINTER, "hl_grid_create: out is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new hl_grid{make_grid(a, b, n)};
    return HL_OK;
  });
}

void hl_grid_free(hl_grid* grid) { delete grid; }
int hl_grid_size(const hl_grid* grid) { return grid ? grid->grid.n : 0; }
double hl_grid_spacing(const hl_grid* grid) { return grid ? grid->grid.h : 0.0; }
double hl_grid_node(const hl_grid* grid, int i) {
  if (!grid || i < 0 || i >= grid->grid.n) return 0.0;
  return grid->grid.node(i);
}

hl_status hl_function_create(const hl_grid* grid, const double* values, int len,
                             hl_function** out) {
  if (!grid || !out) return set_error(HL_ERR_NULL_POINTER, "hl_function_create: NULL argument");
  *out = nullptr;
  return guarded([&] {
    GridFunction fn(grid->grid);
    if (values) {
      if (len != grid->grid.n) {
        throw InvalidArgumentError("hl_function_create: length does not match grid size");
      }
      fn.values.assign(values, values + len);
    }
    *out = new hl_function{std::move(fn)};
    return HL_OK;
  });
}

hl_status hl_function_sample(const hl_grid* grid, hl_sampler f, void* ctx, hl_function** out) {
  if (!grid || !f || !out) {
    return set_error(HL_ERR_NULL_POINTER, "hl_function_sample: NULL argument");
  }
  *out = nullptr;
  return guarded([&] {
    *out = new hl_function{interpolate(grid->grid, [&](double x) { return f(x, ctx); })};
    return HL_OK;
  });
}

void hl_function_free(hl_function* u) { delete u; }
int hl_function_size(const hl_function* u) { return u ? u->fn.grid.n : 0; }

hl_status hl_function_values(const hl_function* u, double* out, int len) {
  if (!u || !out) return set_error(HL_ERR_NULL_POINTER, "hl_function_values: NULL argument");
  if (len != u->fn.grid.n) {
    return set_error(HL_ERR_INVALID_ARGUMENT, "hl_function_values: wrong buffer length");
  }
  std::memcpy(out, u->fn.values.data(), sizeof(double) * static_cast<size_t>(len));
  return HL_OK;
}

double hl_function_eval(const hl_function* u, double x) { return u ? u->fn.eval(x) : 0.0; }

hl_status hl_function_write_csv(const hl_function* u, const char* path) {
  if (!u || !path) return set_error(HL_ERR_NULL_POINTER, "hl_function_write_csv: NULL argument");
  return guarded([&] {
    write_csv(u->fn, path);
    return HL_OK;
  });
}

hl_status hl_integrate_nodal(const hl_function* u, hl_sampler g, void* ctx, double* out) {
  if (!u || !g || !out) return set_error(HL_ERR_NULL_POINTER, "hl_integrate_nodal: NULL argument");
  return guarded([&] {
    *out = integrate_nodal(u->fn, [&](double t) { return g(t, ctx); });
    return HL_OK;
  });
}

hl_status hl_operator_create(const hl_grid* grid, hl_operator** out) {
  if (!grid || !out) return set_error(HL_ERR_NULL_POINTER, "hl_operator_create: NULL argument");
  *out = nullptr;
  return guarded([&] {
    *out = new hl_operator(grid->grid);
    return HL_OK;
  });
}

void hl_operator_free(hl_operator* op) { delete op; }

hl_status hl_operator_first_row(const hl_operator* op, double* out, int len) {
  if (!op || !out) return set_error(HL_ERR_NULL_POINTER, "hl_operator_first_row: NULL argument");
  if (len != op->A.size()) {
    return set_error(HL_ERR_INVALID_ARGUMENT, "hl_operator_first_row: wrong buffer length");
  }
  std::memcpy(out, op->A.first_row().data(), sizeof(double) * static_cast<size_t>(len));
  return HL_OK;
}

hl_status hl_operator_write_first_row_csv(const hl_operator* op, const char* path) {
  if (!op || !path) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    op->A.write_first_row_csv(path);
    return HL_OK;
  });
}

hl_status hl_operator_apply(const hl_operator* op, const double* v, double* out, int len) {
  if (!op || !v || !out) return set_error(HL_ERR_NULL_POINTER, "hl_operator_apply: NULL argument");
  return guarded([&] {
    std::vector<double> vin(v, v + len);
    std::vector<double> res = op->A.apply(vin);
    std::memcpy(out, res.data(), sizeof(double) * res.size());
    return HL_OK;
  });
}

hl_status hl_operator_quadratic_form(const hl_operator* op, const hl_function* u, double* out) {
  if (!op || !u || !out) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    *out = op->A.quadratic_form(u->fn);
    return HL_OK;
  });
}

hl_status hl_operator_mass_form(const hl_operator* op, const hl_function* u, int lumped,
                                double* out) {
  if (!op || !u || !out) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    *out = lumped ? op->M.quadratic_form_lumped(u->fn) : op->M.quadratic_form_consistent(u->fn);
    return HL_OK;
  });
}

hl_status hl_solve_linear(const hl_operator* op, hl_sampler g, void* ctx, hl_function** out,
                          hl_linear_report* report) {
  if (!op || !g || !out) return set_error(HL_ERR_NULL_POINTER, "hl_solve_linear: NULL argument");
  *out = nullptr;
  return guarded([&] {
    LinearSolveReport rep;
    GridFunction u =
        solve_dirichlet_linear(op->A, op->M, [&](double x) { return g(x, ctx); }, &rep);
    if (report) {
      report->n = rep.n;
      report->iterations = rep.iterations;
      report->final_residual = rep.final_residual;
    }
    *out = new hl_function{std::move(u)};
    return HL_OK;
  });
}

hl_status hl_eigen_smallest(const hl_operator* op, int k, double* lambdas,
                            hl_function** eigenfunctions, hl_eigen_report* report) {
  if (!op || !lambdas) return set_error(HL_ERR_NULL_POINTER, "hl_eigen_smallest: NULL argument");
  return guarded([&] {
    EigenResult eig = smallest_eigenpairs(op->A, op->M, k);
    lambdas[0] = eig.lambda1_X;
    for (int j = 1; j < k; ++j) lambdas[j] = eig.higher[static_cast<size_t>(j - 1)].first;
    if (eigenfunctions) {
      eigenfunctions[0] = new hl_function{eig.eigenfunction};
      for (int j = 1; j < k; ++j) {
        eigenfunctions[j] = new hl_function{eig.higher[static_cast<size_t>(j - 1)].second};
      }
    }
    if (report) {
      report->lambda1_X = eig.lambda1_X;
      report->lambda1_spec = eig.lambda1_spec;
      report->residual = eig.residual;
      report->iterations = eig.iterations;
    }
    return HL_OK;
  });
}

hl_status hl_nonlinearity_subcritical(double mu, double q, hl_nonlinearity** out) {
  if (!out) return set_error(HL_ERR_NULL_POINTER, "out is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new hl_nonlinearity{make_subcritical_example(mu, q)};
    return HL_OK;
  });
}

hl_status hl_nonlinearity_critical(double mu, double alpha0, hl_nonlinearity** out) {
  if (!out) return set_error(HL_ERR_NULL_POINTER, "out is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new hl_nonlinearity{make_critical_example(mu, alpha0)};
    return HL_OK;
  });
}

void hl_nonlinearity_free(hl_nonlinearity* nl) { delete nl; }

double hl_nonlinearity_f(const hl_nonlinearity* nl, double t) {
  if (!nl) return 0.0;
  try {
    return nl->nl.f(t);
  } catch (...) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double hl_nonlinearity_F(const hl_nonlinearity* nl, double t) {
  if (!nl) return 0.0;
  try {
    return nl->nl.F(t);
  } catch (...) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

hl_status hl_check_hypotheses(const hl_nonlinearity* nl, double lambda1_X, const double* t_grid,
                              int len, char** json_out) {
  if (!nl || !json_out) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  *json_out = nullptr;
  return guarded([&] {
    std::vector<double> grid;
    if (t_grid && len > 0) {
      grid.assign(t_grid, t_grid + len);
    } else {
      grid = default_hypothesis_grid();
    }
    HypothesisReport rep = check_hypotheses(nl->nl, lambda1_X, grid);

    char buf[512];
    std::string js = "{\n  \"schema\": 1,\n  \"kind\": \"hypothesis-report\",\n";
    js += "  \"note\": \"numerical evidence from sampled t, not a proof\",\n";
    std::snprintf(buf, sizeof(buf), "  \"family\": \"%s\",\n", nl->nl.name.c_str());
    js += buf;
    std::snprintf(buf, sizeof(buf), "  \"lambda1_X\": %.17g,\n", rep.lambda1_X);
    js += buf;
    std::snprintf(buf, sizeof(buf), "  \"sample_min\": %.17g,\n  \"sample_max\": %.17g,\n",
                  rep.sample_min, rep.sample_max);
    js += buf;
    auto verdict = [&](const char* key, const HypothesisVerdict& v, bool last = false) {
      js += "  \"";
      js += key;
      js += "\": {\"pass\": ";
      js += v.pass ? "true" : "false";
      js += ", \"detail\": \"";
      json_escape_append(js, v.detail);
      js += last ? "\"}\n" : "\"},\n";
    };
    verdict("H1", rep.h1);
    std::snprintf(buf, sizeof(buf), "  \"t0\": %.17g,\n  \"M\": %.17g,\n", rep.t0, rep.M);
    js += buf;
    verdict("H2", rep.h2);
    verdict("H3", rep.h3);
    std::snprintf(buf, sizeof(buf),
                  "  \"H3_limsup_estimate\": %.17g,\n  \"H3_threshold\": %.17g,\n",
                  rep.h3_limsup_estimate, rep.h3_threshold);
    js += buf;
    verdict(rep.critical_variant ? "H4_prime" : "H4", rep.h4);
    std::snprintf(buf, sizeof(buf), "  \"detected_alpha0\": %.17g,\n  \"all_pass\": %s\n}\n",
                  rep.detected_alpha0, rep.all_pass() ? "true" : "false");
    js += buf;

    char* mem = static_cast<char*>(std::malloc(js.size() + 1));
    if (!mem) throw std::bad_alloc();
    std::memcpy(mem, js.c_str(), js.size() + 1);
    *json_out = mem;
    return HL_OK;
  });
}

hl_status hl_hypotheses_pass(const hl_nonlinearity* nl, double lambda1_X, int* pass) {
  if (!nl || !pass) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    HypothesisReport rep = check_hypotheses(nl->nl, lambda1_X, default_hypothesis_grid());
    *pass = rep.all_pass() ? 1 : 0;
    return HL_OK;
  });
}

void hl_string_free(char* s) { std::free(s); }
void hl_buffer_free(double* buf) { std::free(buf); }

void hl_mp_config_defaults(hl_mp_config* cfg) {
  if (!cfg) return;
  MPConfig d;
  cfg->path_points = d.path_points;
  cfg->descent_tol = d.descent_tol;
  cfg->max_outer = d.max_outer;
  cfg->step_init = d.step_init;
  cfg->newton_tol = d.newton_tol;
  cfg->newton_engage = d.newton_engage;
  cfg->deflation_radius = d.deflation_radius;
  cfg->seed = d.seed;
}

hl_status hl_energy(const hl_operator* op, const hl_nonlinearity* nl, const hl_function* u,
                    double* out) {
  if (!op || !nl || !u || !out) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    EnergyFunctional E{&op->A, &op->M, nl->nl};
    *out = energy(E, u->fn);
    return HL_OK;
  });
}

hl_status hl_energy_residual(const hl_operator* op, const hl_nonlinearity* nl,
                             const hl_function* u, double* out) {
  if (!op || !nl || !u || !out) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    EnergyFunctional E{&op->A, &op->M, nl->nl};
    *out = gradient(E, u->fn).residual;
    return HL_OK;
  });
}

hl_status hl_mountain_pass(const hl_operator* op, const hl_nonlinearity* nl,
                           const hl_mp_config* cfg, const hl_function* direction,
                           hl_function** solution, hl_mp_report* report, double** path_levels,
                           int* path_levels_len) {
  if (!op || !nl || !solution) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  *solution = nullptr;
  return guarded([&] {
    EnergyFunctional E{&op->A, &op->M, nl->nl};
    const MPConfig core_cfg = to_core(cfg);
    GridFunction dir = direction ? direction->fn : eigen_direction(op);
    MPResult mp = mountain_pass(E, core_cfg, dir);
    fill_mp_report(op, mp, core_cfg, report);
    if (path_levels && path_levels_len) {
      const size_t len = mp.path_levels.size();
      double* buf = static_cast<double*>(std::malloc(sizeof(double) * std::max<size_t>(len, 1)));
      if (!buf) throw std::bad_alloc();
      std::memcpy(buf, mp.path_levels.data(), sizeof(double) * len);
      *path_levels = buf;
      *path_levels_len = static_cast<int>(len);
    }
    *solution = new hl_function{std::move(mp.solution)};
    return HL_OK;
  });
}

hl_status hl_multi_solve(const hl_operator* op, const hl_nonlinearity* nl,
                         const hl_mp_config* cfg, int k, hl_function** solutions, int* found) {
  if (!op || !nl || !solutions || !found) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  *found = 0;
  return guarded([&] {
    EnergyFunctional E{&op->A, &op->M, nl->nl};
    std::vector<GridFunction> sols = deflated_search(E, to_core(cfg), k);
    for (size_t i = 0; i < sols.size(); ++i) solutions[i] = new hl_function{std::move(sols[i])};
    *found = static_cast<int>(sols.size());
    return HL_OK;
  });
}

hl_status hl_check_hv(const hl_operator* op, const hl_nonlinearity* nl, const hl_function* psi,
                      double alpha0, double omega_hat, hl_hv_report* report) {
  if (!op || !nl || !report) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    EnergyFunctional E{&op->A, &op->M, nl->nl};
    GridFunction p = psi ? psi->fn : eigen_direction(op);
    HvResult hv = check_Hv(E, p, alpha0, omega_hat);
    report->sup_value = hv.sup_value;
    report->threshold = hv.threshold;
    report->t_at_sup = hv.t_at_sup;
    report->verdict = hv.verdict == HvVerdict::holds
                          ? HL_HV_HOLDS
                          : hv.verdict == HvVerdict::fails ? HL_HV_FAILS : HL_HV_UNBOUNDED;
    return HL_OK;
  });
}

hl_status hl_polarize(const hl_function* u, double a_node, hl_function** out) {
  if (!u || !out) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    *out = new hl_function{polarize(u->fn, a_node)};
    return HL_OK;
  });
}

hl_status hl_polarize_verify(const hl_operator* op, const hl_nonlinearity* nl, int trials,
                             uint64_t seed, hl_polarization_report* report) {
  if (!op || !nl || !report) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    EnergyFunctional E{&op->A, &op->M, nl->nl};
    PolarizationReport rep = verify_polarization_inequality(op->A, E, trials, seed);
    report->trials = rep.trials;
    report->violations = rep.violations;
    report->worst_energy_margin = rep.worst_energy_margin;
    report->worst_integral_margin = rep.worst_integral_margin;
    return HL_OK;
  });
}

hl_status hl_verify_symmetry(const hl_function* u, double tol, hl_symmetry_report* report,
                             int* pass) {
  if (!u || !report) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    SymmetryReport rep = verify_symmetry(u->fn);
    report->evenness_defect = rep.evenness_defect;
    report->monotonicity_defect = rep.monotonicity_defect;
    report->nonneg_defect = rep.nonneg_defect;
    if (pass) *pass = rep.pass(tol) ? 1 : 0;
    return HL_OK;
  });
}

void hl_tm_config_defaults(hl_tm_config* cfg) {
  if (!cfg) return;
  TMProbeConfig d;
  cfg->restarts = d.restarts;
  cfg->max_iters = d.max_iterations;
  cfg->step_init = d.step_init;
  cfg->seed = d.seed;
}

hl_status hl_tm_probe(const hl_operator* op, double alpha, const hl_tm_config* cfg,
                      const hl_function* inject, hl_function** maximizer, hl_tm_report* report) {
  if (!op || !report) return set_error(HL_ERR_NULL_POINTER, "NULL argument");
  return guarded([&] {
    TMProbeResult res = tm_probe(op->A, alpha, to_core(cfg), inject ? &inject->fn : nullptr);
    report->alpha = res.alpha;
    report->sup_estimate = res.sup_estimate;
    report->saturated = res.saturated ? 1 : 0;
    report->restarts = res.restarts;
    if (maximizer) *maximizer = new hl_function{std::move(res.maximizer)};
    return HL_OK;
  });
}

int hl_verify_criteria_count(void) { return verify::kCriteriaCount; }

hl_status hl_verify_criterion(int k, hl_verify_result* out) {
  if (!out) return set_error(HL_ERR_NULL_POINTER, "out is NULL");
  return guarded([&] {
    fill_verify_result(verify::run_criterion(k), out);
    return HL_OK;
  });
}

hl_status hl_verify_all(hl_verify_callback cb, void* ctx, int* n_pass, int* n_total) {
  return guarded([&] {
    int pass = 0, total = 0;
    verify::run_all([&](const verify::CriterionResult& r) {
      ++total;
      if (r.pass) ++pass;
      if (cb) {
        hl_verify_result out;
        fill_verify_result(r, &out);
        cb(&out, ctx);
      }
    });
    if (n_pass) *n_pass = pass;
    if (n_total) *n_total = total;
    return HL_OK;
  });
}

}  // extern "C"
