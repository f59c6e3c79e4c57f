/*
 * halflap — numerical solver and verification toolkit for the one-dimensional
 * fractional Dirichlet problem
 *
 *     (-Delta)^{1/2} u = f(u)   in (a,b),      u = 0 on R \ (a,b),
 *
 * discretized with piecewise-linear elements of the Gagliardo (H^{1/2})
 * energy. The library computes the Poincare constant lambda_1 and low
 * eigenpairs, verifies the growth hypotheses of the built-in exponential
 * nonlinearity families, locates mountain-pass critical points (with a
 * deflated multi-solution search), checks symmetry/polarization properties
 * of solutions, and probes the Trudinger-Moser supremum.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return HL_OK on success; on failure they return a status code
 * and leave a human-readable message in hl_last_error() (thread-local).
 * Handles are immutable after creation and safe to share across threads.
 */
#ifndef HALFLAP_H
#define HALFLAP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
  HL_OK = 0,
  HL_ERR_INVALID_ARGUMENT = 1, /* precondition violated */
  HL_ERR_OVERFLOW = 2,         /* integrand exponent above the representability cap */
  HL_ERR_SOLVER_FAILURE = 3,   /* linear/eigen/Newton solver broke down */
  HL_ERR_NONCONVERGENCE = 4,   /* iteration budget exhausted */
  HL_ERR_GRID_MISMATCH = 5,    /* operands live on different grids */
  HL_ERR_NULL_POINTER = 6,
  HL_ERR_IO = 7,
  HL_ERR_INTERNAL = 8
} hl_status;

/* Message describing the most recent failure on this thread. */
const char* hl_last_error(void);
const char* hl_status_name(hl_status status);

/* ------------------------------------------------------------------ grids */

typedef struct hl_grid hl_grid;

/* Uniform grid on (a,b) with n interior nodes, spacing h = (b-a)/(n+1).
 * Grid functions are piecewise linear and identically zero outside (a,b). */
hl_status hl_grid_create(double a, double b, int n, hl_grid** out);
void hl_grid_free(hl_grid* grid);
int hl_grid_size(const hl_grid* grid);
double hl_grid_spacing(const hl_grid* grid);
double hl_grid_node(const hl_grid* grid, int i); /* i in [0, n) */

/* ---------------------------------------------------------- grid functions */

typedef struct hl_function hl_function;
typedef double (*hl_sampler)(double x, void* ctx);

/* values may be NULL for the zero function; length must equal the grid size */
hl_status hl_function_create(const hl_grid* grid, const double* values, int len,
                             hl_function** out);
hl_status hl_function_sample(const hl_grid* grid, hl_sampler f, void* ctx, hl_function** out);
void hl_function_free(hl_function* u);
int hl_function_size(const hl_function* u);
hl_status hl_function_values(const hl_function* u, double* out, int len);
double hl_function_eval(const hl_function* u, double x);
/* CSV with header "x,u", one row per interior node, 17 significant digits */
hl_status hl_function_write_csv(const hl_function* u, const char* path);

/* Nodal quadrature h * sum_i [g(u_i) - g(0)] (exterior-zero convention). */
hl_status hl_integrate_nodal(const hl_function* u, hl_sampler g, void* ctx, double* out);

/* -------------------------------------------------------- nonlocal operator */

/* Gagliardo stiffness (symmetric positive-definite Toeplitz, independent of
 * the grid spacing) together with the consistent/lumped mass matrices. */
typedef struct hl_operator hl_operator;

hl_status hl_operator_create(const hl_grid* grid, hl_operator** out);
void hl_operator_free(hl_operator* op);
/* Toeplitz generator a_0 .. a_{n-1}; len must equal the grid size */
hl_status hl_operator_first_row(const hl_operator* op, double* out, int len);
hl_status hl_operator_write_first_row_csv(const hl_operator* op, const char* path);
/* y = A v (fast convolution path for n >= 512) */
hl_status hl_operator_apply(const hl_operator* op, const double* v, double* out, int len);
/* u' A u = ||u||_X^2 of the interpolant */
hl_status hl_operator_quadratic_form(const hl_operator* op, const hl_function* u, double* out);
/* u' M u; lumped != 0 selects diag(h), otherwise the consistent tridiagonal */
hl_status hl_operator_mass_form(const hl_operator* op, const hl_function* u, int lumped,
                                double* out);

typedef struct hl_linear_report {
  int n;
  int iterations;
  double final_residual; /* relative CG residual */
} hl_linear_report;

/* Solve (1/2pi) A u = M g by conjugate gradients to relative residual 1e-12. */
hl_status hl_solve_linear(const hl_operator* op, hl_sampler g, void* ctx, hl_function** out,
                          hl_linear_report* report);

/* ----------------------------------------------------------------- spectrum */

typedef struct hl_eigen_report {
  double lambda1_X;    /* min u'Au / u'Mu: the Poincare constant of the X norm */
  double lambda1_spec; /* lambda1_X / (2 pi): eigenvalue of (-Delta)^{1/2} */
  double residual;     /* ||A v - lambda M v||_2 of the ground pair */
  int iterations;
} hl_eigen_report;

/* k smallest eigenpairs of A v = lambda M v by inverse iteration with
 * M-orthogonal deflation. lambdas has length k; eigenfunctions may be NULL,
 * otherwise it receives k new handles (M-normalized, positive-signed). */
hl_status hl_eigen_smallest(const hl_operator* op, int k, double* lambdas,
                            hl_function** eigenfunctions, hl_eigen_report* report);

/* ------------------------------------------------------------- nonlinearity */

typedef struct hl_nonlinearity hl_nonlinearity;

/* f(t) = mu t for 0 <= t <= 1, mu t^{q-1} e^{t^q - 1} for t > 1, odd
 * extension; subcritical growth. Requires 1 < q < 2, mu > 0. */
hl_status hl_nonlinearity_subcritical(double mu, double q, hl_nonlinearity** out);
/* f(t) = mu t for 0 <= t <= 1, mu t e^{alpha0 (t^2-1)} for t > 1, odd
 * extension; critical growth with exponent alpha0. */
hl_status hl_nonlinearity_critical(double mu, double alpha0, hl_nonlinearity** out);
void hl_nonlinearity_free(hl_nonlinearity* nl);
double hl_nonlinearity_f(const hl_nonlinearity* nl, double t);
double hl_nonlinearity_F(const hl_nonlinearity* nl, double t);

/* Sampled hypothesis checks (numerical evidence, not proof). Serializes the
 * full report as JSON into a malloc'd string; free with hl_string_free.
 * t_grid may be NULL to use the built-in sample grid. */
hl_status hl_check_hypotheses(const hl_nonlinearity* nl, double lambda1_X, const double* t_grid,
                              int len, char** json_out);
/* 1 when every checked hypothesis passed, 0 otherwise */
hl_status hl_hypotheses_pass(const hl_nonlinearity* nl, double lambda1_X, int* pass);
void hl_string_free(char* s);

/* ------------------------------------------------------------ mountain pass */

typedef struct hl_mp_config {
  int path_points;        /* default 41 */
  double descent_tol;     /* default 1e-8: dual-norm residual of phi' */
  int max_outer;          /* default 5000 */
  double step_init;       /* default 1.0 */
  double newton_tol;      /* default 1e-12 */
  double newton_engage;   /* default 0.1: residual that triggers Newton polish */
  double deflation_radius;/* default 1e-3: X-distance identifying duplicates */
  uint64_t seed;          /* default 42 */
} hl_mp_config;

void hl_mp_config_defaults(hl_mp_config* cfg);

typedef struct hl_mp_report {
  double level_c;  /* phi at the returned solution */
  double residual; /* dual norm of phi' at the solution */
  int iterations;  /* outer path iterations */
  int refined;     /* Newton polish applied */
  int nontrivial;
} hl_mp_report;

/* Energy phi(u) = ||u||_X^2/(4 pi) - int F(u). */
hl_status hl_energy(const hl_operator* op, const hl_nonlinearity* nl, const hl_function* u,
                    double* out);
/* Dual-norm residual of phi' at u. */
hl_status hl_energy_residual(const hl_operator* op, const hl_nonlinearity* nl,
                             const hl_function* u, double* out);

/* Mountain-pass search along a deformed path from 0 to a low-energy endpoint.
 * direction may be NULL to use the first eigenfunction. path_levels (optional)
 * receives a malloc'd array of the max-energy history; free with
 * hl_buffer_free. */
hl_status hl_mountain_pass(const hl_operator* op, const hl_nonlinearity* nl,
                           const hl_mp_config* cfg, const hl_function* direction,
                           hl_function** solution, hl_mp_report* report, double** path_levels,
                           int* path_levels_len);
void hl_buffer_free(double* buf);

/* Deflated multi-solution search; fills solutions[0..k) with up to k handles,
 * *found reports how many are valid. Solutions are distinct modulo sign and
 * sorted by energy. */
hl_status hl_multi_solve(const hl_operator* op, const hl_nonlinearity* nl,
                         const hl_mp_config* cfg, int k, hl_function** solutions, int* found);

typedef enum hl_hv_verdict {
  HL_HV_HOLDS = 0,
  HL_HV_FAILS = 1,
  HL_HV_UNBOUNDED = 2
} hl_hv_verdict;

typedef struct hl_hv_report {
  double sup_value; /* sup_t ( t^2/(4 pi) - int F(t psi) ) */
  double threshold; /* omega_hat / (2 alpha0) */
  double t_at_sup;
  hl_hv_verdict verdict;
} hl_hv_report;

/* H'(v) probe; psi may be NULL to use the first eigenfunction, it is
 * X-normalized internally. Requires 0 < omega_hat <= pi. */
hl_status hl_check_hv(const hl_operator* op, const hl_nonlinearity* nl, const hl_function* psi,
                      double alpha0, double omega_hat, hl_hv_report* report);

/* ----------------------------------------------- symmetry / Trudinger-Moser */

/* Two-point rearrangement of u >= 0 about a_node (a grid node or element
 * midpoint, at most the domain midpoint). */
hl_status hl_polarize(const hl_function* u, double a_node, hl_function** out);

typedef struct hl_polarization_report {
  int trials;
  int violations;
  double worst_energy_margin;   /* max of qf(u^H) - qf(u) */
  double worst_integral_margin; /* max |int F(u^H) - int F(u)| */
} hl_polarization_report;

/* Randomized polarization-inequality trials on a symmetric grid. */
hl_status hl_polarize_verify(const hl_operator* op, const hl_nonlinearity* nl, int trials,
                             uint64_t seed, hl_polarization_report* report);

typedef struct hl_symmetry_report {
  double evenness_defect;
  double monotonicity_defect;
  double nonneg_defect;
} hl_symmetry_report;

/* Evenness / monotonicity / nonnegativity defects on a grid symmetric
 * about 0; *pass is 1 when all defects are <= tol. */
hl_status hl_verify_symmetry(const hl_function* u, double tol, hl_symmetry_report* report,
                             int* pass);

typedef struct hl_tm_config {
  int restarts;    /* default 8 */
  int max_iters;   /* default 500 */
  double step_init;/* default 0.5 */
  uint64_t seed;   /* default 42 */
} hl_tm_config;

void hl_tm_config_defaults(hl_tm_config* cfg);

typedef struct hl_tm_report {
  double alpha;
  double sup_estimate; /* best int e^{alpha u^2} found over ||u||_X = 1 */
  int saturated;       /* overflow cap reached during the search */
  int restarts;
} hl_tm_report;

/* Constrained ascent probe of the Trudinger-Moser supremum. inject (optional)
 * adds a deterministic extra start, used to chain alpha sweeps; maximizer
 * (optional) receives the best state found. */
hl_status hl_tm_probe(const hl_operator* op, double alpha, const hl_tm_config* cfg,
                      const hl_function* inject, hl_function** maximizer, hl_tm_report* report);

/* ------------------------------------------------------------ verification */

typedef struct hl_verify_result {
  int criterion; /* 1-based */
  int pass;
  double seconds;
  char name[128];
  char detail[512];
} hl_verify_result;

typedef void (*hl_verify_callback)(const hl_verify_result* result, void* ctx);

int hl_verify_criteria_count(void);
hl_status hl_verify_criterion(int k, hl_verify_result* out);
/* Runs all criteria in order; cb (optional) fires after each one. */
hl_status hl_verify_all(hl_verify_callback cb, void* ctx, int* n_pass, int* n_total);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HALFLAP_H */
