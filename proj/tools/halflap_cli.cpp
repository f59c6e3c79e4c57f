// Command-line frontend for the halflap shared library. Every numerical
// operation goes through the public C API in halflap.h; this file only
// handles configuration, dispatch and report emission.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "halflap.h"

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

int exit_code_for(hl_status st) {
  switch (st) {
    case HL_OK:
      return 0;
    case HL_ERR_INVALID_ARGUMENT:
    case HL_ERR_NULL_POINTER:
      return 2;
    default:
      return 1;
  }
}

[[noreturn]] void die(hl_status st, const std::string& where) {
  std::fprintf(stderr, "error (%s) in %s: %s\n", hl_status_name(st), where.c_str(),
               hl_last_error());
  std::exit(exit_code_for(st));
}

void check(hl_status st, const std::string& where) {
  if (st != HL_OK) die(st, where);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal deterministic JSON emitter: insertion order preserved, floats at
// 17 significant digits (the reproducibility contract of the reports).
class Json {
 public:
  Json& field(const std::string& key, double v) { return raw(key, fmt(v)); }
  Json& field(const std::string& key, int v) { return raw(key, std::to_string(v)); }
  Json& field(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  Json& field(const std::string& key, const std::string& v) {
    std::string esc;
    for (char c : v) {
      if (c == '"' || c == '\\') esc.push_back('\\');
      esc.push_back(c);
    }
    return raw(key, "\"" + esc + "\"");
  }
  Json& field_list(const std::string& key, const std::vector<double>& vs) {
    std::string s = "[";
    for (size_t i = 0; i < vs.size(); ++i) {
      if (i) s += ", ";
      s += fmt(vs[i]);
    }
    s += "]";
    return raw(key, s);
  }
  Json& field_strings(const std::string& key, const std::vector<std::string>& vs) {
    std::string s = "[";
    for (size_t i = 0; i < vs.size(); ++i) {
      if (i) s += ", ";
      std::string esc;
      for (char c : vs[i]) {
        if (c == '"' || c == '\\') esc.push_back('\\');
        esc.push_back(c);
      }
      s += "\"" + esc + "\"";
    }
    s += "]";
    return raw(key, s);
  }
  Json& raw(const std::string& key, const std::string& value) {
    items_.emplace_back(key, value);
    return *this;
  }
  std::string str() const {
    std::string s = "{\n";
    for (size_t i = 0; i < items_.size(); ++i) {
      s += "  \"" + items_[i].first + "\": " + items_[i].second;
      s += (i + 1 < items_.size()) ? ",\n" : "\n";
    }
    s += "}\n";
    return s;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

struct Domain {
  double a = 0.0;
  double b = 1.0;
};

bool parse_domain(const std::string& s, Domain& d) {
  return std::sscanf(s.c_str(), "%lf,%lf", &d.a, &d.b) == 2;
}

struct Handles {
  hl_grid* grid = nullptr;
  hl_operator* op = nullptr;
  ~Handles() {
    hl_operator_free(op);
    hl_grid_free(grid);
  }
};

void make_operator(const Domain& dom, int n, Handles& h) {
  check(hl_grid_create(dom.a, dom.b, n, &h.grid), "grid creation");
  check(hl_operator_create(h.grid, &h.op), "operator assembly");
}

double resolve_mu(const std::string& mu_arg, hl_operator* op) {
  if (mu_arg != "auto") {
    try {
      size_t pos = 0;
      const double v = std::stod(mu_arg, &pos);
      if (pos == mu_arg.size()) return v;
    } catch (...) {
    }
    std::fprintf(stderr, "error: --mu must be a number or 'auto', got '%s'\n", mu_arg.c_str());
    std::exit(2);
  }
  double lambda1 = 0.0;
  check(hl_eigen_smallest(op, 1, &lambda1, nullptr, nullptr), "eigen solve for --mu auto");
  return lambda1 / kFourPi;
}

hl_nonlinearity* make_nl(const std::string& family, double mu, double q, double alpha0) {
  hl_nonlinearity* nl = nullptr;
  if (family == "ex1") {
    check(hl_nonlinearity_subcritical(mu, q, &nl), "nonlinearity construction");
  } else if (family == "ex2") {
    check(hl_nonlinearity_critical(mu, alpha0, &nl), "nonlinearity construction");
  } else {
    std::fprintf(stderr, "error: unknown nonlinearity '%s' (expected ex1 or ex2)\n",
                 family.c_str());
    std::exit(2);
  }
  return nl;
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

double const_sampler(double, void* ctx) { return *static_cast<double*>(ctx); }

void print_verify_line(const hl_verify_result* r, void*) {
  std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", r->pass ? "PASS" : "FAIL", r->criterion,
              r->name, r->detail, r->seconds);
  std::fflush(stdout);
}

std::vector<double> parse_alpha_list(const std::string& s) {
  std::vector<double> out;
  std::string token;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      if (!token.empty()) {
        out.push_back(std::atof(token.c_str()));
        token.clear();
      }
    } else {
      token.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"halflap: solver and verification toolkit for (-Delta)^{1/2} u = f(u) on an interval"};
  app.fallthrough();  // global options may follow the subcommand
  app.set_config("--config", "", "flat key=value configuration file; flags override it");

  // join "--domain -1,1" so the leading dash of the value survives parsing
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if ((a == "--domain" || a == "--alpha-list") && i + 1 < argc) {
      args.push_back(a + "=" + argv[++i]);
    } else {
      args.push_back(std::move(a));
    }
  }

  std::vector<std::string> domain_parts;
  int n = 256;
  const char* env_out = std::getenv("HALFLAP_OUTPUT_DIR");
  std::string outdir = env_out ? env_out : ".";
  // config files split "a,b" on the comma, so accept one or two tokens
  app.add_option("--domain", domain_parts, "interval a,b (default 0,1)")->expected(1, 2);
  app.add_option("--n", n, "number of interior nodes")->capture_default_str();
  app.add_option("--out", outdir, "output directory (default $HALFLAP_OUTPUT_DIR or .)");

  // shared solver/nonlinearity options
  std::string family = "ex1", mu_arg = "auto";
  double q = 1.5, alpha0 = 1.0, tol = 1e-8, omega_hat = kPi;
  int path_points = 41, k_solutions = 2, restarts = 8, trials = 1000, eig_k = 1;
  std::uint64_t seed = 42;
  std::vector<std::string> alpha_parts;
  double load_const = 1.0;

  auto* c_assemble = app.add_subcommand("assemble", "assemble the Gagliardo form, dump k,a_k CSV");

  auto* c_eigen = app.add_subcommand("eigen", "smallest eigenpairs of A v = lambda M v");
  c_eigen->add_option("--k", eig_k, "number of eigenpairs")->capture_default_str();

  auto* c_lin = app.add_subcommand("solve-linear", "solve (-Delta)^{1/2} u = g with a fixed load");
  c_lin->add_option("--load-const", load_const, "constant load value (default 1)")
      ->capture_default_str();

  auto* c_mp = app.add_subcommand("mp-solve", "mountain-pass solve of (-Delta)^{1/2} u = f(u)");
  auto* c_multi = app.add_subcommand("multi-solve", "deflated multi-solution search");
  c_multi->add_option("--k", k_solutions, "number of solutions to seek")->capture_default_str();
  auto* c_hv = app.add_subcommand("check-hv", "H'(v) level probe for the critical case");
  c_hv->add_option("--omega-hat", omega_hat, "assumed omega bound in (0, pi]")
      ->capture_default_str();

  for (CLI::App* c : {c_mp, c_multi, c_hv}) {
    c->add_option("--nonlinearity", family, "ex1 (subcritical) or ex2 (critical)")
        ->capture_default_str();
    c->add_option("--mu", mu_arg, "mu parameter or 'auto' for lambda1/(4 pi)")
        ->capture_default_str();
    c->add_option("--q", q, "exponent q of ex1, in (1,2)")->capture_default_str();
    c->add_option("--alpha0", alpha0, "critical exponent of ex2")->capture_default_str();
    c->add_option("--tol", tol, "descent tolerance on the dual residual")->capture_default_str();
    c->add_option("--path-points", path_points, "points on the mountain-pass path")
        ->capture_default_str();
    c->add_option("--seed", seed, "random seed")->capture_default_str();
  }

  auto* c_tm = app.add_subcommand("tm-probe", "Trudinger-Moser supremum probe");
  c_tm->add_option("--alpha-list", alpha_parts, "comma-separated exponents")->expected(1, 64);
  c_tm->add_option("--restarts", restarts, "random restarts per alpha")->capture_default_str();
  c_tm->add_option("--seed", seed, "random seed")->capture_default_str();

  auto* c_pol = app.add_subcommand("polarize-test", "randomized polarization-inequality trials");
  c_pol->add_option("--trials", trials, "number of random trials")->capture_default_str();
  c_pol->add_option("--seed", seed, "random seed")->capture_default_str();

  auto* c_hyp = app.add_subcommand("verify-hypotheses", "sampled growth-hypothesis report");
  c_hyp->add_option("--nonlinearity", family, "ex1 or ex2")->capture_default_str();
  c_hyp->add_option("--mu", mu_arg, "mu parameter or 'auto'")->capture_default_str();
  c_hyp->add_option("--q", q, "exponent q of ex1")->capture_default_str();
  c_hyp->add_option("--alpha0", alpha0, "critical exponent of ex2")->capture_default_str();

  auto* c_all = app.add_subcommand("verify-all", "run the full acceptance suite");

  app.require_subcommand(1);
  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  std::string domain_str = "0,1";
  if (!domain_parts.empty()) {
    domain_str = domain_parts[0];
    for (size_t i = 1; i < domain_parts.size(); ++i) domain_str += "," + domain_parts[i];
  }
  Domain dom;
  if (!parse_domain(domain_str, dom) || !(dom.a < dom.b)) {
    std::fprintf(stderr, "error: --domain expects 'a,b' with a < b, got '%s'\n",
                 domain_str.c_str());
    return 2;
  }
  // polarization trials live on a symmetric interval
  if (c_pol->parsed() && domain_str == "0,1") dom = {-1.0, 1.0};

  if (c_all->parsed()) {
    int pass = 0, total = 0;
    check(hl_verify_all(print_verify_line, nullptr, &pass, &total), "verify-all");
    std::printf("%d/%d criteria passed\n", pass, total);
    return pass == total ? 0 : 1;
  }

  Handles h;
  make_operator(dom, n, h);

  if (c_assemble->parsed()) {
    const std::string csv = out_path(outdir, "stiffness_first_row.csv");
    check(hl_operator_write_first_row_csv(h.op, csv.c_str()), "first-row dump");
    std::vector<double> row(static_cast<size_t>(n));
    check(hl_operator_first_row(h.op, row.data(), n), "first-row read");
    Json js;
    js.field("schema", 1)
        .field("command", std::string("assemble"))
        .field("n", n)
        .field("a0", row[0])
        .field("csv", csv);
    std::fputs(js.str().c_str(), stdout);
    return 0;
  }

  if (c_eigen->parsed()) {
    std::vector<double> lambdas(static_cast<size_t>(eig_k));
    std::vector<hl_function*> vecs(static_cast<size_t>(eig_k), nullptr);
    hl_eigen_report rep{};
    check(hl_eigen_smallest(h.op, eig_k, lambdas.data(), vecs.data(), &rep), "eigen solve");
    const std::string csv = out_path(outdir, "eigenfunction.csv");
    check(hl_function_write_csv(vecs[0], csv.c_str()), "eigenfunction CSV");
    Json js;
    js.field("schema", 1)
        .field("lambda1_X", rep.lambda1_X)
        .field("lambda1_spec", rep.lambda1_spec)
        .field("n", n)
        .field("residual", rep.residual);
    if (eig_k > 1) js.field_list("lambdas_X", lambdas);
    js.field("eigenfunction_csv", csv);
    std::fputs(js.str().c_str(), stdout);
    for (auto* v : vecs) hl_function_free(v);
    return 0;
  }

  if (c_lin->parsed()) {
    hl_function* u = nullptr;
    hl_linear_report rep{};
    check(hl_solve_linear(h.op, const_sampler, &load_const, &u, &rep), "linear solve");
    const std::string csv = out_path(outdir, "solution_linear.csv");
    check(hl_function_write_csv(u, csv.c_str()), "solution CSV");
    hl_function_free(u);
    Json js;
    js.field("schema", 1)
        .field("n", rep.n)
        .field("iterations", rep.iterations)
        .field("final_residual", rep.final_residual)
        .field("solution_csv", csv);
    std::fputs(js.str().c_str(), stdout);
    return 0;
  }

  if (c_hyp->parsed()) {
    const double mu = resolve_mu(mu_arg, h.op);
    hl_nonlinearity* nl = make_nl(family, mu, q, alpha0);
    double lambda1 = 0.0;
    check(hl_eigen_smallest(h.op, 1, &lambda1, nullptr, nullptr), "eigen solve");
    char* json = nullptr;
    check(hl_check_hypotheses(nl, lambda1, nullptr, 0, &json), "hypothesis check");
    std::fputs(json, stdout);
    hl_string_free(json);
    hl_nonlinearity_free(nl);
    return 0;
  }

  if (c_mp->parsed() || c_multi->parsed()) {
    const double mu = resolve_mu(mu_arg, h.op);
    hl_nonlinearity* nl = make_nl(family, mu, q, alpha0);
    hl_mp_config cfg;
    hl_mp_config_defaults(&cfg);
    cfg.descent_tol = tol;
    cfg.path_points = path_points;
    cfg.seed = seed;

    double lambda1 = 0.0;
    check(hl_eigen_smallest(h.op, 1, &lambda1, nullptr, nullptr), "eigen solve");
    int hyp_ok = 0;
    check(hl_hypotheses_pass(nl, lambda1, &hyp_ok), "hypothesis check");
    std::vector<std::string> warnings;
    if (!hyp_ok) {
      warnings.push_back(
          "growth hypotheses not verified on the sample grid; mountain-pass geometry may fail");
    }

    if (c_mp->parsed()) {
      hl_function* u = nullptr;
      hl_mp_report rep{};
      check(hl_mountain_pass(h.op, nl, &cfg, nullptr, &u, &rep, nullptr, nullptr),
            "mountain pass");
      const std::string csv = out_path(outdir, "solution_mp.csv");
      check(hl_function_write_csv(u, csv.c_str()), "solution CSV");
      hl_function_free(u);
      Json js;
      js.field("schema", 1)
          .field("level_c", rep.level_c)
          .field("residual", rep.residual)
          .field("iterations", rep.iterations)
          .field("nontrivial", rep.nontrivial != 0)
          .field("mu", mu)
          .field_strings("hypothesis_warnings", warnings)
          .field("solution_csv", csv);
      if (family == "ex2") {
        js.field("ps_threshold_omega_hat_pi", kPi / (2.0 * alpha0));
      }
      std::fputs(js.str().c_str(), stdout);
    } else {
      std::vector<hl_function*> sols(static_cast<size_t>(k_solutions), nullptr);
      int found = 0;
      check(hl_multi_solve(h.op, nl, &cfg, k_solutions, sols.data(), &found), "multi solve");
      std::vector<double> levels, residuals;
      std::vector<std::string> files;
      for (int i = 0; i < found; ++i) {
        double e = 0.0, r = 0.0;
        check(hl_energy(h.op, nl, sols[i], &e), "energy");
        check(hl_energy_residual(h.op, nl, sols[i], &r), "residual");
        levels.push_back(e);
        residuals.push_back(r);
        const std::string csv = out_path(outdir, "solution_" + std::to_string(i) + ".csv");
        check(hl_function_write_csv(sols[i], csv.c_str()), "solution CSV");
        files.push_back(csv);
        hl_function_free(sols[i]);
      }
      Json js;
      js.field("schema", 1)
          .field("k_requested", k_solutions)
          .field("found", found)
          .field_list("levels", levels)
          .field_list("residuals", residuals)
          .field_strings("hypothesis_warnings", warnings)
          .field_strings("solution_csvs", files);
      std::fputs(js.str().c_str(), stdout);
    }
    hl_nonlinearity_free(nl);
    return 0;
  }

  if (c_hv->parsed()) {
    const double mu = resolve_mu(mu_arg, h.op);
    if (family != "ex2") family = "ex2";  // H'(v) is a critical-case check
    hl_nonlinearity* nl = make_nl(family, mu, q, alpha0);
    hl_hv_report rep{};
    check(hl_check_hv(h.op, nl, nullptr, alpha0, omega_hat, &rep), "check-hv");
    Json js;
    js.field("schema", 1)
        .field("sup_value", rep.sup_value)
        .field("threshold", rep.threshold)
        .field("t_at_sup", rep.t_at_sup)
        .field("verdict", std::string(rep.verdict == HL_HV_HOLDS
                                          ? "holds"
                                          : rep.verdict == HL_HV_FAILS ? "fails" : "unbounded"))
        .field("omega_hat", omega_hat)
        .field("alpha0", alpha0)
        .field("note", std::string("omega is unknown; the verdict is relative to omega_hat"));
    std::fputs(js.str().c_str(), stdout);
    hl_nonlinearity_free(nl);
    return 0;
  }

  if (c_tm->parsed()) {
    hl_tm_config cfg;
    hl_tm_config_defaults(&cfg);
    cfg.restarts = restarts;
    cfg.seed = seed;
    std::string alpha_list = alpha_parts.empty() ? "0.125,0.25,0.5,1,2" : alpha_parts[0];
    for (size_t i = 1; i < alpha_parts.size(); ++i) alpha_list += "," + alpha_parts[i];
    std::vector<double> alphas = parse_alpha_list(alpha_list);
    if (alphas.empty()) {
      std::fprintf(stderr, "error: --alpha-list is empty\n");
      return 2;
    }
    const std::string csv = out_path(outdir, "tm_probe.csv");
    std::FILE* fp = std::fopen(csv.c_str(), "w");
    if (!fp) {
      std::fprintf(stderr, "error: cannot open %s\n", csv.c_str());
      return 1;
    }
    std::fputs("alpha,sup_estimate,saturated\n", fp);
    std::fputs("alpha,sup_estimate,saturated\n", stdout);
    hl_function* carry = nullptr;
    for (double alpha : alphas) {
      hl_tm_report rep{};
      hl_function* maximizer = nullptr;
      check(hl_tm_probe(h.op, alpha, &cfg, carry, &maximizer, &rep), "tm-probe");
      std::fprintf(fp, "%.17g,%.17g,%d\n", rep.alpha, rep.sup_estimate, rep.saturated);
      std::fprintf(stdout, "%.17g,%.17g,%d\n", rep.alpha, rep.sup_estimate, rep.saturated);
      hl_function_free(carry);
      carry = maximizer;  // chain the maximizer into the next alpha
    }
    hl_function_free(carry);
    std::fclose(fp);
    return 0;
  }

  if (c_pol->parsed()) {
    hl_nonlinearity* nl = nullptr;
    check(hl_nonlinearity_subcritical(1.0, 1.5, &nl), "nonlinearity construction");
    hl_polarization_report rep{};
    check(hl_polarize_verify(h.op, nl, trials, seed, &rep), "polarize-test");
    hl_nonlinearity_free(nl);
    Json js;
    js.field("schema", 1)
        .field("trials", rep.trials)
        .field("violations", rep.violations)
        .field("worst_energy_margin", rep.worst_energy_margin)
        .field("worst_integral_margin", rep.worst_integral_margin)
        .field("pass", rep.violations == 0);
    std::fputs(js.str().c_str(), stdout);
    return rep.violations == 0 ? 0 : 1;
  }

  std::fprintf(stderr, "error: no subcommand handled\n");
  return 2;
}
