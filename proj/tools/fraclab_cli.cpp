// Command-line front end: solve, sweep, baseline, verify, efr, dini.

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/fracops.hpp"
#include "fraclab/nonlocal_ops.hpp"

namespace fs = std::filesystem;
using namespace fraclab;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kPartial = 2;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  f << text;
}

void print_records(const std::vector<ExperimentRecord>& records) {
  std::printf("%4s %12s %14s %14s %12s %8s %6s\n", "k", "param", "lambda1", "baseline", "gap", "h", "iters");
  for (const auto& r : records) {
    if (!r.ok()) {
      std::printf("%4d %12.5g  failed: %s\n", r.k, r.param, r.error.c_str());
      continue;
    }
    std::printf("%4d %12.5g %14.8f %14.8f %12.4e %8.4g %6d\n", r.k, r.param, r.lambda1, r.baseline, r.gap, r.h, r.iters);
  }
}

int cmd_solve(const std::string& config_path, const fs::path& out) {
  const ExperimentConfig cfg = load_config(config_path);
  const int k = cfg.ks.front();
  const ExteriorPartition p = cfg.partition(k);
  const DiscParams d = effective_disc(cfg, p);
  const FractionalOrder order = cfg.order();
  EigenResult r = solve_mixed(p, order, d, cfg.solver);
  DiscreteFunction u(r.system->disc, r.full_vector());
  const Discretization& disc = *r.system->disc;

  std::printf("lambda1   %.15g%s\n", r.lambda1, r.reported_zero ? " (below 1e-9, reported as 0)" : "");
  std::printf("iters     %d  converged %s  residual %.3e\n", r.iterations, r.converged ? "yes" : "no", r.rq_residual);
  std::printf("mesh      h = %.6g  L = %.6g  %d cells  %d + %d free DOFs\n", d.h, d.L, disc.num_cells(),
              disc.n_free_interior, disc.n_free_exterior);
  std::printf("gauss     %.3e\n", r.gauss_residual);
  if (r.condition_c_finite)
    std::printf("condC     %.10g\n", r.condition_c);
  else
    std::printf("condC     infinite\n");

  json doc = {{"config", to_json(cfg)},
              {"k", k},
              {"lambda1", r.lambda1},
              {"raw_lambda", r.raw_lambda},
              {"reported_zero", r.reported_zero},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"residual", r.rq_residual},
              {"h", d.h},
              {"L", d.L},
              {"gauss_residual", r.gauss_residual},
              {"condC", r.condition_c_finite ? json(r.condition_c) : json("inf")},
              {"max_snap", disc.max_snap()}};
  write_file(out / "solution.json", doc.dump(2) + "\n");

  std::string dat = "# x u(x): interior DOFs, then Neumann DOFs\n";
  char line[80];
  for (int i = 0; i < disc.num_free(); ++i) {
    std::snprintf(line, sizeof line, "%.17g %.17g\n", disc.dof_coord[i], u.coeffs()(i));
    dat += line;
  }
  write_file(out / "eigenfunction.dat", dat);
  return r.converged ? kOk : kPartial;
}

int cmd_sweep(const std::string& config_path, const fs::path& out, int jobs) {
  const ExperimentConfig cfg = load_config(config_path);
  const auto records = run(cfg, jobs);
  print_records(records);
  emit(records, cfg, out);
  const bool all_ok = std::all_of(records.begin(), records.end(), [](const ExperimentRecord& r) { return r.ok(); });
  std::printf("wrote %s, %s, %s under %s\n", cfg.outputs.csv.c_str(), cfg.outputs.json.c_str(),
              cfg.outputs.plotdata.c_str(), out.string().c_str());
  return all_ok ? kOk : kPartial;
}

int cmd_baseline(double s, double a, double b, double h, int levels, const std::string& scheme, const fs::path& out) {
  const Extrapolation ex = richardson_baseline(Domain1D(a, b), s, h, levels, scheme_from_string(scheme));
  for (std::size_t i = 0; i < ex.h.size(); ++i) std::printf("h = %-10.6g lambda1 = %.12f\n", ex.h[i], ex.lambda[i]);
  std::printf("observed order %.4f\nextrapolated   %.10f\n", ex.order, ex.value);
  json doc = {{"omega", {a, b}}, {"s", s},          {"scheme", scheme},
              {"h", ex.h},       {"lambda", ex.lambda}, {"order", ex.order}, {"extrapolated", ex.value}};
  write_file(out / "baseline.json", doc.dump(2) + "\n");
  return kOk;
}

int cmd_verify(double s, double a, double b, const fs::path& out) {
  const IdentitySuite v = identity_suite(Domain1D(a, b), s);
  auto line = [](const char* name, double value, double tol) {
    std::printf("%-32s %.3e  (tol %.0e)  %s\n", name, value, tol, value <= tol ? "ok" : "FAILED");
  };
  line("gauss residual, relative", v.gauss_rel, v.tol);
  line("parts residual, relative", v.parts_rel, v.tol);
  line("P0 form vs quadrature", v.quad_rel_p0, v.quad_tol);
  line("P1 form vs quadrature", v.quad_rel_p1, v.quad_tol);

  const NormalizationReport nr = normalization_constant(1, s);
  std::printf("a_{1,s} = %.12g (Gamma form ratio %.6g)\n", nr.value, nr.ratio);
  const IdentityReport id = indicator_seminorm_identity({Interval(a, b)}, 0.5);
  std::printf("indicator identity, alpha = 0.5: lhs %.10g rhs %.10g\n", id.lhs, id.rhs);

  json doc = {{"s", s},
              {"omega", {a, b}},
              {"functions", v.functions},
              {"gauss_rel", v.gauss_rel},
              {"parts_rel", v.parts_rel},
              {"quad_rel_p0", v.quad_rel_p0},
              {"quad_rel_p1", v.quad_rel_p1},
              {"pass", v.pass()},
              {"normalization", nr.value},
              {"gamma_ratio", nr.ratio},
              {"indicator_lhs", id.lhs},
              {"indicator_rhs", id.rhs}};
  write_file(out / "verify.json", doc.dump(2) + "\n");
  return v.pass() ? kOk : kPartial;
}

int cmd_efr(const std::vector<double>& ss, int dim, int kmin, int kmax, const fs::path& out) {
  json doc = json::array();
  std::string dat;
  int status = kOk;
  for (double s : ss) {
    std::vector<double> r, e;
    try {
      for (int k = kmin; k <= kmax; ++k) {
        r.push_back(std::pow(2.0, -k));
        e.push_back(e_of_r(r.back(), s, dim));
      }
    } catch (const Error& err) {
      std::printf("s = %-5g %s\n", s, err.what());
      doc.push_back({{"s", s}, {"N", dim}, {"error", err.what()}});
      continue;
    }
    const double slope = loglog_slope(r, e);
    std::printf("s = %-5g slope %.5f (expected %.5f)\n", s, slope, dim - 2.0 * s);
    dat += "# s = " + std::to_string(s) + "\n# r E(r)\n";
    char line[80];
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::printf("    r = %-12.6g E = %.12g\n", r[i], e[i]);
      std::snprintf(line, sizeof line, "%.17g %.17g\n", r[i], e[i]);
      dat += line;
    }
    dat += "\n\n";
    doc.push_back({{"s", s}, {"N", dim}, {"r", r}, {"E", e}, {"slope", slope}, {"expected", dim - 2.0 * s}});
  }
  write_file(out / "efr.json", doc.dump(2) + "\n");
  write_file(out / "efr.dat", dat);
  return status;
}

int cmd_dini(const std::string& modulus, double beta, double alpha, double tol) {
  if (modulus != "log_spine" && modulus != "power") throw Error(ErrorCode::BadParameters, "modulus must be power or log_spine");
  const ModulusOfContinuity w = modulus == "log_spine" ? ModulusOfContinuity::log_spine() : ModulusOfContinuity::power(beta);
  const DiniResult r = dini_check(w, KernelOrder::power(alpha), tol);
  if (r.status == DiniResult::Status::Finite)
    std::printf("finite  %.10g\n", r.value);
  else
    std::printf("divergent\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed Dirichlet-Neumann eigenvalues of the fractional Laplacian"};
  app.require_subcommand(1);
  std::string config;
  std::string out = "out";
  int jobs = 1;
  long seed = 0;
  // the solver is deterministic; --seed is accepted for interface stability and ignored
  app.add_option("--seed", seed, "accepted and ignored");

  auto* solve = app.add_subcommand("solve", "solve one partition from a config");
  solve->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run a family sweep from a config");
  sweep->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  double s = 0.5, a = -1.0, b = 1.0, h = 0.04;
  int levels = 3;
  std::string scheme = "P1";
  auto* base = app.add_subcommand("baseline", "all-Dirichlet eigenvalue with Richardson extrapolation");
  base->add_option("--s", s, "fractional order")->check(CLI::Range(0.0, 1.0));
  base->add_option("--a", a, "left end of the domain");
  base->add_option("--b", b, "right end of the domain");
  base->add_option("--h0", h, "coarsest mesh size");
  base->add_option("--levels", levels, "number of halvings (>= 3)");
  base->add_option("--scheme", scheme, "P0 or P1");
  base->add_option("--out", out, "output directory");

  auto* verify = app.add_subcommand("verify", "matrix identities and quadrature cross-checks");
  verify->add_option("--s", s, "fractional order")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--a", a, "left end of the domain");
  verify->add_option("--b", b, "right end of the domain");
  verify->add_option("--out", out, "output directory");

  std::vector<double> ss{0.6, 0.7, 0.75};
  int dim = 2, kmin = 3, kmax = 8;
  auto* efr = app.add_subcommand("efr", "tangent-ball integral E(r) and its scaling slope");
  efr->add_option("--s", ss, "orders to tabulate");
  efr->add_option("--N", dim, "dimension (1 or 2)");
  efr->add_option("--kmin", kmin, "smallest k in r = 2^-k");
  efr->add_option("--kmax", kmax, "largest k in r = 2^-k");
  efr->add_option("--out", out, "output directory");

  std::string modulus = "power";
  double beta = 1.0, alpha = 0.5, tol = 1e-2;
  auto* dini = app.add_subcommand("dini", "Dini condition for a modulus of continuity against a kernel order");
  dini->add_option("--modulus", modulus, "power or log_spine");
  dini->add_option("--beta", beta, "exponent of a power modulus");
  dini->add_option("--alpha", alpha, "exponent of the kernel order t^-alpha");
  dini->add_option("--tol", tol, "classification tolerance");

  // --config and --out are also accepted before the subcommand
  app.add_option("--config", config, "JSON config");
  app.add_option("--out", out, "output directory");
  app.add_option("--jobs", jobs, "worker threads");
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(config, out);
    if (*sweep) return cmd_sweep(config, out, jobs);
    if (*base) return cmd_baseline(s, a, b, h, levels, scheme, out);
    if (*verify) return cmd_verify(s, a, b, out);
    if (*efr) return cmd_efr(ss, dim, kmin, kmax, out);
    if (*dini) return cmd_dini(modulus, beta, alpha, tol);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::BadParameters ? kConfigError : kPartial;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kPartial;
  }
  return kOk;
}
