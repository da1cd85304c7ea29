#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include <Eigen/SVD>

#include "CLI11.hpp"

#include "ncrpg/errors.hpp"
#include "ncrpg/geometry/euclidean.hpp"
#include "ncrpg/geometry/fixed_rank.hpp"
#include "ncrpg/geometry/grassmann.hpp"
#include "ncrpg/geometry/oblique.hpp"
#include "ncrpg/geometry/sphere.hpp"
#include "ncrpg/parallel.hpp"
#include "ncrpg/problems/grassmann_mean.hpp"
#include "ncrpg/problems/matrix_recovery.hpp"
#include "ncrpg/problems/spca.hpp"
#include "ncrpg/prox.hpp"
#include "ncrpg/random.hpp"
#include "ncrpg/solver.hpp"
#include "ncrpg/validation.hpp"

namespace {

using namespace ncrpg;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NCRPG_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 1;
}

struct CommonOpts {
  std::string stepsize = "constant";
  double lambda = -1.0;     // constant stepsize override
  double init_step = -1.0;  // backtracking initial guess override
  double beta = -1.0;
  double eta = -1.0;
  double delta = 0.01;
  double tol = 1e-7;
  int max_iters = 100000;
  std::uint64_t seed = default_seed();
  std::uint64_t instance_seed = 42;
  int repeats = 1;
  std::string output;  // directory for trace + summary CSVs; empty = stdout only
  int threads = 0;     // 0 = leave the default policy alone
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_stepsize = true) {
  if (with_stepsize) {
    cmd->add_option("--stepsize", o.stepsize, "constant or backtracking")
        ->check(CLI::IsMember({"constant", "backtracking"}));
    cmd->add_option("--lambda", o.lambda, "constant stepsize override");
    cmd->add_option("--init-step", o.init_step,
                    "backtracking initial guess override");
    cmd->add_option("--beta", o.beta, "backtracking decrease parameter");
    cmd->add_option("--eta", o.eta, "backtracking shrink factor");
    cmd->add_option("--delta", o.delta,
                    "stepsize-interval margin for certified bounds");
    cmd->add_option("--tol", o.tol, "gradient-mapping stopping tolerance");
    cmd->add_option("--max-iters", o.max_iters, "iteration cap");
    cmd->add_option("--repeats", o.repeats, "independent seeded runs")
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--seed", o.seed,
                  "run seed (env NCRPG_SEED is the fallback default)");
  cmd->add_option("--instance-seed", o.instance_seed,
                  "seed for the data-generating stream");
  cmd->add_option("--output", o.output,
                  "directory for trace and summary CSV files");
  cmd->add_option("--threads", o.threads,
                  "worker threads (1 forces serial kernels)");
}

void apply_threads(const CommonOpts& o) {
  if (o.threads == 1) {
    set_exec_policy(ExecPolicy::Serial);
  } else if (o.threads > 1) {
#if defined(_OPENMP)
    omp_set_num_threads(o.threads);
#endif
    set_exec_policy(ExecPolicy::Parallel);
  }
}

StepsizeStrategy with_overrides(StepsizeStrategy s, const CommonOpts& o) {
  if (o.lambda > 0.0) s.lambda_bar = o.lambda;
  if (o.init_step > 0.0) s.initial_guess = o.init_step;
  if (o.beta > 0.0) s.beta = o.beta;
  if (o.eta > 0.0) s.eta = o.eta;
  return s;
}

struct SummaryRow {
  std::string experiment;
  std::string mode;
  std::uint64_t seed = 0;
  int iters = 0;
  double time_s = 0.0;
  double f_final = 0.0;
  double grad_map_norm_final = 0.0;
  std::optional<int> support_match;
  std::optional<double> eps0_mean;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& dir, const std::string& name,
                     const SolverTrace& trace) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  out << "k,lambda,f,grad_map_norm,elapsed_s\n";
  for (const TraceRow& row : trace.rows)
    out << row.k << ',' << fmt(row.lambda) << ',' << fmt(row.f) << ','
        << fmt(row.grad_map_norm) << ',' << fmt(row.elapsed_s) << '\n';
}

void emit_summary(const std::vector<SummaryRow>& rows,
                  const std::string& dir) {
  const bool matrec_cols =
      !rows.empty() && rows.front().support_match.has_value();
  std::string text = "experiment,mode,seed,iters,time_s,f_final,"
                     "grad_map_norm_final";
  if (matrec_cols) text += ",support_match,eps0_mean";
  text += '\n';
  for (const SummaryRow& r : rows) {
    char seed_buf[24];
    std::snprintf(seed_buf, sizeof seed_buf, "%" PRIu64, r.seed);
    text += r.experiment + ',' + r.mode + ',' + seed_buf + ',' +
            std::to_string(r.iters) + ',' + fmt(r.time_s) + ',' +
            fmt(r.f_final) + ',' + fmt(r.grad_map_norm_final);
    if (matrec_cols)
      text += ',' + std::to_string(r.support_match.value_or(0)) + ',' +
              fmt(r.eps0_mean.value_or(0.0));
    text += '\n';
  }
  std::fputs(text.c_str(), stdout);
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / "summary.csv");
    out << text;
  }
}

std::string trace_name(const std::string& experiment, const std::string& mode,
                       std::uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%" PRIu64, seed);
  return experiment + "_" + mode + "_" + buf + ".trace.csv";
}

SolveOptions solve_options(const CommonOpts& o, GeodesicMode mode) {
  SolveOptions opts;
  opts.tol = o.tol;
  opts.max_iterations = o.max_iters;
  opts.mode = mode;
  return opts;
}

// ---------------------------------------------------------------------------
// spca

struct SpcaOpts {
  int n = 100, r = 5, m = 20;
  double mu = 0.5;
};

StepsizeStrategy spca_strategy(const SparsePcaInstance& inst,
                               const CommonOpts& o) {
  return with_overrides(o.stepsize == "constant"
                            ? spca_constant_strategy(inst)
                            : spca_backtracking_strategy(inst),
                        o);
}

int run_spca(const CommonOpts& o, const SpcaOpts& e) {
  apply_threads(o);
  Rng irng(o.instance_seed);
  SparsePcaInstance inst = spca_make(e.n, e.r, e.m, e.mu, irng);
  Oblique man(e.n, e.r);
  SplitProblem<Oblique> problem = spca_problem(inst, man);
  StepsizeStrategy strategy = spca_strategy(inst, o);

  Rng master(o.seed);
  std::vector<SummaryRow> rows;
  for (int i = 0; i < o.repeats; ++i) {
    Rng run = master.split(i);
    std::uint64_t run_seed = run.seed();
    Eigen::MatrixXd p0 = man.random_point(run);
    SolveResult<Oblique> res =
        solve(problem, p0, strategy, solve_options(o, GeodesicMode::Exact));
    write_trace_csv(o.output, trace_name("spca", o.stepsize, run_seed),
                    res.trace);
    rows.push_back({"spca", o.stepsize, run_seed, res.trace.iterations,
                    res.trace.elapsed_s, res.trace.f_final,
                    res.trace.grad_map_norm_final, {}, {}});
  }
  emit_summary(rows, o.output);
  return 0;
}

// ---------------------------------------------------------------------------
// grassmann-mean

struct GrassmannOpts {
  int n = 10, r = 2, N = 1000;
  double tau = 0.5;
  double kappa_max = 2.0;
};

StepsizeStrategy grassmann_strategy(const GrassmannMeanInstance& inst,
                                    const CommonOpts& o) {
  return with_overrides(
      o.stepsize == "constant"
          ? grassmann_mean_constant_strategy(inst, o.delta)
          : grassmann_mean_backtracking_strategy(inst, o.delta),
      o);
}

int run_grassmann(const CommonOpts& o, const GrassmannOpts& e) {
  apply_threads(o);
  Rng irng(o.instance_seed);
  GrassmannMeanInstance inst =
      grassmann_mean_make(e.n, e.r, e.N, e.tau, e.kappa_max, irng);
  Grassmann man(e.n, e.r, e.kappa_max);
  SplitProblem<Grassmann> problem = grassmann_mean_problem(inst, man);
  StepsizeStrategy strategy = grassmann_strategy(inst, o);

  Rng master(o.seed);
  std::vector<SummaryRow> rows;
  for (int i = 0; i < o.repeats; ++i) {
    Rng run = master.split(i);
    std::uint64_t run_seed = run.seed();
    Eigen::MatrixXd p0 = man.random_point(run);
    SolveResult<Grassmann> res =
        solve(problem, p0, strategy, solve_options(o, GeodesicMode::Exact));
    write_trace_csv(o.output,
                    trace_name("grassmann-mean", o.stepsize, run_seed),
                    res.trace);
    rows.push_back({"grassmann-mean", o.stepsize, run_seed,
                    res.trace.iterations, res.trace.elapsed_s,
                    res.trace.f_final, res.trace.grad_map_norm_final, {}, {}});
  }
  emit_summary(rows, o.output);
  return 0;
}

// ---------------------------------------------------------------------------
// matrec

struct MatrecOpts {
  int M = 500, N = 100, r = 2, s = 10, m = 0;  // m = 0 selects the default
  double mu = 1e-4;
  double noise_scale = -1.0;  // < 0 selects the generator default
};

StepsizeStrategy matrec_strategy(const CommonOpts& o) {
  return with_overrides(o.stepsize == "constant"
                            ? recovery_constant_strategy()
                            : recovery_backtracking_strategy(),
                        o);
}

FixedRankPoint truncate_rank(const Eigen::MatrixXd& dense, int r) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(r - 1) <= 0.0)
    throw RankDropError("matrec: perturbed start has rank below r");
  FixedRankPoint p;
  p.u = svd.matrixU().leftCols(r);
  p.sigma = svd.singularValues().head(r);
  p.v = svd.matrixV().leftCols(r);
  return p;
}

int run_matrec(const CommonOpts& o, const MatrecOpts& e) {
  apply_threads(o);
  int m = e.m > 0 ? e.m : recovery_default_m(e.r, e.s, e.N);
  Rng irng(o.instance_seed);
  RecoveryInstance inst =
      recovery_make(e.M, e.N, e.r, e.s, m, e.mu, e.noise_scale, irng);
  FixedRank man(e.M, e.N, e.r);
  SplitProblem<FixedRank> problem = recovery_problem(inst, man);
  StepsizeStrategy strategy = matrec_strategy(o);

  Rng master(o.seed);
  std::vector<SummaryRow> rows;
  for (int i = 0; i < o.repeats; ++i) {
    Rng run = master.split(i);
    std::uint64_t run_seed = run.seed();
    // Each repeat redraws the start perturbation; data stay pinned to the
    // instance seed.
    FixedRankPoint x0 = truncate_rank(
        inst.x_true +
            inst.noise_scale * run.normal_matrix(inst.rows, inst.cols),
        inst.r);
    SolveResult<FixedRank> res = solve(
        problem, x0, strategy, solve_options(o, GeodesicMode::Retraction));
    write_trace_csv(o.output, trace_name("matrec", o.stepsize, run_seed),
                    res.trace);
    SummaryRow row{"matrec", o.stepsize, run_seed, res.trace.iterations,
                   res.trace.elapsed_s, res.trace.f_final,
                   res.trace.grad_map_norm_final, {}, {}};
    row.support_match =
        recovery_detected_support(res.point) == inst.support ? 1 : 0;
    row.eps0_mean = recovery_off_support_error(inst, res.point);
    rows.push_back(row);
  }
  emit_summary(rows, o.output);
  return 0;
}

// ---------------------------------------------------------------------------
// check

int run_check(std::uint64_t seed, int trials) {
  std::vector<CheckReport> reports;
  auto collect = [&reports](std::vector<CheckReport> batch,
                            const std::string& prefix) {
    for (CheckReport& r : batch) {
      r.name = prefix + "." + r.name;
      reports.push_back(std::move(r));
    }
  };

  Rng master(seed);
  {
    Rng r0 = master.split(1);
    collect(manifold_axiom_suite(Euclidean(6), r0, trials), "euclidean");
    Rng r1 = master.split(2);
    collect(manifold_axiom_suite(Sphere(8), r1, trials), "sphere");
    Rng r2 = master.split(3);
    collect(manifold_axiom_suite(Oblique(6, 3), r2, trials), "oblique");
    Rng r3 = master.split(4);
    collect(manifold_axiom_suite(Grassmann(7, 3), r3, trials), "grassmann");
    Rng r4 = master.split(5);
    collect(manifold_axiom_suite(FixedRank(8, 6, 2), r4, trials),
            "fixed_rank");
    Rng r5 = master.split(6);
    collect(grassmann_invariance_suite(Grassmann(6, 2), r5, trials),
            "grassmann");
  }
  {
    Rng rng = master.split(7);
    reports.push_back(ista_equivalence_check(15, 10, 0.05, 0.002, 40, rng));
  }
  {
    Rng rng = master.split(8);
    SparsePcaInstance inst = spca_make(100, 5, 20, 0.5, rng);
    Oblique man(100, 5);
    SplitProblem<Oblique> prob = spca_problem(inst, man);
    Eigen::MatrixXd p = man.random_point(rng);
    CheckReport rep = finite_difference_gradient_check<Oblique>(
        man, prob.g, prob.grad_g, p, rng);
    rep.name = "spca." + rep.name;
    reports.push_back(rep);
  }
  {
    Rng rng = master.split(9);
    GrassmannMeanInstance inst = grassmann_mean_make(8, 2, 15, 0.5, 2.0, rng);
    Grassmann man(8, 2);
    SplitProblem<Grassmann> prob = grassmann_mean_problem(inst, man);
    CheckReport rep = finite_difference_gradient_check<Grassmann>(
        man, prob.g, prob.grad_g, inst.p0, rng);
    rep.name = "grassmann_mean." + rep.name;
    reports.push_back(rep);
  }
  {
    Rng rng = master.split(10);
    RecoveryInstance inst = recovery_make(20, 8, 2, 5, 100, 1e-4, -1.0, rng);
    FixedRank man(20, 8, 2);
    SplitProblem<FixedRank> prob = recovery_problem(inst, man);
    CheckReport rep = finite_difference_gradient_check<FixedRank>(
        man, prob.g, prob.grad_g, inst.x0, rng, 20, GeodesicMode::Retraction);
    rep.name = "matrec." + rep.name;
    reports.push_back(rep);
  }
  {
    Rng rng = master.split(11);
    Sphere sph(4);
    Eigen::VectorXd z(4);
    z << 0.9, 0.5, 0.4, 0.2;
    z.normalize();
    double mu = 0.2;
    auto h = [mu](const Eigen::VectorXd& y) { return mu * y.lpNorm<1>(); };
    auto prox = [mu](const Eigen::VectorXd& x, double lambda) {
      return sphere_l1_prox(x, lambda * mu).point;
    };
    CheckReport rep = prox_optimality_certificate<Sphere>(
        sph, h, prox, z, 0.5, rng);
    rep.name = "sphere_l1." + rep.name;
    reports.push_back(rep);
  }

  bool ok = true;
  for (const CheckReport& r : reports) {
    std::printf("%-45s %-4s max_violation=%.3e%s%s\n", r.name.c_str(),
                r.passed ? "ok" : "FAIL", r.max_violation,
                r.detail.empty() ? "" : " ", r.detail.c_str());
    ok = ok && r.passed;
  }
  std::printf("check: %s\n", ok ? "all passed" : "FAILURES");
  return ok ? 0 : 3;
}

// ---------------------------------------------------------------------------
// fopt

struct FoptDims {
  int n = -1, r = -1, m = -1, N = -1, M = -1, s = -1;
  double mu = -1.0, tau = -1.0, kappa_max = -1.0;
};

int run_fopt(const CommonOpts& o, const std::string& experiment,
             const FoptDims& d) {
  apply_threads(o);
  double fbest = 0.0;
  if (experiment == "spca") {
    SpcaOpts e;
    if (d.n > 0) e.n = d.n;
    if (d.r > 0) e.r = d.r;
    if (d.m > 0) e.m = d.m;
    if (d.mu >= 0.0) e.mu = d.mu;
    Rng irng(o.instance_seed);
    SparsePcaInstance inst = spca_make(e.n, e.r, e.m, e.mu, irng);
    Oblique man(e.n, e.r);
    // The start continues the instance stream, so the floor is a function of
    // the instance seed alone.
    Eigen::MatrixXd p0 = man.random_point(irng);
    fbest = fopt_estimate(spca_problem(inst, man), p0,
                          spca_strategy(inst, o), GeodesicMode::Exact, o.tol,
                          o.max_iters);
  } else if (experiment == "grassmann-mean") {
    GrassmannOpts e;
    if (d.n > 0) e.n = d.n;
    if (d.r > 0) e.r = d.r;
    if (d.N > 0) e.N = d.N;
    if (d.tau >= 0.0) e.tau = d.tau;
    if (d.kappa_max > 0.0) e.kappa_max = d.kappa_max;
    Rng irng(o.instance_seed);
    GrassmannMeanInstance inst =
        grassmann_mean_make(e.n, e.r, e.N, e.tau, e.kappa_max, irng);
    Grassmann man(e.n, e.r, e.kappa_max);
    fbest = fopt_estimate(grassmann_mean_problem(inst, man), inst.p0,
                          grassmann_strategy(inst, o), GeodesicMode::Exact,
                          o.tol, o.max_iters);
  } else {
    MatrecOpts e;
    if (d.M > 0) e.M = d.M;
    if (d.N > 0) e.N = d.N;
    if (d.r > 0) e.r = d.r;
    if (d.s > 0) e.s = d.s;
    if (d.m > 0) e.m = d.m;
    if (d.mu >= 0.0) e.mu = d.mu;
    int m = e.m > 0 ? e.m : recovery_default_m(e.r, e.s, e.N);
    Rng irng(o.instance_seed);
    RecoveryInstance inst =
        recovery_make(e.M, e.N, e.r, e.s, m, e.mu, e.noise_scale, irng);
    FixedRank man(e.M, e.N, e.r);
    fbest = fopt_estimate(recovery_problem(inst, man), inst.x0,
                          matrec_strategy(o), GeodesicMode::Retraction, o.tol,
                          o.max_iters);
  }
  std::printf("%.17g\n", fbest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian proximal gradient benchmark runner"};
  app.require_subcommand(1);

  CommonOpts common;
  SpcaOpts spca_opts;
  GrassmannOpts gr_opts;
  MatrecOpts mr_opts;

  CLI::App* spca = app.add_subcommand(
      "spca", "sparse PCA on the oblique manifold");
  spca->add_option("--n", spca_opts.n, "variables");
  spca->add_option("--r", spca_opts.r, "components");
  spca->add_option("--m", spca_opts.m, "observations");
  spca->add_option("--mu", spca_opts.mu, "l1 weight");
  add_common(spca, common);

  CLI::App* gr = app.add_subcommand(
      "grassmann-mean", "penalized subspace mean on the Grassmannian");
  gr->add_option("--n", gr_opts.n, "ambient dimension");
  gr->add_option("--r", gr_opts.r, "subspace dimension");
  gr->add_option("--N", gr_opts.N, "data points");
  gr->add_option("--tau", gr_opts.tau, "distance-penalty weight");
  gr->add_option("--kappa-max", gr_opts.kappa_max, "curvature upper bound");
  add_common(gr, common);

  CLI::App* mr = app.add_subcommand(
      "matrec", "row-sparse low-rank matrix recovery");
  mr->add_option("--M", mr_opts.M, "signal rows");
  mr->add_option("--N", mr_opts.N, "signal columns");
  mr->add_option("--r", mr_opts.r, "rank");
  mr->add_option("--s", mr_opts.s, "nonzero rows");
  mr->add_option("--m", mr_opts.m, "measurements (0 = 2.2x dof default)");
  mr->add_option("--mu", mr_opts.mu, "row-norm penalty weight");
  mr->add_option("--noise-scale", mr_opts.noise_scale,
                 "start perturbation scale (<0 = 1/sqrt(m))");
  add_common(mr, common);

  std::uint64_t check_seed = 1;
  int check_trials = 100;
  CLI::App* check = app.add_subcommand("check", "run the validation suites");
  check->add_option("--seed", check_seed, "master seed");
  check->add_option("--trials", check_trials, "randomized trials per check")
      ->check(CLI::PositiveNumber);

  std::string fopt_experiment;
  FoptDims fopt_dims;
  CLI::App* fopt = app.add_subcommand(
      "fopt", "high-accuracy objective floor for one experiment");
  fopt->add_option("--experiment", fopt_experiment,
                   "spca, grassmann-mean, or matrec")
      ->required()
      ->check(CLI::IsMember({"spca", "grassmann-mean", "matrec"}));
  fopt->add_option("--n", fopt_dims.n, "ambient dimension / variables");
  fopt->add_option("--r", fopt_dims.r, "rank / subspace dimension");
  fopt->add_option("--m", fopt_dims.m, "observations / measurements");
  fopt->add_option("--N", fopt_dims.N, "data points / signal columns");
  fopt->add_option("--M", fopt_dims.M, "signal rows");
  fopt->add_option("--s", fopt_dims.s, "nonzero rows");
  fopt->add_option("--mu", fopt_dims.mu, "penalty weight");
  fopt->add_option("--tau", fopt_dims.tau, "distance-penalty weight");
  fopt->add_option("--kappa-max", fopt_dims.kappa_max,
                   "curvature upper bound");
  add_common(fopt, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }

  try {
    if (spca->parsed()) return run_spca(common, spca_opts);
    if (gr->parsed()) return run_grassmann(common, gr_opts);
    if (mr->parsed()) return run_matrec(common, mr_opts);
    if (check->parsed()) return run_check(check_seed, check_trials);
    if (fopt->parsed()) {
      CommonOpts o = common;
      if (fopt->count("--tol") == 0) o.tol = 1e-15;
      return run_fopt(o, fopt_experiment, fopt_dims);
    }
  } catch (const InvalidConfig& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
