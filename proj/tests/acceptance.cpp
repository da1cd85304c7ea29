// Standalone acceptance gate: one PASS/FAIL line per criterion, exit code is
// the number of failures. Frozen reference constants appear inline next to
// the checks that use them.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "ncrpg/curvature.hpp"
#include "ncrpg/errors.hpp"
#include "ncrpg/geometry/euclidean.hpp"
#include "ncrpg/geometry/fixed_rank.hpp"
#include "ncrpg/geometry/grassmann.hpp"
#include "ncrpg/geometry/oblique.hpp"
#include "ncrpg/geometry/sphere.hpp"
#include "ncrpg/problems/grassmann_mean.hpp"
#include "ncrpg/problems/matrix_recovery.hpp"
#include "ncrpg/problems/spca.hpp"
#include "ncrpg/prox.hpp"
#include "ncrpg/random.hpp"
#include "ncrpg/solver.hpp"
#include "ncrpg/validation.hpp"

namespace {

using namespace ncrpg;
using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class Body>
void criterion(const char* name, double budget_s, Body&& body) {
  auto t0 = Clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = seconds_since(t0);
  if (budget_s > 0.0 && secs >= budget_s) {
    ok = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, " [over %.0fs budget]", budget_s);
    detail += buf;
  }
  std::printf("[%s] %-36s %8.2fs  %s\n", ok ? "PASS" : "FAIL", name, secs,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pat, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pat, v);
  return buf;
}

// Frozen comparison constants (independently computed, 30+ digit arithmetic).
constexpr double kZetaDelta1 = 0.604599788078072617;    // zeta_delta(1, k>0)
constexpr double kZetaDelta001 = 0.0122148032565622147; // zeta_delta(0.01,.)
constexpr double kGrassmannLambda = 0.012092655223996593;  // 0.99*zeta_delta

// Shared state: criteria 4 and 5 examine the same two solver runs.
struct SpcaRun {
  SparsePcaInstance inst;
  Oblique man{100, 5};
  SplitProblem<Oblique> problem;
  StepsizeStrategy strategy;
  Eigen::MatrixXd p0;
  SolverTrace trace;
  double solve_s = 0.0;
  double decrease_m = 0.0;
};

struct GrassmannRun {
  GrassmannMeanInstance inst;
  Grassmann man{12, 3};
  SplitProblem<Grassmann> problem;
  StepsizeStrategy strategy;
  SolverTrace trace;
  double solve_s = 0.0;
  double decrease_m = 0.0;
};

std::optional<SpcaRun> spca_run;
std::optional<GrassmannRun> grassmann_run;

// Replays a trace against monotonicity and, when m > 0, the per-step
// sufficient decrease f_k - f_{k+1} >= m * ||G_k||^2 - 1e-10.
bool replay_decrease(const SolverTrace& trace, double m, double& worst_mono,
                     double& worst_dec) {
  worst_mono = 0.0;
  worst_dec = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i + 1 < trace.rows.size(); ++i) {
    const TraceRow& a = trace.rows[i];
    const TraceRow& b = trace.rows[i + 1];
    double dec = a.f - b.f;
    worst_mono = std::min(worst_mono, dec);
    if (dec < -1e-12 * (1.0 + std::abs(a.f))) ok = false;
    if (m > 0.0) {
      double slack = dec - m * a.grad_map_norm * a.grad_map_norm;
      worst_dec = std::min(worst_dec, slack);
      if (slack < -1e-10) ok = false;
    }
  }
  return ok;
}

// Rate certificate: min_{n<=k} gn_n <= sqrt((f0 - f_best) / (m (k+1))).
bool rate_certificate(const SolverTrace& trace, double m, double f_best,
                      double& min_margin) {
  min_margin = 1e300;
  bool ok = true;
  double f0 = trace.rows.front().f;
  double running = 1e300;
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    running = std::min(running, trace.rows[k].grad_map_norm);
    double rhs =
        std::sqrt(std::max(0.0, f0 - f_best) / (m * static_cast<double>(k + 1)));
    min_margin = std::min(min_margin, rhs - running);
    if (running > rhs * (1.0 + 1e-12) + 1e-15) ok = false;
  }
  return ok;
}

// --- S2 grid oracle ---------------------------------------------------------

std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
  std::vector<Eigen::Vector3d> pts(static_cast<std::size_t>(n));
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = ga * i;
    pts[static_cast<std::size_t>(i)] =
        Eigen::Vector3d(rad * std::cos(th), rad * std::sin(th), z);
  }
  return pts;
}

double s2_objective(const Eigen::Vector3d& y, const Eigen::Vector3d& z,
                    double xi) {
  double dot = std::min(1.0, std::max(-1.0, y.dot(z)));
  double d = std::acos(dot);
  return xi * y.lpNorm<1>() + 0.5 * d * d;
}

// Local tangent-plane grid around the current best, reprojected.
Eigen::Vector3d s2_refine(Eigen::Vector3d best, const Eigen::Vector3d& z,
                          double xi, double radius, int grid) {
  Eigen::Vector3d e1 = best.unitOrthogonal();
  Eigen::Vector3d e2 = best.cross(e1);
  double fb = s2_objective(best, z, xi);
  Eigen::Vector3d out = best;
  for (int i = -grid; i <= grid; ++i)
    for (int j = -grid; j <= grid; ++j) {
      Eigen::Vector3d y =
          (best + radius * (i * e1 + j * e2) / grid).normalized();
      double f = s2_objective(y, z, xi);
      if (f < fb) {
        fb = f;
        out = y;
      }
    }
  return out;
}

}  // namespace

int main() {
  std::printf("acceptance gate\n");

  criterion("1 geometry axioms", 10.0, [](std::string& detail) {
    Rng master(101);
    double worst = 0.0;
    bool ok = true;
    auto run = [&](const auto& man, std::uint64_t stream) {
      Rng rng = master.split(stream);
      for (const CheckReport& r : manifold_axiom_suite(man, rng, 100)) {
        worst = std::max(worst, r.max_violation);
        if (!r.passed) ok = false;
      }
    };
    run(Euclidean(6), 0);
    run(Sphere(8), 1);
    run(Oblique(6, 3), 2);
    run(Grassmann(7, 3), 3);
    run(FixedRank(8, 6, 2), 4);
    detail = "5 manifolds, 100 trials, max violation " + fmt("%.2e", worst);
    return ok;
  });

  criterion("2 euclidean reduction", 1.0, [](std::string& detail) {
    Rng rng(202);
    CheckReport rep = ista_equivalence_check(20, 12, 0.1, 0.005, 50, rng);
    detail = "lasso iterate deviation " + fmt("%.2e", rep.max_violation);
    return rep.passed;
  });

  criterion("3 sphere l1 prox", 30.0, [](std::string& detail) {
    // Part 1: fixed-point convergence on S^99 with xi below the
    // contraction bound.
    int converged = 0;
    std::vector<int> iters;
    Sphere s100(100);
    for (int t = 0; t < 100; ++t) {
      Rng rng(40000 + t);
      Eigen::VectorXd z = s100.random_point(rng);
      double bound = sphere_l1_xi_bound(z);
      double xi = bound * std::pow(10.0, rng.uniform(-3.0, std::log10(0.3)));
      SphereL1ProxResult res = sphere_l1_prox(z, xi);
      if (res.converged && res.iterations <= 10) {
        ++converged;
        iters.push_back(res.iterations);
      }
    }
    std::sort(iters.begin(), iters.end());
    double median =
        iters.empty()
            ? 0.0
            : (iters.size() % 2 ? iters[iters.size() / 2]
                                : 0.5 * (iters[iters.size() / 2 - 1] +
                                         iters[iters.size() / 2]));
    // Part 2: S2 output against a one-million-point spherical grid with
    // local refinement passes that remove the oracle's own quantization.
    auto grid = fibonacci_sphere(1000000);
    double worst_angle = 0.0;
    for (int t = 0; t < 20; ++t) {
      Rng rng(9000 + t);
      Eigen::VectorXd zv = rng.normal_vector(3);
      Eigen::Vector3d z(zv(0), zv(1), zv(2));
      z.normalize();
      double bound = sphere_l1_xi_bound(z);
      double xi = 0.3 * bound * std::pow(10.0, rng.uniform(-2.0, 0.0));
      Eigen::Vector3d q = sphere_l1_prox(z, xi).point;
      int ibest = 0;
      double fb = 1e300;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double f = s2_objective(grid[i], z, xi);
        if (f < fb) {
          fb = f;
          ibest = static_cast<int>(i);
        }
      }
      Eigen::Vector3d g = grid[static_cast<std::size_t>(ibest)];
      g = s2_refine(g, z, xi, 1.5e-2, 24);
      g = s2_refine(g, z, xi, 1.5e-3, 24);
      g = s2_refine(g, z, xi, 1.5e-4, 24);
      g = s2_refine(g, z, xi, 1.5e-5, 24);
      double ang = std::acos(std::min(1.0, std::max(-1.0, g.dot(q))));
      worst_angle = std::max(worst_angle, ang);
    }
    detail = "converged " + std::to_string(converged) + "/100, median " +
             fmt("%.1f", median) + " iters; grid err " +
             fmt("%.2e", worst_angle);
    return converged >= 99 && worst_angle < 1e-3;
  });

  criterion("4 monotone + sufficient decrease", 0.0, [](std::string& detail) {
    SolveOptions opts;
    opts.tol = 1e-7;
    opts.max_iterations = 100000;

    spca_run.emplace();
    SpcaRun& s = *spca_run;
    Rng irng(42);
    s.inst = spca_make(100, 5, 20, 0.5, irng);
    s.p0 = s.man.random_point(irng);
    s.problem = spca_problem(s.inst, s.man);
    s.strategy = spca_constant_strategy(s.inst);
    double lam = s.strategy.lambda_bar;
    s.decrease_m = (lam * kZetaDelta1 - lam * lam * s.inst.fro_sq) / 2.0;
    auto t0 = Clock::now();
    opts.mode = GeodesicMode::Exact;
    solve(s.problem, s.p0, s.strategy, opts, nullptr, &s.trace);
    s.solve_s = seconds_since(t0);

    grassmann_run.emplace();
    GrassmannRun& g = *grassmann_run;
    Rng girng(42);
    g.inst = grassmann_mean_make(12, 3, 100, 0.5, 2.0, girng);
    g.problem = grassmann_mean_problem(g.inst, g.man);
    g.strategy = grassmann_mean_constant_strategy(g.inst);
    g.decrease_m =
        (kGrassmannLambda * kZetaDelta001 - kGrassmannLambda * kGrassmannLambda) /
        2.0;
    t0 = Clock::now();
    solve(g.problem, g.inst.p0, g.strategy, opts, nullptr, &g.trace);
    g.solve_s = seconds_since(t0);

    double mono_s, dec_s, mono_g, dec_g;
    bool ok_s = replay_decrease(s.trace, s.decrease_m, mono_s, dec_s);
    bool ok_g = replay_decrease(g.trace, g.decrease_m, mono_g, dec_g);
    bool conv_s = s.trace.reason == TerminationReason::ToleranceMet;
    bool conv_g = g.trace.reason == TerminationReason::ToleranceMet;
    bool in_budget = s.solve_s < 60.0 && g.solve_s < 60.0;
    detail = "spca " + std::to_string(s.trace.iterations) + " it/" +
             fmt("%.1fs", s.solve_s) + " dec slack " + fmt("%.1e", dec_s) +
             "; mean " + std::to_string(g.trace.iterations) + " it/" +
             fmt("%.1fs", g.solve_s) + " dec slack " + fmt("%.1e", dec_g);
    if (!conv_s || !conv_g) detail += "; tolerance NOT met";
    return ok_s && ok_g && conv_s && conv_g && in_budget;
  });

  criterion("5 rate certificate", 0.0, [](std::string& detail) {
    if (!spca_run || !grassmann_run) {
      detail = "criterion 4 runs unavailable";
      return false;
    }
    SpcaRun& s = *spca_run;
    GrassmannRun& g = *grassmann_run;
    // Objective floors from the fopt path: same start, tolerance 1e-15, so
    // the floor extends the same trajectory and lower-bounds every row.
    double fbest_s = fopt_estimate(s.problem, s.p0, s.strategy,
                                   GeodesicMode::Exact, 1e-15, 100000);
    double fbest_g = fopt_estimate(g.problem, g.inst.p0, g.strategy,
                                   GeodesicMode::Exact, 1e-15, 100000);
    double margin_s, margin_g;
    bool ok_s = rate_certificate(s.trace, s.decrease_m, fbest_s, margin_s);
    bool ok_g = rate_certificate(g.trace, g.decrease_m, fbest_g, margin_g);
    detail = "spca min margin " + fmt("%.2e", margin_s) + ", mean min margin " +
             fmt("%.2e", margin_g);
    return ok_s && ok_g;
  });

  criterion("6 spca stepsize agreement", 0.0, [](std::string& detail) {
    SolveOptions opts;
    opts.tol = 1e-7;
    opts.max_iterations = 100000;
    opts.mode = GeodesicMode::Exact;
    Oblique man(100, 5);
    int bt_fewer = 0;
    double worst_rel = 0.0;
    bool all_rel_ok = true;
    for (int seed = 1; seed <= 10; ++seed) {
      Rng irng(4000 + seed);
      SparsePcaInstance inst = spca_make(100, 5, 20, 0.5, irng);
      SplitProblem<Oblique> problem = spca_problem(inst, man);
      Rng prng(seed);
      Eigen::MatrixXd p0 = man.random_point(prng);
      SolverTrace tc, tb;
      solve(problem, p0, spca_constant_strategy(inst), opts, nullptr, &tc);
      try {
        solve(problem, p0, spca_backtracking_strategy(inst), opts, nullptr,
              &tb);
      } catch (const StallError&) {
        // The line search hit floating-point resolution of f before the
        // gradient-mapping tolerance; the partial trace carries the
        // converged objective and the iteration count at the stall.
      }
      double fc = tc.f_final, fb = tb.f_final;
      double rel =
          std::abs(fc - fb) / std::max({1e-12, std::abs(fc), std::abs(fb)});
      worst_rel = std::max(worst_rel, rel);
      if (rel >= 0.005) all_rel_ok = false;
      if (tb.iterations < tc.iterations) ++bt_fewer;
    }
    detail = "worst rel diff " + fmt("%.2e", worst_rel) +
             ", backtracking fewer in " + std::to_string(bt_fewer) + "/10";
    return all_rel_ok && bt_fewer >= 8;
  });

  criterion("7 grassmann backtracking", 120.0, [](std::string& detail) {
    SolveOptions opts;
    opts.tol = 1e-7;
    opts.max_iterations = 100000;
    opts.mode = GeodesicMode::Exact;
    const int sizes[3][2] = {{10, 2}, {20, 4}, {40, 5}};
    bool ok = true;
    std::string runs;
    for (const auto& nr : sizes) {
      Grassmann man(nr[0], nr[1], 2.0);
      for (int seed = 1; seed <= 3; ++seed) {
        Rng irng(700 + seed);
        GrassmannMeanInstance inst =
            grassmann_mean_make(nr[0], nr[1], 100, 0.5, 2.0, irng);
        SplitProblem<Grassmann> problem = grassmann_mean_problem(inst, man);
        SolveResult<Grassmann> rc = solve(
            problem, inst.p0, grassmann_mean_constant_strategy(inst), opts);
        SolveResult<Grassmann> rb =
            solve(problem, inst.p0,
                  grassmann_mean_backtracking_strategy(inst), opts);
        if (rb.trace.iterations > rc.trace.iterations) ok = false;
        runs += " " + std::to_string(rb.trace.iterations) + "<=" +
                std::to_string(rc.trace.iterations);
      }
    }
    detail = "bt<=const iters:" + runs;
    return ok;
  });

  criterion("8 matrix recovery support", 300.0, [](std::string& detail) {
    SolveOptions opts;
    opts.tol = 1e-7;
    opts.max_iterations = 100000;
    opts.mode = GeodesicMode::Retraction;
    bool ok = true;
    std::string per_r;
    for (int r = 1; r <= 3; ++r) {
      FixedRank man(500, 100, r);
      int m = recovery_default_m(r, 10, 100);
      int good = 0;
      for (int seed = 1; seed <= 10; ++seed) {
        Rng irng(500 + 10 * r + seed);
        RecoveryInstance inst =
            recovery_make(500, 100, r, 10, m, 1e-4, -1.0, irng);
        SplitProblem<FixedRank> problem = recovery_problem(inst, man);
        SolveResult<FixedRank> res =
            solve(problem, inst.x0, recovery_constant_strategy(), opts);
        bool support_ok =
            recovery_detected_support(res.point) == inst.support;
        double eps0 = recovery_off_support_error(inst, res.point);
        if (support_ok && eps0 < 1e-3) ++good;
        std::printf("    matrec r=%d seed=%d iters=%d support=%d eps0=%.1e\n",
                    r, seed, res.trace.iterations, support_ok ? 1 : 0, eps0);
        std::fflush(stdout);
      }
      per_r += " r" + std::to_string(r) + ":" + std::to_string(good) + "/10";
      if (good < 9) ok = false;
    }
    detail = "support+eps0" + per_r;
    return ok;
  });

  criterion("9 negative controls", 0.0, [](std::string& detail) {
    Rng rng(909);
    // A doubled gradient oracle must fail the finite-difference check.
    SparsePcaInstance inst = spca_make(30, 3, 15, 0.5, rng);
    Oblique man(30, 3);
    SplitProblem<Oblique> problem = spca_problem(inst, man);
    Eigen::MatrixXd p = man.random_point(rng);
    std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> bad_grad =
        [&](const Eigen::MatrixXd& x) {
          return man.scale(problem.grad_g(x), 2.0);
        };
    CheckReport grad_rep = finite_difference_gradient_check<Oblique>(
        man, problem.g, bad_grad, p, rng);
    // A prox that walks only half the fixed-point path must fail the
    // optimality certificate.
    Sphere sph(6);
    Eigen::VectorXd z = sph.random_point(rng);
    double mu = 0.4;
    double lambda = 0.5;
    auto h = [mu](const Eigen::VectorXd& y) { return mu * y.lpNorm<1>(); };
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> bad_prox =
        [&sph, mu](const Eigen::VectorXd& x, double lam) {
          Eigen::VectorXd q = sphere_l1_prox(x, lam * mu).point;
          return sph.exp(x, sph.scale(sph.log(x, q), 0.5));
        };
    CheckReport prox_rep = prox_optimality_certificate<Sphere>(
        sph, h, bad_prox, z, lambda, rng);
    detail = std::string("corrupted gradient flagged: ") +
             (grad_rep.passed ? "no" : "yes") + ", corrupted prox flagged: " +
             (prox_rep.passed ? "no" : "yes");
    return !grad_rep.passed && !prox_rep.passed;
  });

  std::printf("acceptance: %d/9 passed\n", 9 - failures);
  return failures;
}
