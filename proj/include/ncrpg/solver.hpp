#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncrpg/curvature.hpp"
#include "ncrpg/errors.hpp"

namespace ncrpg {

// Exact mode walks geodesics (exp/log); Retraction mode uses the manifold's
// retraction pair. They coincide on manifolds where retract aliases exp.
enum class GeodesicMode { Exact, Retraction };

enum class StepsizeMode { Constant, Backtracking };

// Constants certified from curvature and level-set bounds at solve start.
struct StepsizeConstants {
  double delta = 0.0;
  double lambda_delta = kInf;
  double zeta_delta = 1.0;
  double decrease_M = 0.0;       // per-step decrease constant
  double lambda_floor = 0.0;     // backtracking: guaranteed accepted stepsize
};

struct StepsizeStrategy {
  StepsizeMode mode = StepsizeMode::Constant;
  double lambda_bar = 0.1;     // constant mode
  double initial_guess = 1.0;  // backtracking initial stepsize s
  double beta = 0.25;          // backtracking acceptance slope
  double eta = 0.5;            // backtracking shrink factor
  int max_shrinks = 60;
  double delta = 0.01;
  // When set (finite), stepsize admissibility is certified against the
  // manifold's curvature bounds and violations throw InvalidConfig.
  std::optional<LevelSetBounds> bounds;
};

struct TraceRow {
  int k = 0;
  double lambda = 0.0;
  double f = 0.0;              // f(p_k) before the step
  double grad_map_norm = 0.0;  // ||G_lambda(p_k)|| at the accepted stepsize
  double elapsed_s = 0.0;      // cumulative wall time, solver work only
};

enum class TerminationReason { ToleranceMet, MaxIterations };

struct SolverTrace {
  std::vector<TraceRow> rows;
  TerminationReason reason = TerminationReason::MaxIterations;
  int iterations = 0;  // accepted point updates
  double f_final = 0.0;
  double grad_map_norm_final = 0.0;
  double elapsed_s = 0.0;
  std::optional<StepsizeConstants> constants;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  double tol = 1e-7;
  int max_iterations = 100000;
  GeodesicMode mode = GeodesicMode::Exact;
};

// Smooth + nonsmooth split objective f = g + h on a manifold, with the
// gradient of g and the (scaled) proximal map of h:
//   prox_h(z, lambda) = argmin_q h(q) + dist(q, z)^2 / (2*lambda).
template <class M>
struct SplitProblem {
  const M* manifold = nullptr;
  std::function<double(const typename M::Point&)> g;
  std::function<typename M::Tangent(const typename M::Point&)> grad_g;
  std::function<double(const typename M::Point&)> h;
  std::function<typename M::Point(const typename M::Point&, double)> prox_h;

  double f(const typename M::Point& p) const { return g(p) + h(p); }
};

namespace detail {

template <class M>
typename M::Point mode_step(const M& man, const typename M::Point& p,
                            const typename M::Tangent& x, GeodesicMode mode) {
  return mode == GeodesicMode::Exact ? man.exp(p, x) : man.retract(p, x);
}

template <class M>
typename M::Tangent mode_inverse(const M& man, const typename M::Point& p,
                                 const typename M::Point& q,
                                 GeodesicMode mode) {
  return mode == GeodesicMode::Exact ? man.log(p, q)
                                     : man.inverse_retract(p, q);
}

template <class M>
double mode_dist(const M& man, const typename M::Point& p,
                 const typename M::Point& q, GeodesicMode mode) {
  return mode == GeodesicMode::Exact ? man.dist(p, q)
                                     : man.dist_retraction(p, q);
}

// One proximal-gradient application with a precomputed gradient.
template <class M>
typename M::Point iteration_map_with_grad(const SplitProblem<M>& problem,
                                          const typename M::Point& p,
                                          const typename M::Tangent& grad,
                                          double lambda, GeodesicMode mode) {
  const M& man = *problem.manifold;
  typename M::Point ghat = mode_step(man, p, man.scale(grad, -lambda), mode);
  typename M::Point q = problem.prox_h(ghat, lambda);
#ifndef NDEBUG
  // The prox must not increase the subproblem objective
  //   H(y) = h(y) + dist(y, ghat)^2 / (2*lambda).
  // In retraction mode the closed-form prox can exceed the retraction-
  // distance objective by the squared normal residual of the step, which is
  // O(lambda^3 ||grad||^4); the slack absorbs it.
  {
    double dq = mode_dist(man, q, ghat, mode);
    double dp = mode_dist(man, p, ghat, mode);
    double hq = problem.h(q) + dq * dq / (2.0 * lambda);
    double hp = problem.h(p) + dp * dp / (2.0 * lambda);
    double slack = (mode == GeodesicMode::Exact ? 1e-10 : 1e-9) *
                   (1.0 + std::abs(hp));
    if (hq > hp + slack)
      throw SolverFailure("prox increased the subproblem objective H");
  }
#endif
  return q;
}

}  // namespace detail

// Gradient step: exp_p(-lambda * grad g(p)) (or the retraction analogue).
template <class M>
typename M::Point gradient_step(const SplitProblem<M>& problem,
                                const typename M::Point& p, double lambda,
                                GeodesicMode mode = GeodesicMode::Exact) {
  if (!(lambda > 0.0)) throw InvalidConfig("gradient_step: lambda must be > 0");
  const M& man = *problem.manifold;
  return detail::mode_step(man, p, man.scale(problem.grad_g(p), -lambda),
                           mode);
}

// Full proximal-gradient iteration map T_lambda(p) = prox_h(gradient step).
template <class M>
typename M::Point iteration_map(const SplitProblem<M>& problem,
                                const typename M::Point& p, double lambda,
                                GeodesicMode mode = GeodesicMode::Exact) {
  if (!(lambda > 0.0)) throw InvalidConfig("iteration_map: lambda must be > 0");
  return detail::iteration_map_with_grad(problem, p, problem.grad_g(p),
                                         lambda, mode);
}

// Gradient mapping G_lambda(p) = -(1/lambda) * log_p(T_lambda(p)).
// Vanishes exactly at stationary points of f.
template <class M>
typename M::Tangent gradient_mapping(const SplitProblem<M>& problem,
                                     const typename M::Point& p, double lambda,
                                     GeodesicMode mode = GeodesicMode::Exact) {
  const M& man = *problem.manifold;
  typename M::Point t = iteration_map(problem, p, lambda, mode);
  return man.scale(detail::mode_inverse(man, p, t, mode), -1.0 / lambda);
}

struct BacktrackResult {
  double lambda = 0.0;
  double decrease = 0.0;
  double grad_map_norm = 0.0;
  int shrinks = 0;
  bool tol_hit = false;  // gradient mapping fell below tol at the trial step
};

// Backtracking line search (Armijo condition on the proximal decrease):
// starting from lambda = initial_guess, shrink by eta until
//   f(p) - f(T_lambda(p)) >= beta * lambda * ||G_lambda(p)||^2.
// A trial stepsize whose geodesic machinery fails (log past the injectivity
// radius, singular retraction) counts as a failed test and shrinks.
// Throws StallError after max_shrinks shrinks.
template <class M>
BacktrackResult backtrack(const SplitProblem<M>& problem,
                          const typename M::Point& p,
                          const StepsizeStrategy& strategy, double f_p,
                          typename M::Point& t_out,
                          GeodesicMode mode = GeodesicMode::Exact,
                          double tol = 0.0) {
  const M& man = *problem.manifold;
  typename M::Tangent grad = problem.grad_g(p);
  double lambda = strategy.initial_guess;
  BacktrackResult res;
  for (int shrinks = 0; shrinks <= strategy.max_shrinks; ++shrinks) {
    bool usable = true;
    double gn = 0.0, dec = 0.0;
    typename M::Point t = p;
    try {
      t = detail::iteration_map_with_grad(problem, p, grad, lambda, mode);
      typename M::Tangent x = detail::mode_inverse(man, p, t, mode);
      gn = man.norm(p, x) / lambda;
      dec = f_p - problem.f(t);
    } catch (const IllPosedLog&) {
      usable = false;
    } catch (const RetractionSingularity&) {
      usable = false;
    } catch (const DegenerateProx&) {
      usable = false;
    } catch (const RankDropError&) {
      usable = false;
    }
    if (usable && gn < tol) {
      // Already stationary at this stepsize; accept without the decrease test.
      res.lambda = lambda;
      res.decrease = dec;
      res.grad_map_norm = gn;
      res.shrinks = shrinks;
      res.tol_hit = true;
      t_out = t;
      return res;
    }
    if (usable && dec >= strategy.beta * lambda * gn * gn) {
      res.lambda = lambda;
      res.decrease = dec;
      res.grad_map_norm = gn;
      res.shrinks = shrinks;
      t_out = t;
      return res;
    }
    lambda *= strategy.eta;
  }
  throw StallError("backtracking exhausted its shrink budget (" +
                   std::to_string(strategy.max_shrinks) + ") at f = " +
                   std::to_string(f_p));
}

template <class M>
struct SolveResult {
  typename M::Point point;
  SolverTrace trace;
  double f_best = 0.0;
};

// Per-iteration observer: (k, p_k, lambda_k, f(p_k), ||G_lambda(p_k)||).
template <class M>
using IterationObserver = std::function<void(
    int, const typename M::Point&, double, double, double)>;

namespace detail {

// Derive certified stepsize constants from the strategy's level-set bounds
// and the manifold's curvature bounds; throws InvalidConfig when the
// configured stepsize falls outside its admissible interval.
inline StepsizeConstants certify_strategy(const StepsizeStrategy& strategy,
                                          const CurvatureBounds& curv) {
  const LevelSetBounds& b = *strategy.bounds;
  StepsizeConstants c;
  c.delta = strategy.delta;
  c.lambda_delta = lambda_delta(strategy.delta, b, curv.kappa_max);
  c.zeta_delta = zeta_delta(strategy.delta, curv.kappa_max);
  if (strategy.mode == StepsizeMode::Constant) {
    c.decrease_M = decrease_constant_constant_step(
        strategy.lambda_bar, c.lambda_delta, c.zeta_delta, b.L_g);
  } else {
    c.decrease_M = decrease_constant_backtracking(
        strategy.initial_guess, strategy.beta, strategy.eta, c.lambda_delta,
        c.zeta_delta, b.L_g);
    c.lambda_floor = c.decrease_M / strategy.beta;  // the min{...} term
  }
  return c;
}

}  // namespace detail

// Nonconvex Riemannian proximal gradient iteration
//   p_{k+1} = prox_{lambda h}(exp_{p_k}(-lambda grad g(p_k)))
// run until the gradient-mapping norm at the accepted stepsize drops below
// tol or max_iterations is hit. The gradient mapping is evaluated at the
// stepsize of the step just computed; when it certifies stationarity the
// solver returns the CURRENT point without taking the step (a stationary p0
// is returned after a single gradient-mapping evaluation).
//
// Invariants checked every accepted step (violations throw SolverFailure):
//   monotonicity  f(p_{k+1}) <= f(p_k) + 1e-12*(1 + |f(p_k)|),
//   certified sufficient decrease f(p_k) - f(p_{k+1}) >= M*||G||^2 - 1e-10
//     (only when level-set bounds are supplied),
//   backtracking accepted stepsizes never fall below the certified floor.
//
// trace_out, when non-null, receives the partial trace even if an iteration
// throws (the trace then records the failure).
template <class M>
SolveResult<M> solve(const SplitProblem<M>& problem,
                     const typename M::Point& p0,
                     const StepsizeStrategy& strategy,
                     const SolveOptions& options = {},
                     IterationObserver<M> observer = nullptr,
                     SolverTrace* trace_out = nullptr) {
  if (!(options.tol > 0.0)) throw InvalidConfig("solve: tol must be > 0");
  if (options.max_iterations < 1)
    throw InvalidConfig("solve: max_iterations must be >= 1");
  if (strategy.mode == StepsizeMode::Constant && !(strategy.lambda_bar > 0.0))
    throw InvalidConfig("solve: constant stepsize must be > 0");

  const M& man = *problem.manifold;
  SolveResult<M> result;
  result.point = p0;
  SolverTrace& trace = result.trace;

  if (strategy.bounds.has_value() &&
      std::isfinite(strategy.bounds->L_g)) {
    trace.constants = detail::certify_strategy(strategy,
                                               man.curvature_bounds());
  } else {
    trace.warnings.push_back(
        "stepsize admissibility not certified: curvature or level-set "
        "bounds unavailable");
  }

  auto flush_trace = [&]() {
    if (trace_out != nullptr) *trace_out = trace;
  };

  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  typename M::Point p = p0;
  double f_p = problem.f(p);
  result.f_best = f_p;
  trace.f_final = f_p;

  try {
    for (int k = 0; k < options.max_iterations; ++k) {
      double lambda = 0.0, gn = 0.0, dec = 0.0;
      bool tol_hit = false;
      typename M::Point t = p;
      if (strategy.mode == StepsizeMode::Constant) {
        lambda = strategy.lambda_bar;
        t = iteration_map(problem, p, lambda, options.mode);
        typename M::Tangent x = detail::mode_inverse(man, p, t, options.mode);
        gn = man.norm(p, x) / lambda;
        dec = f_p - problem.f(t);
        tol_hit = gn < options.tol;
      } else {
        BacktrackResult bt = backtrack(problem, p, strategy, f_p, t,
                                       options.mode, options.tol);
        lambda = bt.lambda;
        gn = bt.grad_map_norm;
        dec = bt.decrease;
        tol_hit = bt.tol_hit || gn < options.tol;
        if (!tol_hit && trace.constants.has_value()) {
          double floor = std::min(strategy.initial_guess,
                                  trace.constants->lambda_floor);
          if (lambda < floor - 1e-12)
            throw SolverFailure(
                "backtracking accepted a stepsize below the certified floor");
        }
      }

      trace.rows.push_back({k, lambda, f_p, gn, elapsed()});
      if (observer) observer(k, p, lambda, f_p, gn);

      if (tol_hit) {
        trace.reason = TerminationReason::ToleranceMet;
        trace.iterations = k;
        trace.f_final = f_p;
        trace.grad_map_norm_final = gn;
        break;
      }

      // Accepted step: enforce the per-step invariants.
      double f_t = f_p - dec;
      if (f_t > f_p + 1e-12 * (1.0 + std::abs(f_p)))
        throw SolverFailure("monotonicity violated: f increased by " +
                            std::to_string(f_t - f_p));
      if (trace.constants.has_value() &&
          dec < trace.constants->decrease_M * gn * gn - 1e-10)
        throw SolverFailure(
            "certified sufficient decrease violated at iteration " +
            std::to_string(k));

      p = t;
      f_p = f_t;
      if (f_p < result.f_best) result.f_best = f_p;
      trace.iterations = k + 1;
      trace.f_final = f_p;
      trace.grad_map_norm_final = gn;
      trace.reason = TerminationReason::MaxIterations;
    }
  } catch (const Error& e) {
    trace.warnings.push_back(std::string("aborted: ") + e.what());
    trace.elapsed_s = elapsed();
    flush_trace();
    throw;
  }

  trace.elapsed_s = elapsed();
  result.point = p;
  flush_trace();
  return result;
}

// High-accuracy objective floor: re-run from p0 at a tight tolerance and
// return the best objective value seen (an upper estimate of f_opt on the
// initial level set).
template <class M>
double fopt_estimate(const SplitProblem<M>& problem,
                     const typename M::Point& p0,
                     const StepsizeStrategy& strategy,
                     GeodesicMode mode = GeodesicMode::Exact,
                     double tol = 1e-15, int max_iterations = 100000) {
  SolveOptions opts;
  opts.tol = tol;
  opts.max_iterations = max_iterations;
  opts.mode = mode;
  SolverTrace trace;
  try {
    SolveResult<M> r = solve(problem, p0, strategy, opts, nullptr, &trace);
    return r.f_best;
  } catch (const StallError&) {
    // Backtracking stalled at floating-point precision: the last accepted
    // objective is the floor this run can certify.
    return trace.f_final;
  }
}

}  // namespace ncrpg
