#pragma once

#include <vector>

#include <Eigen/Core>

#include "ncrpg/geometry/grassmann.hpp"
#include "ncrpg/parallel.hpp"
#include "ncrpg/random.hpp"
#include "ncrpg/solver.hpp"

namespace ncrpg {

// Riemannian mean with a distance penalty on the Grassmann manifold:
//   min_p  (1/2N) * sum_j dist(p, q_j)^2 + tau * dist(p, q_bar).
// The data are exp-mapped random tangents at a common anchor, kept inside a
// ball of radius < pi_kappa/2 so every needed logarithm is well posed.
struct GrassmannMeanInstance {
  int n = 0, r = 0, count = 0;
  double tau = 0.0;
  double kappa_max = 2.0;
  std::vector<Eigen::MatrixXd> data;  // count points
  Eigen::MatrixXd q_bar;              // penalty anchor
  Eigen::MatrixXd p0;                 // initial point
};

// Draw the anchor uniformly, then count+2 normal tangents (stddev 1, each
// rescaled to norm < pi_kappa/2 when needed) exp-mapped to the manifold;
// the last two become q_bar and p0.
GrassmannMeanInstance grassmann_mean_make(int n, int r, int count, double tau,
                                          double kappa_max, Rng& rng);

double grassmann_mean_cost(const GrassmannMeanInstance& inst,
                           const Grassmann& manifold, const Eigen::MatrixXd& p,
                           ExecPolicy policy = default_exec_policy());

Eigen::MatrixXd grassmann_mean_gradient(const GrassmannMeanInstance& inst,
                                        const Grassmann& manifold,
                                        const Eigen::MatrixXd& p,
                                        ExecPolicy policy =
                                            default_exec_policy());

// Global level-set bounds, valid on the entire manifold: every principal
// angle is at most pi/2, so dist <= sqrt(r)*pi/2 between any two points;
// the mean gradient is an average of logarithms, so G_bar takes the same
// value, and L_g = zeta1(kappa_min = 0, .) = 1.
LevelSetBounds grassmann_mean_bounds(const GrassmannMeanInstance& inst);

SplitProblem<Grassmann> grassmann_mean_problem(
    const GrassmannMeanInstance& inst, const Grassmann& manifold,
    ExecPolicy policy = default_exec_policy());

// Certified constant stepsize lambda_bar = 0.99*min{lambda_delta,
// zeta_delta/L_g} at the given delta, with the bounds attached so the solver
// checks the per-step decrease.
StepsizeStrategy grassmann_mean_constant_strategy(
    const GrassmannMeanInstance& inst, double delta = 0.01);

// Backtracking from s = 1 with beta = zeta_delta/4, eta = 0.5.
StepsizeStrategy grassmann_mean_backtracking_strategy(
    const GrassmannMeanInstance& inst, double delta = 0.01);

}  // namespace ncrpg
