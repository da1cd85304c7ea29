#include "ncrpg/problems/grassmann_mean.hpp"

#include <algorithm>
#include <cmath>

#include "ncrpg/curvature.hpp"
#include "ncrpg/errors.hpp"
#include "ncrpg/kernels.hpp"
#include "ncrpg/prox.hpp"

namespace ncrpg {

GrassmannMeanInstance grassmann_mean_make(int n, int r, int count, double tau,
                                          double kappa_max, Rng& rng) {
  if (n <= 0 || r <= 0 || r > n) throw InvalidConfig("grassmann_mean: need 0 < r <= n");
  if (count <= 0) throw InvalidConfig("grassmann_mean: need count > 0");
  if (tau < 0.0) throw InvalidConfig("grassmann_mean: need tau >= 0");
  if (kappa_max <= 0.0) throw InvalidConfig("grassmann_mean: need kappa_max > 0");

  Grassmann manifold(n, r, kappa_max);
  GrassmannMeanInstance inst;
  inst.n = n;
  inst.r = r;
  inst.count = count;
  inst.tau = tau;
  inst.kappa_max = kappa_max;

  const Eigen::MatrixXd anchor = manifold.random_point(rng);
  // Keep every sample strictly inside the ball where logarithms between any
  // two points stay unique: radius 0.99 * pi_kappa/2 about the anchor.
  const double radius = 0.99 * 0.5 * pi_kappa(kappa_max);

  auto draw = [&]() {
    Eigen::MatrixXd x = manifold.project(anchor, rng.normal_matrix(n, r));
    const double norm = manifold.norm(anchor, x);
    if (norm >= radius && norm > 0.0) x *= radius / norm;
    return manifold.exp(anchor, x);
  };

  inst.data.reserve(count);
  for (int j = 0; j < count; ++j) inst.data.push_back(draw());
  inst.q_bar = draw();
  inst.p0 = draw();
  return inst;
}

double grassmann_mean_cost(const GrassmannMeanInstance& inst,
                           const Grassmann& manifold, const Eigen::MatrixXd& p,
                           ExecPolicy policy) {
  return kernels::mean_cost(manifold, inst.data, p, policy);
}

Eigen::MatrixXd grassmann_mean_gradient(const GrassmannMeanInstance& inst,
                                        const Grassmann& manifold,
                                        const Eigen::MatrixXd& p,
                                        ExecPolicy policy) {
  return kernels::mean_grad(manifold, inst.data, p, policy);
}

LevelSetBounds grassmann_mean_bounds(const GrassmannMeanInstance& inst) {
  const double half_pi_sqrt_r = std::sqrt(double(inst.r)) * M_PI / 2.0;
  LevelSetBounds b;
  b.h_lo = 0.0;
  b.h_hi = inst.tau * half_pi_sqrt_r;
  b.G_bar = half_pi_sqrt_r;
  b.diam = half_pi_sqrt_r;
  b.L_g = 1.0;
  return b;
}

SplitProblem<Grassmann> grassmann_mean_problem(
    const GrassmannMeanInstance& inst, const Grassmann& manifold,
    ExecPolicy policy) {
  const GrassmannMeanInstance* pi = &inst;
  const Grassmann* pm = &manifold;

  SplitProblem<Grassmann> problem;
  problem.manifold = pm;
  problem.g = [pi, pm, policy](const Eigen::MatrixXd& p) {
    return grassmann_mean_cost(*pi, *pm, p, policy);
  };
  problem.grad_g = [pi, pm, policy](const Eigen::MatrixXd& p) {
    return grassmann_mean_gradient(*pi, *pm, p, policy);
  };
  problem.h = [pi, pm](const Eigen::MatrixXd& p) {
    return pi->tau * pm->dist(p, pi->q_bar);
  };
  problem.prox_h = [pi, pm](const Eigen::MatrixXd& z, double lambda) {
    return geodesic_distance_prox(*pm, z, pi->q_bar, lambda, pi->tau);
  };
  return problem;
}

StepsizeStrategy grassmann_mean_constant_strategy(
    const GrassmannMeanInstance& inst, double delta) {
  const LevelSetBounds b = grassmann_mean_bounds(inst);
  const double lam_delta = lambda_delta(delta, b, inst.kappa_max);
  const double zeta_del = zeta_delta(delta, inst.kappa_max);

  StepsizeStrategy strategy;
  strategy.mode = StepsizeMode::Constant;
  strategy.lambda_bar = 0.99 * std::min(lam_delta, zeta_del / b.L_g);
  strategy.delta = delta;
  strategy.bounds = b;
  return strategy;
}

StepsizeStrategy grassmann_mean_backtracking_strategy(
    const GrassmannMeanInstance& inst, double delta) {
  const LevelSetBounds b = grassmann_mean_bounds(inst);
  const double zeta_del = zeta_delta(delta, inst.kappa_max);

  StepsizeStrategy strategy;
  strategy.mode = StepsizeMode::Backtracking;
  strategy.initial_guess = 1.0;
  strategy.beta = zeta_del / 4.0;
  strategy.eta = 0.5;
  strategy.delta = delta;
  strategy.bounds = b;
  return strategy;
}

}  // namespace ncrpg
