#include "ncrpg/problems/spca.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ncrpg/errors.hpp"

namespace ncrpg {

SparsePcaInstance spca_make(int n, int r, int m, double mu, Rng& rng) {
  if (n < 1 || m < 2 || r < 1 || r > std::min(m, n))
    throw InvalidConfig("spca_make: need n >= 1, m >= 2, 1 <= r <= min(m, n)");
  if (mu < 0.0) throw InvalidConfig("spca_make: mu must be nonnegative");
  SparsePcaInstance inst;
  inst.n = n;
  inst.r = r;
  inst.m = m;
  inst.mu = mu;
  inst.a = rng.normal_matrix(m, n);
  // Columns centered and scaled to unit norm; this keeps the default
  // stepsize 1/(2*fro_sq) inside the stability range of the quartic cost.
  for (int j = 0; j < n; ++j) {
    inst.a.col(j).array() -= inst.a.col(j).mean();
    double norm = inst.a.col(j).norm();
    if (norm < 1e-14)
      throw DegenerateProx("spca_make: a data column has zero variance");
    inst.a.col(j) /= norm;
  }
  inst.gram = inst.a.transpose() * inst.a;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(inst.a);
  inst.d = svd.singularValues().head(r);
  inst.fro_sq = inst.a.squaredNorm();
  return inst;
}

double spca_cost(const SparsePcaInstance& inst, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd s = x.transpose() * (inst.gram * x);
  s -= Eigen::MatrixXd(inst.d.array().square().matrix().asDiagonal());
  return 0.5 * s.squaredNorm();
}

Eigen::MatrixXd spca_euclidean_gradient(const SparsePcaInstance& inst,
                                        const Eigen::MatrixXd& x) {
  Eigen::MatrixXd bx = inst.gram * x;
  Eigen::MatrixXd s = x.transpose() * bx;
  s -= Eigen::MatrixXd(inst.d.array().square().matrix().asDiagonal());
  return 2.0 * bx * s;
}

Eigen::MatrixXd spca_gradient(const SparsePcaInstance& inst,
                              const Oblique& manifold,
                              const Eigen::MatrixXd& x) {
  return manifold.project(x, spca_euclidean_gradient(inst, x));
}

SplitProblem<Oblique> spca_problem(const SparsePcaInstance& inst,
                                   const Oblique& manifold,
                                   SphereL1ProxConfig prox_cfg,
                                   ExecPolicy policy) {
  SplitProblem<Oblique> problem;
  problem.manifold = &manifold;
  const SparsePcaInstance* pi = &inst;
  const Oblique* pm = &manifold;
  problem.g = [pi](const Eigen::MatrixXd& x) { return spca_cost(*pi, x); };
  problem.grad_g = [pi, pm](const Eigen::MatrixXd& x) {
    return spca_gradient(*pi, *pm, x);
  };
  double mu = inst.mu;
  problem.h = [mu](const Eigen::MatrixXd& x) {
    return mu * x.cwiseAbs().sum();
  };
  problem.prox_h = [pi, pm, prox_cfg, policy, mu](const Eigen::MatrixXd& z,
                                                  double lambda) {
    if (mu == 0.0) return z;
    return oblique_l1_prox(*pm, z, lambda * mu, prox_cfg, policy);
  };
  return problem;
}

StepsizeStrategy spca_constant_strategy(const SparsePcaInstance& inst) {
  StepsizeStrategy s;
  s.mode = StepsizeMode::Constant;
  s.lambda_bar = 1.0 / (2.0 * inst.fro_sq);
  return s;
}

StepsizeStrategy spca_backtracking_strategy(const SparsePcaInstance& inst) {
  StepsizeStrategy s;
  s.mode = StepsizeMode::Backtracking;
  s.initial_guess = 5.0 / inst.fro_sq;
  s.beta = 0.5;
  s.eta = 0.5;
  return s;
}

}  // namespace ncrpg
