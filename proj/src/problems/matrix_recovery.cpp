#include "ncrpg/problems/matrix_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "ncrpg/errors.hpp"
#include "ncrpg/kernels.hpp"
#include "ncrpg/prox.hpp"

namespace ncrpg {

int recovery_default_m(int r, int s, int cols) {
  return static_cast<int>(
      std::ceil(2.2 * double(r) * double(s + cols - r)));
}

RecoveryInstance recovery_make(int rows, int cols, int r, int s, int m,
                               double mu, double noise_scale, Rng& rng) {
  if (r < 1 || r > s || r > cols)
    throw InvalidConfig("recovery: need 1 <= r <= min(s, cols)");
  if (s > rows) throw InvalidConfig("recovery: need s <= rows");
  if (m < 1) throw InvalidConfig("recovery: need m >= 1");
  if (mu < 0.0) throw InvalidConfig("recovery: need mu >= 0");
  if (noise_scale < 0.0) noise_scale = 1.0 / std::sqrt(double(m));

  RecoveryInstance inst;
  inst.rows = rows;
  inst.cols = cols;
  inst.r = r;
  inst.s = s;
  inst.m = m;
  inst.mu = mu;
  inst.noise_scale = noise_scale;

  // Fisher-Yates prefix: s distinct row indices, then sorted.
  std::vector<int> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < s; ++i) {
    int j = i + static_cast<int>(rng.uniform_index(rows - i));
    std::swap(idx[i], idx[j]);
  }
  inst.support.assign(idx.begin(), idx.begin() + s);
  std::sort(inst.support.begin(), inst.support.end());

  const Eigen::MatrixXd row_factor = rng.normal_matrix(s, r);
  const Eigen::MatrixXd col_factor = rng.normal_matrix(r, cols);
  inst.a = rng.normal_matrix(m, rows * cols) / std::sqrt(double(m));
  const Eigen::MatrixXd noise = noise_scale * rng.normal_matrix(rows, cols);

  inst.x_true = Eigen::MatrixXd::Zero(rows, cols);
  const Eigen::MatrixXd prod = row_factor * col_factor;
  for (int j = 0; j < s; ++j) inst.x_true.row(inst.support[j]) = prod.row(j);

  Eigen::Map<const Eigen::VectorXd> vec(inst.x_true.data(),
                                        inst.x_true.size());
  inst.y = kernels::matvec(inst.a, vec);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(inst.x_true + noise,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(r - 1) <= 0.0)
    throw RankDropError("recovery: perturbed start has rank below r");
  inst.x0.u = svd.matrixU().leftCols(r);
  inst.x0.sigma = svd.singularValues().head(r);
  inst.x0.v = svd.matrixV().leftCols(r);
  return inst;
}

double recovery_cost(const RecoveryInstance& inst, const FixedRank& manifold,
                     const FixedRankPoint& x, ExecPolicy policy) {
  const Eigen::MatrixXd xd = manifold.ambient(x);
  Eigen::Map<const Eigen::VectorXd> vec(xd.data(), xd.size());
  return 0.5 * (kernels::matvec(inst.a, vec, policy) - inst.y).squaredNorm();
}

FixedRankTangent recovery_gradient(const RecoveryInstance& inst,
                                   const FixedRank& manifold,
                                   const FixedRankPoint& x,
                                   ExecPolicy policy) {
  const Eigen::MatrixXd xd = manifold.ambient(x);
  Eigen::Map<const Eigen::VectorXd> vec(xd.data(), xd.size());
  const Eigen::VectorXd res = kernels::matvec(inst.a, vec, policy) - inst.y;
  const Eigen::VectorXd gvec = kernels::matvec_adjoint(inst.a, res, policy);
  Eigen::Map<const Eigen::MatrixXd> gmat(gvec.data(), inst.rows, inst.cols);
  return manifold.project(x, gmat);
}

SplitProblem<FixedRank> recovery_problem(const RecoveryInstance& inst,
                                         const FixedRank& manifold,
                                         ExecPolicy policy) {
  const RecoveryInstance* pi = &inst;
  const FixedRank* pm = &manifold;

  SplitProblem<FixedRank> problem;
  problem.manifold = pm;
  problem.g = [pi, pm, policy](const FixedRankPoint& x) {
    return recovery_cost(*pi, *pm, x, policy);
  };
  problem.grad_g = [pi, pm, policy](const FixedRankPoint& x) {
    return recovery_gradient(*pi, *pm, x, policy);
  };
  problem.h = [pi](const FixedRankPoint& x) {
    return pi->mu * fixed_rank_row_norms(x).sum();
  };
  problem.prox_h = [pi, pm](const FixedRankPoint& z, double lambda) {
    return rowwise_group_soft_threshold(*pm, z, lambda * pi->mu);
  };
  return problem;
}

StepsizeStrategy recovery_constant_strategy() {
  StepsizeStrategy strategy;
  strategy.mode = StepsizeMode::Constant;
  strategy.lambda_bar = 0.25;
  return strategy;
}

StepsizeStrategy recovery_backtracking_strategy() {
  StepsizeStrategy strategy;
  strategy.mode = StepsizeMode::Backtracking;
  strategy.initial_guess = 0.5;
  strategy.beta = 0.5;
  strategy.eta = 0.5;
  return strategy;
}

std::vector<int> recovery_detected_support(const FixedRankPoint& x,
                                           double tol) {
  const Eigen::VectorXd norms = fixed_rank_row_norms(x);
  std::vector<int> rows;
  for (int i = 0; i < norms.size(); ++i)
    if (norms(i) > tol) rows.push_back(i);
  return rows;
}

double recovery_off_support_error(const RecoveryInstance& inst,
                                  const FixedRankPoint& x) {
  const Eigen::VectorXd norms = fixed_rank_row_norms(x);
  std::vector<char> on(inst.rows, 0);
  for (int i : inst.support) on[i] = 1;
  double acc = 0.0;
  int count = 0;
  for (int i = 0; i < inst.rows; ++i) {
    if (on[i]) continue;
    acc += norms(i);
    ++count;
  }
  return count > 0 ? acc / count : 0.0;
}

double recovery_relative_error(const RecoveryInstance& inst,
                               const FixedRankPoint& x) {
  const Eigen::MatrixXd xd =
      x.u * x.sigma.asDiagonal() * x.v.transpose();
  return (xd - inst.x_true).norm() / inst.x_true.norm();
}

}  // namespace ncrpg
