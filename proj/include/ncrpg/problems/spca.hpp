#pragma once

#include <Eigen/Core>

#include "ncrpg/geometry/oblique.hpp"
#include "ncrpg/prox.hpp"
#include "ncrpg/random.hpp"
#include "ncrpg/solver.hpp"

namespace ncrpg {

// Sparse PCA on the oblique manifold:
//   min_{X in OB(n,r)}  0.5*||X^T A^T A X - D^2||_F^2 + mu*||X||_1
// where D holds the r leading singular values of the (centered, normalized)
// data matrix A. At mu = 0 the loadings of standard PCA are a global
// minimizer with objective 0.
struct SparsePcaInstance {
  int n = 0, r = 0, m = 0;
  double mu = 0.0;
  Eigen::MatrixXd a;     // processed data matrix, m x n
  Eigen::MatrixXd gram;  // a^T a (cached)
  Eigen::VectorXd d;     // r leading singular values of a
  double fro_sq = 0.0;   // ||a||_F^2 = n after normalization
};

// Draw a standard-normal m x n data matrix, center each column and scale it
// to unit Euclidean norm.
SparsePcaInstance spca_make(int n, int r, int m, double mu, Rng& rng);

double spca_cost(const SparsePcaInstance& inst, const Eigen::MatrixXd& x);

// Euclidean gradient 2 * A^T A * X * (X^T A^T A X - D^2).
Eigen::MatrixXd spca_euclidean_gradient(const SparsePcaInstance& inst,
                                        const Eigen::MatrixXd& x);

// Riemannian gradient: columnwise projection of the Euclidean gradient.
Eigen::MatrixXd spca_gradient(const SparsePcaInstance& inst,
                              const Oblique& manifold,
                              const Eigen::MatrixXd& x);

// Wire the instance into a split problem (g smooth, h = mu*||.||_1 with the
// columnwise sphere prox). The instance and manifold must outlive the result.
SplitProblem<Oblique> spca_problem(const SparsePcaInstance& inst,
                                   const Oblique& manifold,
                                   SphereL1ProxConfig prox_cfg = {},
                                   ExecPolicy policy = default_exec_policy());

// Default stepsize choices for this problem: constant lambda =
// 1/(2*||A||_F^2); backtracking from s = 5/||A||_F^2 with beta = eta = 0.5.
// No level-set bounds attached (admissibility is not certified a priori).
StepsizeStrategy spca_constant_strategy(const SparsePcaInstance& inst);
StepsizeStrategy spca_backtracking_strategy(const SparsePcaInstance& inst);

}  // namespace ncrpg
