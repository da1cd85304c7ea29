#pragma once

#include <vector>

#include <Eigen/Core>

#include "ncrpg/geometry/fixed_rank.hpp"
#include "ncrpg/parallel.hpp"
#include "ncrpg/random.hpp"
#include "ncrpg/solver.hpp"

namespace ncrpg {

// Row-sparse low-rank matrix recovery from Gaussian measurements:
//   min_X  (1/2) ||A vec(X) - y||^2 + mu * sum_i ||X_{i,:}||_2
// over rank-r matrices X of size rows x cols. The ground truth has s nonzero
// rows and rank r; observations are noiseless, the initial point is the
// rank-r truncation of the noise-perturbed ground truth.
struct RecoveryInstance {
  int rows = 0, cols = 0;  // ambient matrix size
  int r = 0;               // rank
  int s = 0;               // nonzero rows of x_true
  int m = 0;               // number of measurements
  double mu = 0.0;
  double noise_scale = 0.0;   // stddev of the perturbation defining x0
  Eigen::MatrixXd a;          // m x (rows*cols) sensing matrix
  Eigen::VectorXd y;          // a * vec(x_true), column-major vec
  Eigen::MatrixXd x_true;     // rows x cols
  std::vector<int> support;   // sorted nonzero row indices, size s
  FixedRankPoint x0;
};

// Measurement count 2.2x the degrees of freedom r*(s + cols - r) of a rank-r
// matrix with s nonzero rows.
int recovery_default_m(int r, int s, int cols);

// Draw order (one rng stream): support shuffle, row factor (s x r), column
// factor (r x cols), sensing matrix scaled by 1/sqrt(m), then the x0 noise.
// noise_scale < 0 selects the default 1/sqrt(m).
RecoveryInstance recovery_make(int rows, int cols, int r, int s, int m,
                               double mu, double noise_scale, Rng& rng);

double recovery_cost(const RecoveryInstance& inst, const FixedRank& manifold,
                     const FixedRankPoint& x,
                     ExecPolicy policy = default_exec_policy());

FixedRankTangent recovery_gradient(const RecoveryInstance& inst,
                                   const FixedRank& manifold,
                                   const FixedRankPoint& x,
                                   ExecPolicy policy = default_exec_policy());

SplitProblem<FixedRank> recovery_problem(const RecoveryInstance& inst,
                                         const FixedRank& manifold,
                                         ExecPolicy policy =
                                             default_exec_policy());

// Constant stepsize 0.25 (uncertified: no curvature bounds for the
// fixed-rank manifold).
StepsizeStrategy recovery_constant_strategy();

// Backtracking from s = 0.5 with beta = eta = 0.5.
StepsizeStrategy recovery_backtracking_strategy();

// Row indices whose ambient row norm exceeds tol.
std::vector<int> recovery_detected_support(const FixedRankPoint& x,
                                           double tol = 1e-6);

// Mean row norm over the complement of the true support.
double recovery_off_support_error(const RecoveryInstance& inst,
                                  const FixedRankPoint& x);

// ||X - X_true||_F / ||X_true||_F.
double recovery_relative_error(const RecoveryInstance& inst,
                               const FixedRankPoint& x);

}  // namespace ncrpg
