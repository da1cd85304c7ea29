#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ncrpg/geometry/fixed_rank.hpp"
#include "ncrpg/geometry/oblique.hpp"
#include "ncrpg/parallel.hpp"

namespace ncrpg {

// Componentwise soft threshold sign(x) * max(|x| - t, 0).
double soft_threshold(double x, double t);
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double t);

// sigma(y) = xi * sqrt(1 - <x,y>^2) / arccos(<x,y>) for unit vectors x, y.
// Continuous limit xi at <x,y> = 1; throws DegenerateProx at <x,y> = -1.
// Values lie in [2*xi/pi, xi] for <x,y> in [0, 1].
double sigma_map(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 double xi);

// Soft threshold followed by renormalization; throws DegenerateProx when the
// threshold wipes out every entry.
Eigen::VectorXd normalized_prox(const Eigen::VectorXd& x, double t);

struct SphereL1ProxConfig {
  double tol = 1e-10;
  int max_iterations = 10;
};

struct SphereL1ProxResult {
  Eigen::VectorXd point;
  double t_final = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> t_history;  // t_0 = xi, then each fixed-point update
};

// Proximal map of xi*||.||_1 on the sphere (geodesic-distance penalty):
//   argmin_y 0.5*dist(x, y)^2 + xi*||y||_1
// via the scalar fixed-point iteration t <- sigma(x, normalized_prox(x, t)),
// started at t = xi. The iteration contracts when xi is below
// sphere_l1_xi_bound(x); it typically settles in 2-3 updates when xi is well
// inside the bound (the solver regime, xi = lambda*mu).
SphereL1ProxResult sphere_l1_prox(const Eigen::VectorXd& x, double xi,
                                  const SphereL1ProxConfig& cfg = {});

// Largest xi with a contraction guarantee:
//   min{ pi/(8*sqrt(nnz)) * (sqrt(16*sqrt(nnz)*||x||_inf + pi^2) - pi),
//        ||x||_inf }.
double sphere_l1_xi_bound(const Eigen::VectorXd& x);

// Guaranteed contraction factor 4*xi^2*sqrt(nnz) / ((||x||_inf - xi)*pi^2)
// of the scalar fixed-point map (valid when below sphere_l1_xi_bound).
double sphere_l1_contraction_ratio(const Eigen::VectorXd& x, double xi);

// Columnwise sphere l1 prox on the oblique manifold (columns independent,
// runs under the given execution policy). stats_out, when non-null, receives
// the worst column's iteration count and the AND of convergence flags.
struct ObliqueL1ProxStats {
  int max_iterations = 0;
  bool all_converged = true;
};
Eigen::MatrixXd oblique_l1_prox(const Oblique& manifold,
                                const Eigen::MatrixXd& p, double xi,
                                const SphereL1ProxConfig& cfg = {},
                                ExecPolicy policy = default_exec_policy(),
                                ObliqueL1ProxStats* stats_out = nullptr);

// Proximal map of h = tau * dist(., q_bar) on an exact-geodesic manifold:
// walk from p toward q_bar by arclength min{lambda*tau, dist(p, q_bar)}.
template <class M>
typename M::Point geodesic_distance_prox(const M& manifold,
                                         const typename M::Point& p,
                                         const typename M::Point& q_bar,
                                         double lambda, double tau) {
  double d = manifold.dist(p, q_bar);
  double step = std::min(lambda * tau, d);
  if (step <= 0.0) return p;
  return manifold.geodesic_point(p, q_bar, step);
}

// Rowwise group soft threshold on a fixed-rank point: rows of the ambient
// matrix with norm > t shrink by (norm - t)/norm, the rest become zero; the
// result is recompressed to a compact SVD. Throws RankDropError when the
// thresholded matrix has rank < r.
FixedRankPoint rowwise_group_soft_threshold(const FixedRank& manifold,
                                            const FixedRankPoint& z, double t);

// Row norms of the ambient matrix of a fixed-rank point (cheap: norms of
// the rows of u * diag(sigma)).
Eigen::VectorXd fixed_rank_row_norms(const FixedRankPoint& z);

// Brute-force prox oracle on S^2: coarse-to-fine grid minimization of
//   phi(y) = h(y) + dist(p, y)^2 / (2*lambda)
// over a Fibonacci grid with grid_points nodes plus two local refinement
// passes. Independent of the closed-form prox implementations.
Eigen::Vector3d sphere2_grid_prox_oracle(
    const std::function<double(const Eigen::Vector3d&)>& h,
    const Eigen::Vector3d& p, double lambda, int grid_points = 1000000);

}  // namespace ncrpg
