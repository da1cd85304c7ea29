#include "ncrpg/validation.hpp"

#include <Eigen/QR>

#include "ncrpg/geometry/euclidean.hpp"
#include "ncrpg/prox.hpp"

namespace ncrpg {

bool all_passed(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

std::vector<CheckReport> grassmann_invariance_suite(const Grassmann& manifold,
                                                    Rng& rng, int trials) {
  detail::ViolationAcc dist_inv{"representative_invariant_distance", 1e-9};
  detail::ViolationAcc exp_inv{"representative_equivariant_exp", 1e-8};
  detail::ViolationAcc log_inv{"representative_equivariant_log", 1e-8};

  const int r = manifold.cols();
  const double cap = 0.45 * pi_kappa(manifold.curvature_bounds().kappa_max);

  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd p = manifold.random_point(rng);
    const Eigen::MatrixXd q = manifold.random_point(rng);
    // Random orthogonal change of basis for the representative of p.
    const Eigen::MatrixXd o = orthonormalize(rng.normal_matrix(r, r));
    const Eigen::MatrixXd p2 = p * o;

    const double d = manifold.dist(p, q);
    dist_inv.feed(std::abs(manifold.dist(p2, q) - d) / (1.0 + d));

    Eigen::MatrixXd x = manifold.project(p, rng.normal_matrix(p.rows(), r));
    const double nx = manifold.norm(p, x);
    if (nx > cap) x *= cap / nx;
    // The same tangent in the rotated basis is x * o; both exps must land on
    // the same subspace.
    exp_inv.feed(manifold.dist(manifold.exp(p, x), manifold.exp(p2, x * o)));

    // log toward q transforms like a tangent at p.
    const Eigen::MatrixXd l = manifold.log(p, q);
    const Eigen::MatrixXd l2 = manifold.log(p2, q);
    log_inv.feed((l2 - l * o).norm() / (1.0 + l.norm()));
  }

  return {dist_inv.report(), exp_inv.report(), log_inv.report()};
}

CheckReport ista_equivalence_check(int n, int m, double mu, double lambda,
                                   int iterations, Rng& rng, double tol) {
  const Eigen::MatrixXd a = rng.normal_matrix(m, n);
  const Eigen::VectorXd b = rng.normal_vector(m);
  const Eigen::VectorXd x0 = rng.normal_vector(n);

  Euclidean manifold(n);
  SplitProblem<Euclidean> problem;
  problem.manifold = &manifold;
  problem.g = [&](const Eigen::VectorXd& x) {
    return 0.5 * (a * x - b).squaredNorm();
  };
  problem.grad_g = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(a.transpose() * (a * x - b));
  };
  problem.h = [&](const Eigen::VectorXd& x) { return mu * x.lpNorm<1>(); };
  problem.prox_h = [&](const Eigen::VectorXd& z, double lam) {
    return soft_threshold(z, lam * mu);
  };

  StepsizeStrategy strategy;
  strategy.mode = StepsizeMode::Constant;
  strategy.lambda_bar = lambda;

  // Hand-coded proximal gradient descent, recorded iterate by iterate.
  std::vector<Eigen::VectorXd> ista;
  ista.reserve(iterations + 1);
  Eigen::VectorXd x = x0;
  ista.push_back(x);
  for (int k = 0; k < iterations; ++k) {
    x = soft_threshold(x - lambda * (a.transpose() * (a * x - b)),
                       lambda * mu);
    ista.push_back(x);
  }

  double worst = 0.0;
  IterationObserver<Euclidean> observer =
      [&](int k, const Eigen::VectorXd& p, double, double, double) {
        if (k <= iterations) worst = std::max(worst, (p - ista[k]).norm());
      };

  SolveOptions options;
  options.tol = 1e-300;  // never triggers: compare full trajectories
  options.max_iterations = iterations;
  SolveResult<Euclidean> res = solve(problem, x0, strategy, options, observer);
  worst = std::max(worst, (res.point - ista[iterations]).norm());

  CheckReport rep;
  rep.name = "ista_equivalence";
  rep.max_violation = worst;
  rep.passed = worst <= tol;
  return rep;
}

}  // namespace ncrpg
