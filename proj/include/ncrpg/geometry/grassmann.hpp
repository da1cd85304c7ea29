#pragma once

#include <Eigen/Core>

#include "ncrpg/curvature.hpp"
#include "ncrpg/random.hpp"

namespace ncrpg {

// Grassmann manifold Gr(n, r): r-dimensional subspaces of R^n, represented
// by n x r matrices with orthonormal columns. A subspace has many
// representatives (right-multiplication by any orthogonal r x r matrix);
// every operation here is invariant under that change, and outputs are
// anchored to the representative the caller passed in.
class Grassmann {
 public:
  using Point = Eigen::MatrixXd;
  using Tangent = Eigen::MatrixXd;

  // kappa_max is configurable; 2 is the classical upper bound for the
  // sectional curvature of real Grassmannians with r >= 2, n - r >= 2.
  Grassmann(int n, int r, double kappa_max = 2.0);

  int rows() const { return n_; }
  int cols() const { return r_; }
  int dim() const { return r_ * (n_ - r_); }
  CurvatureBounds curvature_bounds() const { return {0.0, kappa_max_}; }
  bool has_exact_exp_log() const { return true; }

  double inner(const Point& p, const Tangent& x, const Tangent& y) const;
  double norm(const Point& p, const Tangent& x) const;

  Point exp(const Point& p, const Tangent& x) const;

  // Defined when all principal angles between p and q are below pi/2
  // (equivalently p^T q invertible); throws IllPosedLog at the boundary.
  Tangent log(const Point& p, const Point& q) const;

  // l2 norm of the principal angles. Uses the accurate arctan form when
  // p^T q is invertible and falls back to arccos of its singular values at
  // the pi/2 boundary, where the logarithm no longer exists.
  double dist(const Point& p, const Point& q) const;

  Point geodesic_point(const Point& p, const Point& q, double t) const;

  // Parallel transport along the geodesic from p to q; the result is
  // re-anchored to the caller's representative of q.
  Tangent transport(const Point& p, const Point& q, const Tangent& x) const;

  Point retract(const Point& p, const Tangent& x) const { return exp(p, x); }
  Tangent inverse_retract(const Point& p, const Point& q) const {
    return log(p, q);
  }
  double dist_retraction(const Point& p, const Point& q) const {
    return dist(p, q);
  }

  Tangent project(const Point& p, const Eigen::MatrixXd& z) const;
  Tangent zero_tangent(const Point& p) const;
  Tangent scale(const Tangent& x, double a) const { return a * x; }

  Point random_point(Rng& rng) const;
  Tangent random_tangent(const Point& p, double stddev, Rng& rng) const;

  // Max violation of p^T p = I (points) and p^T x = 0 (tangents).
  double check_point(const Point& p) const;
  double check_tangent(const Point& p, const Tangent& x) const;

 private:
  void require_shape(const Eigen::MatrixXd& m, const char* what) const;
  int n_, r_;
  double kappa_max_;
};

// Thin QR factor with positive diagonal sign convention (deterministic).
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m);

}  // namespace ncrpg
