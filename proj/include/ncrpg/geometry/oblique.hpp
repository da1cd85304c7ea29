#pragma once

#include <Eigen/Core>

#include "ncrpg/curvature.hpp"
#include "ncrpg/geometry/sphere.hpp"
#include "ncrpg/parallel.hpp"
#include "ncrpg/random.hpp"

namespace ncrpg {

// Oblique manifold OB(n, r): n x r matrices with unit-norm columns, the
// r-fold metric product of S^{n-1}. All operations act columnwise; the
// product distance is the l2 norm of the columnwise sphere distances.
class Oblique {
 public:
  using Point = Eigen::MatrixXd;
  using Tangent = Eigen::MatrixXd;

  Oblique(int n, int r);

  int rows() const { return n_; }
  int cols() const { return r_; }
  int dim() const { return r_ * (n_ - 1); }
  CurvatureBounds curvature_bounds() const {
    // Product geometry: flat directions across factors, spherical within.
    return n_ >= 3 ? CurvatureBounds{0.0, 1.0} : CurvatureBounds{0.0, 0.0};
  }
  bool has_exact_exp_log() const { return true; }

  double inner(const Point& p, const Tangent& x, const Tangent& y) const;
  double norm(const Point& p, const Tangent& x) const;

  Point exp(const Point& p, const Tangent& x) const;
  Tangent log(const Point& p, const Point& q) const;
  double dist(const Point& p, const Point& q) const;
  Point geodesic_point(const Point& p, const Point& q, double t) const;
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

  double check_point(const Point& p) const;
  double check_tangent(const Point& p, const Tangent& x) const;

  const Sphere& factor() const { return sphere_; }

 private:
  void require_shape(const Eigen::MatrixXd& m, const char* what) const;
  int n_, r_;
  Sphere sphere_;
};

}  // namespace ncrpg
