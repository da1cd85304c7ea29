#pragma once

#include <Eigen/Core>

#include "ncrpg/curvature.hpp"
#include "ncrpg/random.hpp"

namespace ncrpg {

// R^n with the usual inner product. exp/log are vector addition/subtraction;
// the retraction aliases the exponential, so both solver modes coincide here.
class Euclidean {
 public:
  using Point = Eigen::VectorXd;
  using Tangent = Eigen::VectorXd;

  explicit Euclidean(int n);

  int ambient_dim() const { return n_; }
  int dim() const { return n_; }
  CurvatureBounds curvature_bounds() const { return {0.0, 0.0}; }
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

  Tangent project(const Point& p, const Eigen::VectorXd& z) const;
  Tangent zero_tangent(const Point& p) const;
  Tangent scale(const Tangent& x, double a) const { return a * x; }

  Point random_point(Rng& rng) const;
  Tangent random_tangent(const Point& p, double stddev, Rng& rng) const;

  double check_point(const Point& p) const;
  double check_tangent(const Point& p, const Tangent& x) const;

 private:
  void require_shape(const Eigen::VectorXd& v, const char* what) const;
  int n_;
};

}  // namespace ncrpg
