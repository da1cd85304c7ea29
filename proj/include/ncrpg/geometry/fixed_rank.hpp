#pragma once

#include <Eigen/Core>

#include "ncrpg/curvature.hpp"
#include "ncrpg/random.hpp"

namespace ncrpg {

// Point on the manifold of M x N matrices of fixed rank r, stored as a
// compact SVD triple: X = u * diag(sigma) * v^T with orthonormal u, v and
// sigma descending positive.
struct FixedRankPoint {
  Eigen::MatrixXd u;      // M x r
  Eigen::VectorXd sigma;  // r
  Eigen::MatrixXd v;      // N x r
};

// Tangent vector at X in factored form:
//   T = u * m * v^T + up * v^T + u * vp^T,  u^T up = 0,  v^T vp = 0.
struct FixedRankTangent {
  Eigen::MatrixXd m;   // r x r
  Eigen::MatrixXd up;  // M x r
  Eigen::MatrixXd vp;  // N x r
};

// Fixed-rank matrices with the embedded (Frobenius) metric. No closed-form
// exponential/logarithm is available; the solver runs in retraction mode via
// the orthographic retraction, whose inverse is the tangent-space projection
// of the difference.
class FixedRank {
 public:
  using Point = FixedRankPoint;
  using Tangent = FixedRankTangent;

  // Curvature is unbounded in general (pinch points at rank drops); pass
  // explicit bounds if problem structure provides them.
  FixedRank(int M, int N, int r,
            CurvatureBounds bounds = {-kInf, kInf});

  int rows() const { return m_rows_; }
  int cols() const { return n_cols_; }
  int rank() const { return r_; }
  int dim() const { return r_ * (m_rows_ + n_cols_ - r_); }
  CurvatureBounds curvature_bounds() const { return bounds_; }
  bool has_exact_exp_log() const { return false; }

  double inner(const Point& p, const Tangent& x, const Tangent& y) const;
  double norm(const Point& p, const Tangent& x) const;

  // Exact geodesic operations are unavailable; these throw.
  Point exp(const Point& p, const Tangent& x) const;
  Tangent log(const Point& p, const Point& q) const;
  double dist(const Point& p, const Point& q) const;
  Point geodesic_point(const Point& p, const Point& q, double t) const;
  Tangent transport(const Point& p, const Point& q, const Tangent& x) const;

  // Orthographic retraction
  //   R_X(H) = (u(S+m) + up) (S+m)^{-1} ((S+m)v^T + vp^T),  S = diag(sigma),
  // recompressed to a compact SVD triple. Throws RetractionSingularity when
  // S+m (or the result) has a singular value below 1e-14.
  Point retract(const Point& p, const Tangent& x) const;

  // Inverse orthographic retraction: projection of q - p onto T_p.
  Tangent inverse_retract(const Point& p, const Point& q) const;
  double dist_retraction(const Point& p, const Point& q) const;

  Tangent project(const Point& p, const Eigen::MatrixXd& z) const;
  Tangent zero_tangent(const Point& p) const;
  Tangent scale(const Tangent& x, double a) const;

  Point random_point(Rng& rng) const;
  Tangent random_tangent(const Point& p, double stddev, Rng& rng) const;

  double check_point(const Point& p) const;
  double check_tangent(const Point& p, const Tangent& x) const;

  Eigen::MatrixXd ambient(const Point& p) const;
  Eigen::MatrixXd ambient(const Point& p, const Tangent& x) const;

 private:
  void require_point_shape(const Point& p) const;
  void require_tangent_shape(const Tangent& x) const;
  int m_rows_, n_cols_, r_;
  CurvatureBounds bounds_;
};

}  // namespace ncrpg
