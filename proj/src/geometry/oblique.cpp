#include "ncrpg/geometry/oblique.hpp"

#include <cmath>
#include <sstream>

#include "ncrpg/errors.hpp"

namespace ncrpg {

Oblique::Oblique(int n, int r) : n_(n), r_(r), sphere_(n) {
  if (n < 2 || r < 1) throw InvalidConfig("Oblique: need n >= 2, r >= 1");
}

void Oblique::require_shape(const Eigen::MatrixXd& m, const char* what) const {
  if (m.rows() != n_ || m.cols() != r_) {
    std::ostringstream msg;
    msg << "Oblique(" << n_ << "," << r_ << "): " << what << " is "
        << m.rows() << "x" << m.cols();
    throw DimensionError(msg.str());
  }
}

double Oblique::inner(const Point& p, const Tangent& x, const Tangent& y) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  require_shape(y, "tangent");
  return (x.array() * y.array()).sum();
}

double Oblique::norm(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  return x.norm();
}

Oblique::Point Oblique::exp(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  Point q(n_, r_);
  for (int j = 0; j < r_; ++j) q.col(j) = sphere_.exp(p.col(j), x.col(j));
  return q;
}

Oblique::Tangent Oblique::log(const Point& p, const Point& q) const {
  require_shape(p, "point");
  require_shape(q, "point");
  Tangent x(n_, r_);
  for (int j = 0; j < r_; ++j) x.col(j) = sphere_.log(p.col(j), q.col(j));
  return x;
}

double Oblique::dist(const Point& p, const Point& q) const {
  require_shape(p, "point");
  require_shape(q, "point");
  double sq = 0.0;
  for (int j = 0; j < r_; ++j) {
    double d = sphere_.dist(p.col(j), q.col(j));
    sq += d * d;
  }
  return std::sqrt(sq);
}

Oblique::Point Oblique::geodesic_point(const Point& p, const Point& q,
                                       double t) const {
  Tangent u = log(p, q);
  double d = u.norm();
  if (d == 0.0) return p;
  return exp(p, (t / d) * u);
}

Oblique::Tangent Oblique::transport(const Point& p, const Point& q,
                                    const Tangent& x) const {
  require_shape(x, "tangent");
  Tangent y(n_, r_);
  for (int j = 0; j < r_; ++j)
    y.col(j) = sphere_.transport(p.col(j), q.col(j), x.col(j));
  return y;
}

Oblique::Tangent Oblique::project(const Point& p, const Eigen::MatrixXd& z) const {
  require_shape(p, "point");
  require_shape(z, "ambient matrix");
  // Columnwise: z_j - <p_j, z_j> p_j.
  return z - p * (p.array() * z.array()).colwise().sum().matrix().asDiagonal();
}

Oblique::Tangent Oblique::zero_tangent(const Point& p) const {
  require_shape(p, "point");
  return Eigen::MatrixXd::Zero(n_, r_);
}

Oblique::Point Oblique::random_point(Rng& rng) const {
  Point p(n_, r_);
  for (int j = 0; j < r_; ++j) p.col(j) = sphere_.random_point(rng);
  return p;
}

Oblique::Tangent Oblique::random_tangent(const Point& p, double stddev,
                                         Rng& rng) const {
  require_shape(p, "point");
  return project(p, stddev * rng.normal_matrix(n_, r_));
}

double Oblique::check_point(const Point& p) const {
  require_shape(p, "point");
  double worst = 0.0;
  for (int j = 0; j < r_; ++j)
    worst = std::max(worst, std::abs(p.col(j).norm() - 1.0));
  return worst;
}

double Oblique::check_tangent(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  double worst = 0.0;
  for (int j = 0; j < r_; ++j)
    worst = std::max(worst, std::abs(p.col(j).dot(x.col(j))));
  return worst;
}

}  // namespace ncrpg
