#include "ncrpg/geometry/euclidean.hpp"

#include <sstream>

#include "ncrpg/errors.hpp"

namespace ncrpg {

Euclidean::Euclidean(int n) : n_(n) {
  if (n < 1) throw InvalidConfig("Euclidean: n must be >= 1");
}

void Euclidean::require_shape(const Eigen::VectorXd& v,
                              const char* what) const {
  if (v.size() != n_) {
    std::ostringstream msg;
    msg << "Euclidean(" << n_ << "): " << what << " has size " << v.size();
    throw DimensionError(msg.str());
  }
}

double Euclidean::inner(const Point& p, const Tangent& x,
                        const Tangent& y) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  require_shape(y, "tangent");
  return x.dot(y);
}

double Euclidean::norm(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  return x.norm();
}

Euclidean::Point Euclidean::exp(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  return p + x;
}

Euclidean::Tangent Euclidean::log(const Point& p, const Point& q) const {
  require_shape(p, "point");
  require_shape(q, "point");
  return q - p;
}

double Euclidean::dist(const Point& p, const Point& q) const {
  return (q - p).norm();
}

Euclidean::Point Euclidean::geodesic_point(const Point& p, const Point& q,
                                           double t) const {
  double d = dist(p, q);
  if (d == 0.0) return p;
  return p + (t / d) * (q - p);
}

Euclidean::Tangent Euclidean::transport(const Point& p, const Point& q,
                                        const Tangent& x) const {
  require_shape(p, "point");
  require_shape(q, "point");
  require_shape(x, "tangent");
  return x;
}

Euclidean::Tangent Euclidean::project(const Point& p,
                                      const Eigen::VectorXd& z) const {
  require_shape(p, "point");
  require_shape(z, "ambient vector");
  return z;
}

Euclidean::Tangent Euclidean::zero_tangent(const Point& p) const {
  require_shape(p, "point");
  return Eigen::VectorXd::Zero(n_);
}

Euclidean::Point Euclidean::random_point(Rng& rng) const {
  return rng.normal_vector(n_);
}

Euclidean::Tangent Euclidean::random_tangent(const Point& p, double stddev,
                                             Rng& rng) const {
  require_shape(p, "point");
  return stddev * rng.normal_vector(n_);
}

double Euclidean::check_point(const Point& p) const {
  require_shape(p, "point");
  return 0.0;
}

double Euclidean::check_tangent(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  return 0.0;
}

}  // namespace ncrpg
