#include "ncrpg/geometry/sphere.hpp"

#include <cmath>
#include <sstream>

#include "ncrpg/errors.hpp"

namespace ncrpg {

Sphere::Sphere(int ambient_n) : n_(ambient_n) {
  if (ambient_n < 2) throw InvalidConfig("Sphere: ambient dimension must be >= 2");
}

void Sphere::require_shape(const Eigen::VectorXd& v, const char* what) const {
  if (v.size() != n_) {
    std::ostringstream msg;
    msg << "Sphere(S^" << n_ - 1 << "): " << what << " has size " << v.size();
    throw DimensionError(msg.str());
  }
}

double Sphere::inner(const Point& p, const Tangent& x, const Tangent& y) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  require_shape(y, "tangent");
  return x.dot(y);
}

double Sphere::norm(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  return x.norm();
}

Sphere::Point Sphere::exp(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  double d = x.norm();
  if (d == 0.0) return p;
  Point q = std::cos(d) * p + (std::sin(d) / d) * x;
  q.normalize();
  return q;
}

Sphere::Tangent Sphere::log(const Point& p, const Point& q) const {
  require_shape(p, "point");
  require_shape(q, "point");
  double c = p.dot(q);
  if (c < -1.0 + 1e-9)
    throw IllPosedLog("Sphere::log: points are antipodal or nearly so");
  if (c > 1.0) c = 1.0;
  Tangent v = q - c * p;
  double s = v.norm();  // sin(theta)
  double theta = std::atan2(s, c);
  if (s == 0.0) return zero_tangent(p);
  return (theta / s) * v;
}

double Sphere::dist(const Point& p, const Point& q) const {
  require_shape(p, "point");
  require_shape(q, "point");
  double c = p.dot(q);
  double s = (q - c * p).norm();
  return std::atan2(s, c);
}

Sphere::Point Sphere::geodesic_point(const Point& p, const Point& q,
                                     double t) const {
  Tangent u = log(p, q);
  double d = u.norm();
  if (d == 0.0) return p;
  return exp(p, (t / d) * u);
}

Sphere::Tangent Sphere::transport(const Point& p, const Point& q,
                                  const Tangent& x) const {
  require_shape(x, "tangent");
  Tangent u = log(p, q);
  double theta = u.norm();
  if (theta == 0.0) return x;
  Tangent v = log(q, p);
  // Rotate in the span{u, v} plane, identity on its orthogonal complement.
  return x - (u.dot(x) / (theta * theta)) * (u + v);
}

Sphere::Tangent Sphere::project(const Point& p, const Eigen::VectorXd& z) const {
  require_shape(p, "point");
  require_shape(z, "ambient vector");
  return z - p.dot(z) * p;
}

Sphere::Tangent Sphere::zero_tangent(const Point& p) const {
  require_shape(p, "point");
  return Eigen::VectorXd::Zero(n_);
}

Sphere::Point Sphere::random_point(Rng& rng) const {
  Point p = rng.normal_vector(n_);
  double nrm = p.norm();
  while (nrm < 1e-12) {
    p = rng.normal_vector(n_);
    nrm = p.norm();
  }
  return p / nrm;
}

Sphere::Tangent Sphere::random_tangent(const Point& p, double stddev,
                                       Rng& rng) const {
  require_shape(p, "point");
  return project(p, stddev * rng.normal_vector(n_));
}

double Sphere::check_point(const Point& p) const {
  require_shape(p, "point");
  return std::abs(p.norm() - 1.0);
}

double Sphere::check_tangent(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  return std::abs(p.dot(x));
}

}  // namespace ncrpg
