#include "ncrpg/geometry/grassmann.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "ncrpg/errors.hpp"

namespace ncrpg {

namespace {

constexpr double kLogSingularTol = 1e-12;

// Polar factor of a square matrix (nearest orthogonal matrix).
Eigen::MatrixXd polar_factor(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd r =
      qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  for (int j = 0; j < m.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Grassmann::Grassmann(int n, int r, double kappa_max)
    : n_(n), r_(r), kappa_max_(kappa_max) {
  if (r < 1 || n <= r) throw InvalidConfig("Grassmann: need 1 <= r < n");
  if (!(kappa_max > 0.0))
    throw InvalidConfig("Grassmann: kappa_max must be positive");
}

void Grassmann::require_shape(const Eigen::MatrixXd& m, const char* what) const {
  if (m.rows() != n_ || m.cols() != r_) {
    std::ostringstream msg;
    msg << "Grassmann(" << n_ << "," << r_ << "): " << what << " is "
        << m.rows() << "x" << m.cols();
    throw DimensionError(msg.str());
  }
}

double Grassmann::inner(const Point& p, const Tangent& x, const Tangent& y) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  require_shape(y, "tangent");
  return (x.array() * y.array()).sum();
}

double Grassmann::norm(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  return x.norm();
}

Grassmann::Point Grassmann::exp(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  if (x.norm() == 0.0) return p;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  Eigen::VectorXd s = svd.singularValues();
  Eigen::MatrixXd q =
      (p * v) * s.array().cos().matrix().asDiagonal() * v.transpose() +
      u * s.array().sin().matrix().asDiagonal() * v.transpose();
  // Columns stay orthonormal in exact arithmetic; clean up drift if any.
  if ((q.transpose() * q - Eigen::MatrixXd::Identity(r_, r_)).norm() > 1e-13)
    q = orthonormalize(q);
  return q;
}

Grassmann::Tangent Grassmann::log(const Point& p, const Point& q) const {
  require_shape(p, "point");
  require_shape(q, "point");
  Eigen::MatrixXd a = p.transpose() * q;
  Eigen::JacobiSVD<Eigen::MatrixXd> asvd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (asvd.singularValues()(r_ - 1) < kLogSingularTol)
    throw IllPosedLog(
        "Grassmann::log: a principal angle reached pi/2 (p^T q singular)");
  // L = (q - p a) a^{-1}; log = U atan(S) V^T for L = U S V^T.
  Eigen::MatrixXd l = (q - p * a) * asvd.matrixV() *
                      asvd.singularValues().cwiseInverse().asDiagonal() *
                      asvd.matrixU().transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> lsvd(
      l, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd theta = lsvd.singularValues().array().atan();
  return lsvd.matrixU() * theta.asDiagonal() * lsvd.matrixV().transpose();
}

double Grassmann::dist(const Point& p, const Point& q) const {
  require_shape(p, "point");
  require_shape(q, "point");
  Eigen::MatrixXd a = p.transpose() * q;
  Eigen::JacobiSVD<Eigen::MatrixXd> asvd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (asvd.singularValues()(r_ - 1) >= kLogSingularTol) {
    Eigen::MatrixXd l = (q - p * a) * asvd.matrixV() *
                        asvd.singularValues().cwiseInverse().asDiagonal() *
                        asvd.matrixU().transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> lsvd(l);
    return lsvd.singularValues().array().atan().matrix().norm();
  }
  // Boundary: arccos of the cosines (accurate for angles near pi/2).
  double sq = 0.0;
  for (int i = 0; i < r_; ++i) {
    double c = std::min(1.0, asvd.singularValues()(i));
    double t = std::acos(c);
    sq += t * t;
  }
  return std::sqrt(sq);
}

Grassmann::Point Grassmann::geodesic_point(const Point& p, const Point& q,
                                           double t) const {
  Tangent u = log(p, q);
  double d = u.norm();
  if (d == 0.0) return p;
  return exp(p, (t / d) * u);
}

Grassmann::Tangent Grassmann::transport(const Point& p, const Point& q,
                                        const Tangent& x) const {
  require_shape(x, "tangent");
  Tangent h = log(p, q);
  if (h.norm() == 0.0) return x;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  Eigen::VectorXd s = svd.singularValues();
  Eigen::MatrixXd ux = u.transpose() * x;
  Eigen::VectorXd neg_sin = -s.array().sin();
  Eigen::VectorXd cos_s = s.array().cos();
  Eigen::MatrixXd tx =
      ((p * v) * neg_sin.asDiagonal() + u * cos_s.asDiagonal()) * ux + x -
      u * ux;
  // Re-anchor from exp's representative of q to the caller's.
  Point q_hat = exp(p, h);
  Eigen::MatrixXd align = polar_factor(q_hat.transpose() * q);
  tx = tx * align;
  return tx - q * (q.transpose() * tx);
}

Grassmann::Tangent Grassmann::project(const Point& p,
                                      const Eigen::MatrixXd& z) const {
  require_shape(p, "point");
  require_shape(z, "ambient matrix");
  return z - p * (p.transpose() * z);
}

Grassmann::Tangent Grassmann::zero_tangent(const Point& p) const {
  require_shape(p, "point");
  return Eigen::MatrixXd::Zero(n_, r_);
}

Grassmann::Point Grassmann::random_point(Rng& rng) const {
  return orthonormalize(rng.normal_matrix(n_, r_));
}

Grassmann::Tangent Grassmann::random_tangent(const Point& p, double stddev,
                                             Rng& rng) const {
  require_shape(p, "point");
  return project(p, stddev * rng.normal_matrix(n_, r_));
}

double Grassmann::check_point(const Point& p) const {
  require_shape(p, "point");
  return (p.transpose() * p - Eigen::MatrixXd::Identity(r_, r_))
      .cwiseAbs()
      .maxCoeff();
}

double Grassmann::check_tangent(const Point& p, const Tangent& x) const {
  require_shape(p, "point");
  require_shape(x, "tangent");
  return (p.transpose() * x).cwiseAbs().maxCoeff();
}

}  // namespace ncrpg
