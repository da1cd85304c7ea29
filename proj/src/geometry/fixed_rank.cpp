#include "ncrpg/geometry/fixed_rank.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "ncrpg/errors.hpp"
#include "ncrpg/geometry/grassmann.hpp"

namespace ncrpg {

namespace {

constexpr double kSingularFloor = 1e-14;

// Thin QR with nonnegative-diagonal sign convention, returning both factors.
void qr_factor(const Eigen::MatrixXd& a, Eigen::MatrixXd& q,
               Eigen::MatrixXd& r) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  for (int j = 0; j < a.cols(); ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
      r.row(j) = -r.row(j);
    }
  }
}

}  // namespace

FixedRank::FixedRank(int M, int N, int r, CurvatureBounds bounds)
    : m_rows_(M), n_cols_(N), r_(r), bounds_(bounds) {
  if (r < 1 || r > std::min(M, N))
    throw InvalidConfig("FixedRank: need 1 <= r <= min(M, N)");
}

void FixedRank::require_point_shape(const Point& p) const {
  if (p.u.rows() != m_rows_ || p.u.cols() != r_ || p.sigma.size() != r_ ||
      p.v.rows() != n_cols_ || p.v.cols() != r_) {
    std::ostringstream msg;
    msg << "FixedRank(" << m_rows_ << "x" << n_cols_ << ", r=" << r_
        << "): point factors have shapes " << p.u.rows() << "x" << p.u.cols()
        << ", " << p.sigma.size() << ", " << p.v.rows() << "x" << p.v.cols();
    throw DimensionError(msg.str());
  }
}

void FixedRank::require_tangent_shape(const Tangent& x) const {
  if (x.m.rows() != r_ || x.m.cols() != r_ || x.up.rows() != m_rows_ ||
      x.up.cols() != r_ || x.vp.rows() != n_cols_ || x.vp.cols() != r_)
    throw DimensionError("FixedRank: tangent factors have wrong shapes");
}

double FixedRank::inner(const Point& p, const Tangent& x,
                        const Tangent& y) const {
  require_point_shape(p);
  require_tangent_shape(x);
  require_tangent_shape(y);
  // Cross terms vanish by u^T up = 0, v^T vp = 0, so the embedded Frobenius
  // inner product splits over the three blocks.
  return (x.m.array() * y.m.array()).sum() +
         (x.up.array() * y.up.array()).sum() +
         (x.vp.array() * y.vp.array()).sum();
}

double FixedRank::norm(const Point& p, const Tangent& x) const {
  return std::sqrt(inner(p, x, x));
}

FixedRank::Point FixedRank::exp(const Point&, const Tangent&) const {
  throw UnsupportedOperation("FixedRank: no exact exponential map");
}

FixedRank::Tangent FixedRank::log(const Point&, const Point&) const {
  throw UnsupportedOperation("FixedRank: no exact logarithm");
}

double FixedRank::dist(const Point&, const Point&) const {
  throw UnsupportedOperation("FixedRank: no exact geodesic distance");
}

FixedRank::Point FixedRank::geodesic_point(const Point&, const Point&,
                                           double) const {
  throw UnsupportedOperation("FixedRank: no exact geodesics");
}

FixedRank::Tangent FixedRank::transport(const Point&, const Point&,
                                        const Tangent&) const {
  throw UnsupportedOperation("FixedRank: no exact parallel transport");
}

FixedRank::Point FixedRank::retract(const Point& p, const Tangent& x) const {
  require_point_shape(p);
  require_tangent_shape(x);
  if (x.m.norm() == 0.0 && x.up.norm() == 0.0 && x.vp.norm() == 0.0) return p;
  Eigen::MatrixXd k = p.sigma.asDiagonal();
  k += x.m;
  Eigen::JacobiSVD<Eigen::MatrixXd> ksvd(
      k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (ksvd.singularValues()(r_ - 1) < kSingularFloor)
    throw RetractionSingularity(
        "FixedRank::retract: core matrix sigma + m is singular");
  Eigen::MatrixXd kinv = ksvd.matrixV() *
                         ksvd.singularValues().cwiseInverse().asDiagonal() *
                         ksvd.matrixU().transpose();
  Eigen::MatrixXd a = p.u * k + x.up;               // M x r
  Eigen::MatrixXd b = p.v * k.transpose() + x.vp;   // N x r
  Eigen::MatrixXd qa, ra, qb, rb;
  qr_factor(a, qa, ra);
  qr_factor(b, qb, rb);
  Eigen::MatrixXd core = ra * kinv * rb.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(
      core, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (csvd.singularValues()(r_ - 1) < kSingularFloor)
    throw RetractionSingularity(
        "FixedRank::retract: retracted point dropped rank");
  Point out;
  out.u = qa * csvd.matrixU();
  out.sigma = csvd.singularValues();
  out.v = qb * csvd.matrixV();
  return out;
}

FixedRank::Tangent FixedRank::inverse_retract(const Point& p,
                                              const Point& q) const {
  require_point_shape(p);
  require_point_shape(q);
  // P_{T_p}(q - p), assembled from the factored forms (no M x N dense).
  Eigen::MatrixXd qv = q.u * (q.sigma.asDiagonal() * (q.v.transpose() * p.v));
  Eigen::MatrixXd qtu =
      q.v * (q.sigma.asDiagonal() * (q.u.transpose() * p.u)).eval();
  Tangent out;
  out.m = p.u.transpose() * qv;
  out.up = qv - p.u * out.m;
  out.vp = qtu - p.v * (p.v.transpose() * qtu);
  out.m -= Eigen::MatrixXd(p.sigma.asDiagonal());
  return out;
}

double FixedRank::dist_retraction(const Point& p, const Point& q) const {
  return norm(p, inverse_retract(p, q));
}

FixedRank::Tangent FixedRank::project(const Point& p,
                                      const Eigen::MatrixXd& z) const {
  require_point_shape(p);
  if (z.rows() != m_rows_ || z.cols() != n_cols_)
    throw DimensionError("FixedRank::project: ambient matrix has wrong shape");
  Eigen::MatrixXd zv = z * p.v;
  Eigen::MatrixXd ztu = z.transpose() * p.u;
  Tangent out;
  out.m = p.u.transpose() * zv;
  out.up = zv - p.u * out.m;
  out.vp = ztu - p.v * (p.v.transpose() * ztu);
  return out;
}

FixedRank::Tangent FixedRank::zero_tangent(const Point& p) const {
  require_point_shape(p);
  Tangent out;
  out.m = Eigen::MatrixXd::Zero(r_, r_);
  out.up = Eigen::MatrixXd::Zero(m_rows_, r_);
  out.vp = Eigen::MatrixXd::Zero(n_cols_, r_);
  return out;
}

FixedRank::Tangent FixedRank::scale(const Tangent& x, double a) const {
  require_tangent_shape(x);
  Tangent out;
  out.m = a * x.m;
  out.up = a * x.up;
  out.vp = a * x.vp;
  return out;
}

FixedRank::Point FixedRank::random_point(Rng& rng) const {
  Point p;
  p.u = orthonormalize(rng.normal_matrix(m_rows_, r_));
  p.v = orthonormalize(rng.normal_matrix(n_cols_, r_));
  std::vector<double> s(r_);
  for (int i = 0; i < r_; ++i) s[i] = std::abs(rng.normal()) + 0.5;
  std::sort(s.begin(), s.end(), std::greater<double>());
  p.sigma = Eigen::Map<Eigen::VectorXd>(s.data(), r_);
  return p;
}

FixedRank::Tangent FixedRank::random_tangent(const Point& p, double stddev,
                                             Rng& rng) const {
  require_point_shape(p);
  Tangent out;
  out.m = stddev * rng.normal_matrix(r_, r_);
  Eigen::MatrixXd gu = stddev * rng.normal_matrix(m_rows_, r_);
  Eigen::MatrixXd gv = stddev * rng.normal_matrix(n_cols_, r_);
  out.up = gu - p.u * (p.u.transpose() * gu);
  out.vp = gv - p.v * (p.v.transpose() * gv);
  return out;
}

double FixedRank::check_point(const Point& p) const {
  require_point_shape(p);
  double worst =
      (p.u.transpose() * p.u - Eigen::MatrixXd::Identity(r_, r_))
          .cwiseAbs()
          .maxCoeff();
  worst = std::max(
      worst, (p.v.transpose() * p.v - Eigen::MatrixXd::Identity(r_, r_))
                 .cwiseAbs()
                 .maxCoeff());
  for (int i = 0; i + 1 < r_; ++i)
    worst = std::max(worst, p.sigma(i + 1) - p.sigma(i));
  worst = std::max(worst, -p.sigma(r_ - 1));
  return worst;
}

double FixedRank::check_tangent(const Point& p, const Tangent& x) const {
  require_point_shape(p);
  require_tangent_shape(x);
  double worst = (p.u.transpose() * x.up).cwiseAbs().maxCoeff();
  return std::max(worst, (p.v.transpose() * x.vp).cwiseAbs().maxCoeff());
}

Eigen::MatrixXd FixedRank::ambient(const Point& p) const {
  require_point_shape(p);
  return p.u * p.sigma.asDiagonal() * p.v.transpose();
}

Eigen::MatrixXd FixedRank::ambient(const Point& p, const Tangent& x) const {
  require_point_shape(p);
  require_tangent_shape(x);
  return p.u * x.m * p.v.transpose() + x.up * p.v.transpose() +
         p.u * x.vp.transpose();
}

}  // namespace ncrpg
