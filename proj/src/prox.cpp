#include "ncrpg/prox.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ncrpg/errors.hpp"
#include "ncrpg/geometry/sphere.hpp"

namespace ncrpg {

double soft_threshold(double x, double t) {
  double m = std::abs(x) - t;
  if (m <= 0.0) return 0.0;
  return x > 0.0 ? m : -m;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double t) {
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = soft_threshold(x(i), t);
  return y;
}

double sigma_map(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 double xi) {
  if (x.size() != y.size())
    throw DimensionError("sigma_map: size mismatch");
  double c = x.dot(y);
  if (c > 1.0) c = 1.0;
  if (c <= -1.0 + 1e-12)
    throw DegenerateProx("sigma_map: antipodal input");
  if (c > 1.0 - 1e-12) return xi;  // limit of sqrt(1-c^2)/arccos(c)
  return xi * std::sqrt(1.0 - c * c) / std::acos(c);
}

Eigen::VectorXd normalized_prox(const Eigen::VectorXd& x, double t) {
  Eigen::VectorXd y = soft_threshold(x, t);
  double nrm = y.norm();
  if (nrm == 0.0)
    throw DegenerateProx(
        "normalized_prox: threshold wiped out every entry (t >= ||x||_inf)");
  return y / nrm;
}

SphereL1ProxResult sphere_l1_prox(const Eigen::VectorXd& x, double xi,
                                  const SphereL1ProxConfig& cfg) {
  if (xi < 0.0) throw InvalidConfig("sphere_l1_prox: xi must be nonnegative");
  SphereL1ProxResult res;
  if (xi == 0.0) {
    res.point = x;
    res.t_final = 0.0;
    res.converged = true;
    res.t_history = {0.0};
    return res;
  }
  if (xi >= x.cwiseAbs().maxCoeff())
    throw DegenerateProx("sphere_l1_prox: xi >= ||x||_inf");
  double t = xi;
  res.t_history.push_back(t);
  for (int k = 0; k < cfg.max_iterations; ++k) {
    Eigen::VectorXd y = normalized_prox(x, t);
    double t_next = sigma_map(x, y, xi);
    ++res.iterations;
    res.t_history.push_back(t_next);
    double gap = std::abs(t_next - t);
    t = t_next;
    if (gap < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.t_final = t;
  res.point = normalized_prox(x, t);
  return res;
}

double sphere_l1_xi_bound(const Eigen::VectorXd& x) {
  double xinf = x.cwiseAbs().maxCoeff();
  double nnz = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != 0.0) nnz += 1.0;
  if (nnz == 0.0) return 0.0;
  double rt = std::sqrt(nnz);
  double bound =
      M_PI / (8.0 * rt) * (std::sqrt(16.0 * rt * xinf + M_PI * M_PI) - M_PI);
  return std::min(bound, xinf);
}

double sphere_l1_contraction_ratio(const Eigen::VectorXd& x, double xi) {
  double xinf = x.cwiseAbs().maxCoeff();
  if (xi >= xinf)
    throw InvalidConfig("sphere_l1_contraction_ratio: xi >= ||x||_inf");
  double nnz = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != 0.0) nnz += 1.0;
  return 4.0 * xi * xi * std::sqrt(nnz) / ((xinf - xi) * M_PI * M_PI);
}

Eigen::MatrixXd oblique_l1_prox(const Oblique& manifold,
                                const Eigen::MatrixXd& p, double xi,
                                const SphereL1ProxConfig& cfg,
                                ExecPolicy policy,
                                ObliqueL1ProxStats* stats_out) {
  if (p.rows() != manifold.rows() || p.cols() != manifold.cols())
    throw DimensionError("oblique_l1_prox: point has wrong shape");
  int r = static_cast<int>(p.cols());
  Eigen::MatrixXd out(p.rows(), r);
  std::vector<int> iters(r, 0);
  std::vector<char> conv(r, 1);
  // Columns are independent; exceptions must not escape the worker threads.
  std::vector<std::exception_ptr> errs(r);
  parallel_for(r, policy, [&](int j) {
    try {
      SphereL1ProxResult res = sphere_l1_prox(p.col(j), xi, cfg);
      out.col(j) = res.point;
      iters[j] = res.iterations;
      conv[j] = res.converged ? 1 : 0;
    } catch (...) {
      errs[j] = std::current_exception();
    }
  });
  for (int j = 0; j < r; ++j)
    if (errs[j]) std::rethrow_exception(errs[j]);
  if (stats_out != nullptr) {
    stats_out->max_iterations = *std::max_element(iters.begin(), iters.end());
    stats_out->all_converged = true;
    for (int j = 0; j < r; ++j)
      if (!conv[j]) stats_out->all_converged = false;
  }
  return out;
}

Eigen::VectorXd fixed_rank_row_norms(const FixedRankPoint& z) {
  Eigen::MatrixXd w = z.u * z.sigma.asDiagonal();
  return w.rowwise().norm();
}

FixedRankPoint rowwise_group_soft_threshold(const FixedRank& manifold,
                                            const FixedRankPoint& z,
                                            double t) {
  if (t < 0.0)
    throw InvalidConfig("rowwise_group_soft_threshold: negative threshold");
  if (t == 0.0) return z;
  int r = manifold.rank();
  Eigen::MatrixXd w = z.u * z.sigma.asDiagonal();  // rows carry the row norms
  Eigen::VectorXd norms = w.rowwise().norm();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    // Strict inequality: rows at exactly the threshold are zeroed.
    double d = norms(i) > t ? (norms(i) - t) / norms(i) : 0.0;
    w.row(i) *= d;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
  Eigen::MatrixXd qa =
      qr.householderQ() * Eigen::MatrixXd::Identity(w.rows(), r);
  Eigen::MatrixXd ra = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(
      ra, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (csvd.singularValues()(r - 1) < 1e-14)
    throw RankDropError(
        "rowwise_group_soft_threshold: thresholding dropped the rank below r");
  FixedRankPoint out;
  out.u = qa * csvd.matrixU();
  out.sigma = csvd.singularValues();
  out.v = z.v * csvd.matrixV();
  return out;
}

Eigen::Vector3d sphere2_grid_prox_oracle(
    const std::function<double(const Eigen::Vector3d&)>& h,
    const Eigen::Vector3d& p, double lambda, int grid_points) {
  Sphere s2(3);
  auto phi = [&](const Eigen::Vector3d& y) {
    double d = s2.dist(p, y);
    return h(y) + d * d / (2.0 * lambda);
  };
  // Coarse pass: Fibonacci spiral covering S^2.
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  Eigen::Vector3d best = p;
  double best_val = phi(p);
  for (int i = 0; i < grid_points; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / grid_points;
    double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    double ang = 2.0 * M_PI * i / golden;
    Eigen::Vector3d y(rad * std::cos(ang), rad * std::sin(ang), z);
    double val = phi(y);
    if (val < best_val) {
      best_val = val;
      best = y;
    }
  }
  // Two refinement passes on a tangent-plane grid around the incumbent.
  double half_width = 2.0 * std::sqrt(4.0 * M_PI / grid_points);
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::Vector3d axis =
        std::abs(best(0)) < 0.9 ? Eigen::Vector3d::UnitX()
                                : Eigen::Vector3d::UnitY();
    Eigen::Vector3d e1 = (axis - axis.dot(best) * best).normalized();
    Eigen::Vector3d e2 = best.cross(e1);
    Eigen::Vector3d center = best;
    const int steps = 40;
    for (int a = -steps; a <= steps; ++a) {
      for (int b = -steps; b <= steps; ++b) {
        Eigen::Vector3d y = center + (half_width * a / steps) * e1 +
                            (half_width * b / steps) * e2;
        y.normalize();
        double val = phi(y);
        if (val < best_val) {
          best_val = val;
          best = y;
        }
      }
    }
    half_width = 2.0 * half_width / steps;
  }
  return best;
}

}  // namespace ncrpg
