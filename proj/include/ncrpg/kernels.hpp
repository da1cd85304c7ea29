#pragma once

#include <vector>

#include <Eigen/Core>

#include "ncrpg/parallel.hpp"

namespace ncrpg {
namespace kernels {

// --- Mean of squared geodesic distances over a data set -------------------
//
// cost(p) = (1/2N) * sum_j dist(p, q_j)^2
// grad(p) = -(1/N) * sum_j log_p(q_j)
//
// The *_serial variants are the plain reference loops; the policy-taking
// variants run fixed-block reductions combined in index order, so parallel
// results are bitwise identical for any thread count (and agree with the
// serial reference to rounding).

template <class M>
double mean_cost_serial(const M& man,
                        const std::vector<typename M::Point>& data,
                        const typename M::Point& p) {
  double acc = 0.0;
  for (const auto& q : data) {
    double d = man.dist(p, q);
    acc += d * d;
  }
  return acc / (2.0 * static_cast<double>(data.size()));
}

template <class M>
typename M::Tangent mean_grad_serial(const M& man,
                                     const std::vector<typename M::Point>& data,
                                     const typename M::Point& p) {
  typename M::Tangent acc = man.zero_tangent(p);
  for (const auto& q : data) acc += man.log(p, q);
  return man.scale(acc, -1.0 / static_cast<double>(data.size()));
}

template <class M>
double mean_cost(const M& man, const std::vector<typename M::Point>& data,
                 const typename M::Point& p,
                 ExecPolicy policy = default_exec_policy()) {
  int n = static_cast<int>(data.size());
  double total = blocked_reduce<double>(
      n, policy,
      [&](int lo, int hi, double& acc) {
        for (int j = lo; j < hi; ++j) {
          double d = man.dist(p, data[j]);
          acc += d * d;
        }
      },
      [](double& total, const double& part) { total += part; }, 0.0);
  return total / (2.0 * static_cast<double>(n));
}

template <class M>
typename M::Tangent mean_grad(const M& man,
                              const std::vector<typename M::Point>& data,
                              const typename M::Point& p,
                              ExecPolicy policy = default_exec_policy()) {
  int n = static_cast<int>(data.size());
  typename M::Tangent zero = man.zero_tangent(p);
  typename M::Tangent total = blocked_reduce<typename M::Tangent>(
      n, policy,
      [&](int lo, int hi, typename M::Tangent& acc) {
        for (int j = lo; j < hi; ++j) acc += man.log(p, data[j]);
      },
      [](typename M::Tangent& total, const typename M::Tangent& part) {
        total += part;
      },
      zero);
  return man.scale(total, -1.0 / static_cast<double>(n));
}

// --- Dense measurement operator --------------------------------------------
//
// A is column-major m x K. Forward: column-block partials combined in index
// order. Adjoint: one dot product per column (disjoint writes).

Eigen::VectorXd matvec_serial(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& x);
Eigen::VectorXd matvec_adjoint_serial(const Eigen::MatrixXd& a,
                                      const Eigen::VectorXd& r);
Eigen::VectorXd matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                       ExecPolicy policy = default_exec_policy());
Eigen::VectorXd matvec_adjoint(const Eigen::MatrixXd& a,
                               const Eigen::VectorXd& r,
                               ExecPolicy policy = default_exec_policy());

}  // namespace kernels
}  // namespace ncrpg
