#include "ncrpg/kernels.hpp"

#include "ncrpg/errors.hpp"

namespace ncrpg {
namespace kernels {

Eigen::VectorXd matvec_serial(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index j = 0; j < a.cols(); ++j) y += a.col(j) * x(j);
  return y;
}

Eigen::VectorXd matvec_adjoint_serial(const Eigen::MatrixXd& a,
                                      const Eigen::VectorXd& r) {
  if (a.rows() != r.size())
    throw DimensionError("matvec_adjoint: size mismatch");
  Eigen::VectorXd y(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) y(j) = a.col(j).dot(r);
  return y;
}

Eigen::VectorXd matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                       ExecPolicy policy) {
  if (a.cols() != x.size()) throw DimensionError("matvec: size mismatch");
  int m = static_cast<int>(a.rows());
  int k = static_cast<int>(a.cols());
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  return blocked_reduce<Eigen::VectorXd>(
      k, policy,
      [&](int lo, int hi, Eigen::VectorXd& acc) {
        acc.noalias() += a.middleCols(lo, hi - lo) * x.segment(lo, hi - lo);
      },
      [](Eigen::VectorXd& total, const Eigen::VectorXd& part) {
        total += part;
      },
      zero);
}

Eigen::VectorXd matvec_adjoint(const Eigen::MatrixXd& a,
                               const Eigen::VectorXd& r, ExecPolicy policy) {
  if (a.rows() != r.size())
    throw DimensionError("matvec_adjoint: size mismatch");
  int k = static_cast<int>(a.cols());
  Eigen::VectorXd y(k);
  parallel_for(k, policy, [&](int j) { y(j) = a.col(j).dot(r); });
  return y;
}

}  // namespace kernels
}  // namespace ncrpg
