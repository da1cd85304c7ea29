#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "ncrpg/curvature.hpp"
#include "ncrpg/errors.hpp"
#include "ncrpg/geometry/grassmann.hpp"
#include "ncrpg/random.hpp"
#include "ncrpg/solver.hpp"

namespace ncrpg {

// One named validation check: max_violation is the worst normalized residual
// over all trials, passed compares it against the check's tolerance.
struct CheckReport {
  std::string name;
  bool passed = false;
  double max_violation = 0.0;
  std::string detail;
};

bool all_passed(const std::vector<CheckReport>& reports);

// Subspace-representative invariance on the Grassmann manifold: distances,
// logarithms and exponentials must not depend on the orthonormal basis
// chosen for a point.
std::vector<CheckReport> grassmann_invariance_suite(const Grassmann& manifold,
                                                    Rng& rng,
                                                    int trials = 100);

// Hand-coded proximal gradient descent for the Euclidean lasso
//   min_x 0.5*||a x - b||^2 + mu*||x||_1
// against the manifold solver on the same data: iterates must agree to tol
// over the given iteration count.
CheckReport ista_equivalence_check(int n, int m, double mu, double lambda,
                                   int iterations, Rng& rng,
                                   double tol = 1e-12);

namespace detail {

// Dense form of a tangent vector, for uniform comparisons across manifolds
// with structured tangents.
template <class M>
auto tangent_dense(const M& man, const typename M::Point& p,
                   const typename M::Tangent& x) {
  if constexpr (requires { man.ambient(p, x); }) {
    return man.ambient(p, x);
  } else {
    (void)man;
    (void)p;
    return x;
  }
}

template <class M>
double point_gap(const M& man, const typename M::Point& p,
                 const typename M::Point& q) {
  if constexpr (requires { man.ambient(p); }) {
    return (man.ambient(p) - man.ambient(q)).norm();
  } else {
    (void)man;
    return (p - q).norm();
  }
}

struct ViolationAcc {
  const char* name;
  double tol;
  double worst = 0.0;
  void feed(double v) { worst = std::max(worst, v); }
  CheckReport report() const { return {name, worst <= tol, worst, ""}; }
};

}  // namespace detail

// Randomized consistency suite for a manifold implementation. Exact-geodesic
// manifolds get the full set (exp/log roundtrip, dist = ||log||, transport
// isometry, distance axioms); retraction-only manifolds get the retraction
// pair roundtrip at a tighter tolerance (the orthographic inverse is exact)
// plus the projection and identity checks.
template <class M>
std::vector<CheckReport> manifold_axiom_suite(const M& man, Rng& rng,
                                              int trials = 100) {
  using detail::point_gap;
  using detail::tangent_dense;
  const bool exact = man.has_exact_exp_log();

  detail::ViolationAcc roundtrip{
      exact ? "exp_log_roundtrip" : "retract_inverse_roundtrip",
      exact ? 1e-8 : 1e-10};
  detail::ViolationAcc dist_norm{"dist_matches_log_norm", 1e-8};
  detail::ViolationAcc zero_step{"zero_step_identity", 1e-12};
  detail::ViolationAcc transport_iso{"transport_isometry", 1e-8};
  detail::ViolationAcc proj_idem{"projection_restores_tangents", 1e-8};
  detail::ViolationAcc dist_sym{"distance_symmetry", 1e-8};
  detail::ViolationAcc triangle{"triangle_inequality", 1e-8};

  // Keep random steps inside the region where log(exp(x)) = x is guaranteed.
  double cap = 2.0;
  const CurvatureBounds cb = man.curvature_bounds();
  if (cb.kappa_max > 0.0 && std::isfinite(cb.kappa_max))
    cap = 0.45 * pi_kappa(cb.kappa_max);

  for (int t = 0; t < trials; ++t) {
    const auto p = man.random_point(rng);
    if (exact) {
      auto x = man.random_tangent(p, 0.5, rng);
      double nx = man.norm(p, x);
      if (nx > cap) {
        x = man.scale(x, cap / nx);
        nx = cap;
      }
      const auto q = man.exp(p, x);
      const auto y = man.log(p, q);
      roundtrip.feed((tangent_dense(man, p, y) - tangent_dense(man, p, x))
                         .norm() /
                     (1.0 + nx));
      dist_norm.feed(std::abs(man.dist(p, q) - nx) / (1.0 + nx));
      zero_step.feed(man.dist(man.exp(p, man.zero_tangent(p)), p));

      const auto x2 = man.random_tangent(p, 1.0, rng);
      const double nx2 = man.norm(p, x2);
      const auto moved = man.transport(p, q, x2);
      transport_iso.feed(std::abs(man.norm(q, moved) - nx2) / (1.0 + nx2));
      proj_idem.feed((tangent_dense(man, p, man.project(
                                                p, tangent_dense(man, p, x2))) -
                      tangent_dense(man, p, x2))
                         .norm() /
                     (1.0 + nx2));

      const auto w = man.random_point(rng);
      const double dpq = man.dist(p, q);
      const double dqw = man.dist(q, w);
      const double dpw = man.dist(p, w);
      dist_sym.feed(std::abs(man.dist(q, p) - dpq) / (1.0 + dpq));
      triangle.feed(std::max(0.0, dpw - dpq - dqw) / (1.0 + dpw));
    } else {
      const auto x = man.random_tangent(p, 0.05, rng);
      const double nx = man.norm(p, x);
      const auto q = man.retract(p, x);
      const auto y = man.inverse_retract(p, q);
      roundtrip.feed((tangent_dense(man, p, y) - tangent_dense(man, p, x))
                         .norm() /
                     (1.0 + nx));
      zero_step.feed(point_gap(man, man.retract(p, man.zero_tangent(p)), p));

      const auto x2 = man.random_tangent(p, 1.0, rng);
      const double nx2 = man.norm(p, x2);
      proj_idem.feed((tangent_dense(man, p, man.project(
                                                p, tangent_dense(man, p, x2))) -
                      tangent_dense(man, p, x2))
                         .norm() /
                     (1.0 + nx2));
    }
  }

  std::vector<CheckReport> out;
  out.push_back(roundtrip.report());
  out.push_back(zero_step.report());
  out.push_back(proj_idem.report());
  if (exact) {
    out.push_back(dist_norm.report());
    out.push_back(transport_iso.report());
    out.push_back(dist_sym.report());
    out.push_back(triangle.report());
  }
  if constexpr (std::is_same_v<M, Grassmann>) {
    auto inv = grassmann_invariance_suite(man, rng, trials);
    out.insert(out.end(), inv.begin(), inv.end());
  }
  return out;
}

// Central finite differences of g along random unit directions, compared to
// <grad g(p), x>. Curves run through the exponential or the retraction.
template <class M>
CheckReport finite_difference_gradient_check(
    const M& man, const std::function<double(const typename M::Point&)>& g,
    const std::function<typename M::Tangent(const typename M::Point&)>& grad_g,
    const typename M::Point& p, Rng& rng, int directions = 20,
    GeodesicMode mode = GeodesicMode::Exact, double step = 1e-6,
    double tol = 1e-5) {
  const typename M::Tangent grad = grad_g(p);
  double worst = 0.0;
  for (int t = 0; t < directions; ++t) {
    auto x = man.random_tangent(p, 1.0, rng);
    const double nx = man.norm(p, x);
    if (nx == 0.0) continue;
    x = man.scale(x, 1.0 / nx);
    const double fp = g(detail::mode_step(man, p, man.scale(x, step), mode));
    const double fm = g(detail::mode_step(man, p, man.scale(x, -step), mode));
    const double fd = (fp - fm) / (2.0 * step);
    const double an = man.inner(p, grad, x);
    worst = std::max(worst, std::abs(fd - an) / (1.0 + std::abs(an)));
  }
  CheckReport rep;
  rep.name = "finite_difference_gradient";
  rep.max_violation = worst;
  rep.passed = worst <= tol;
  return rep;
}

// Certifies q = prox_h(z, lambda) as a local minimizer of
//   F(y) = h(y) + dist(z, y)^2 / (2*lambda):
// no probe around q (deterministic probes along the geodesic through z plus
// random tangent perturbations at log-spaced scales) may beat F(q) by more
// than the slack. Probes that leave the domain of the geodesic machinery are
// skipped.
template <class M>
CheckReport prox_optimality_certificate(
    const M& man, const std::function<double(const typename M::Point&)>& h,
    const std::function<typename M::Point(const typename M::Point&, double)>&
        prox_h,
    const typename M::Point& z, double lambda, Rng& rng,
    int perturbations = 200, GeodesicMode mode = GeodesicMode::Exact,
    double slack = 1e-8) {
  auto objective = [&](const typename M::Point& y) {
    const double d = detail::mode_dist(man, z, y, mode);
    return h(y) + d * d / (2.0 * lambda);
  };
  const typename M::Point q = prox_h(z, lambda);
  const double fq = objective(q);
  double worst = 0.0;
  int evaluated = 0;

  auto probe = [&](const typename M::Tangent& x) {
    try {
      const auto y = detail::mode_step(man, q, x, mode);
      worst = std::max(worst, (fq - objective(y)) / (1.0 + std::abs(fq)));
      ++evaluated;
    } catch (const Error&) {
    }
  };

  try {
    const auto toward_z = detail::mode_inverse(man, q, z, mode);
    const double n = man.norm(q, toward_z);
    if (n > 0.0) {
      for (double scale : {1e-4, 1e-3, 1e-2, 1e-1, 0.3}) {
        probe(man.scale(toward_z, scale / n));
        probe(man.scale(toward_z, -scale / n));
      }
    }
  } catch (const Error&) {
  }

  for (int t = 0; t < perturbations; ++t) {
    const double scale = std::pow(10.0, rng.uniform(-4.0, -0.5));
    const auto x = man.random_tangent(q, 1.0, rng);
    const double nx = man.norm(q, x);
    if (nx == 0.0) continue;
    probe(man.scale(x, scale / nx));
  }

  CheckReport rep;
  rep.name = "prox_optimality_certificate";
  rep.max_violation = worst;
  rep.passed = worst <= slack && evaluated > 0;
  return rep;
}

}  // namespace ncrpg
