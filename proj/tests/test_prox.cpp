#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "ncrpg/errors.hpp"
#include "ncrpg/geometry/fixed_rank.hpp"
#include "ncrpg/geometry/oblique.hpp"
#include "ncrpg/geometry/sphere.hpp"
#include "ncrpg/prox.hpp"
#include "ncrpg/random.hpp"

using namespace ncrpg;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Objective the sphere l1 prox minimizes: xi*||y||_1 + dist(x,y)^2 / 2.
double sphere_l1_objective(const Sphere& s, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y, double xi) {
  double d = s.dist(x, y);
  return xi * y.lpNorm<1>() + 0.5 * d * d;
}

}  // namespace

TEST_CASE("scalar and vector soft threshold") {
  CHECK(soft_threshold(1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(soft_threshold(-1.0, 0.5) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(soft_threshold(0.3, 0.5) == 0.0);
  CHECK(soft_threshold(-0.5, 0.5) == 0.0);  // boundary collapses to zero
  Eigen::VectorXd y = soft_threshold(vec({2.0, -0.1, 0.4}), 0.4);
  CHECK(y(0) == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(y(1) == 0.0);
  CHECK(y(2) == 0.0);
}

TEST_CASE("sigma map frozen value and limits") {
  // Unit vectors at angle pi/3: c = 0.5, sigma = sqrt(0.75)/acos(0.5).
  Eigen::VectorXd x = vec({1.0, 0.0});
  Eigen::VectorXd y = vec({0.5, std::sqrt(3.0) / 2.0});
  CHECK(sigma_map(x, y, 1.0) ==
        doctest::Approx(0.826993343132688074).epsilon(1e-14));
  // Linear in xi.
  CHECK(sigma_map(x, y, 2.5) ==
        doctest::Approx(2.5 * 0.826993343132688074).epsilon(1e-14));
  // Aligned inputs hit the sinc limit: sigma -> xi.
  CHECK(sigma_map(x, x, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
  // Antipodal inputs are degenerate.
  Eigen::VectorXd mx = -x;
  CHECK_THROWS_AS(sigma_map(x, mx, 1.0), DegenerateProx);
  CHECK_THROWS_AS(sigma_map(x, vec({1.0, 0.0, 0.0}), 1.0), DimensionError);
}

TEST_CASE("normalized prox frozen value and degenerate threshold") {
  Eigen::VectorXd x = vec({0.8, 0.6});
  Eigen::VectorXd y = normalized_prox(x, 0.5);
  // soft((0.8,0.6),0.5) = (0.3,0.1), normalized = (3,1)/sqrt(10).
  CHECK(y(0) == doctest::Approx(0.948683298050513800).epsilon(1e-15));
  CHECK(y(1) == doctest::Approx(0.316227766016837933).epsilon(1e-15));
  CHECK(y.norm() == doctest::Approx(1.0).epsilon(1e-15));
  // t >= ||x||_inf wipes out every entry.
  CHECK_THROWS_AS(normalized_prox(x, 0.8), DegenerateProx);
  CHECK_THROWS_AS(normalized_prox(Eigen::VectorXd::Zero(3), 0.1),
                  DegenerateProx);
}

TEST_CASE("sphere l1 prox trivial and invalid inputs") {
  Eigen::VectorXd x = vec({0.6, 0.8, 0.0});

  SUBCASE("xi = 0 returns the input unchanged") {
    SphereL1ProxResult res = sphere_l1_prox(x, 0.0);
    CHECK(res.converged);
    CHECK(res.iterations == 0);
    CHECK(res.t_final == 0.0);
    CHECK((res.point - x).norm() == 0.0);
  }
  SUBCASE("negative xi rejected") {
    CHECK_THROWS_AS(sphere_l1_prox(x, -0.1), InvalidConfig);
  }
  SUBCASE("xi at or above ||x||_inf is degenerate") {
    CHECK_THROWS_AS(sphere_l1_prox(x, 0.8), DegenerateProx);
    CHECK_THROWS_AS(sphere_l1_prox(x, 1.5), DegenerateProx);
  }
}

TEST_CASE("sphere l1 prox fixes a coordinate axis immediately") {
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(5);
  e1(0) = 1.0;
  SphereL1ProxResult res = sphere_l1_prox(e1, 0.4);
  // normalized_prox(e1, t) = e1 for every t < 1, and sigma(e1, e1, xi) = xi,
  // so t0 = xi is already the fixed point.
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.t_final == doctest::Approx(0.4).epsilon(1e-15));
  CHECK((res.point - e1).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("sphere l1 prox fixed point, contraction, and support") {
  Eigen::VectorXd x = vec({0.9, 0.5, 0.4, 0.3, 0.2, 0.1});
  x /= x.norm();
  double bound = sphere_l1_xi_bound(x);
  REQUIRE(bound > 0.0);
  REQUIRE(bound < x.cwiseAbs().maxCoeff());
  double xi = 0.8 * bound;
  double q = sphere_l1_contraction_ratio(x, xi);
  REQUIRE(q < 1.0);

  SphereL1ProxResult res = sphere_l1_prox(x, xi);
  REQUIRE(res.converged);

  SUBCASE("t_final is self-consistent under the fixed-point map") {
    Eigen::VectorXd y = normalized_prox(x, res.t_final);
    double t_next = sigma_map(x, y, xi);
    CHECK(std::abs(t_next - res.t_final) < 2e-10);
  }

  SUBCASE("t_history gaps shrink by at least the certified ratio") {
    REQUIRE(res.t_history.size() >= 3);
    for (std::size_t k = 0; k + 2 < res.t_history.size(); ++k) {
      double g0 = std::abs(res.t_history[k + 1] - res.t_history[k]);
      double g1 = std::abs(res.t_history[k + 2] - res.t_history[k + 1]);
      CAPTURE(k);
      CHECK(g1 <= q * g0 + 1e-13);
    }
  }

  SUBCASE("output keeps signs and can only shrink the support") {
    Eigen::VectorXd thr = soft_threshold(x, res.t_final);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      CAPTURE(i);
      if (thr(i) == 0.0) {
        CHECK(res.point(i) == 0.0);
      } else {
        CHECK(res.point(i) * x(i) > 0.0);
      }
    }
  }

  SUBCASE("ratio at the bound itself evaluates to one") {
    CHECK(sphere_l1_contraction_ratio(x, bound) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(sphere_l1_contraction_ratio(x, 2.0), InvalidConfig);
  }
}

TEST_CASE("sphere l1 prox matches the dense grid oracle on S^2") {
  Eigen::Vector3d x(2.0, 1.0, 2.0);
  x.normalize();
  Eigen::VectorXd xv = x;
  double xi = 0.3 * sphere_l1_xi_bound(xv);
  SphereL1ProxResult res = sphere_l1_prox(xv, xi);
  REQUIRE(res.converged);

  auto h = [xi](const Eigen::Vector3d& y) { return xi * y.lpNorm<1>(); };
  Eigen::Vector3d star = sphere2_grid_prox_oracle(h, x, 1.0, 200000);

  Sphere s2(3);
  Eigen::Vector3d got = res.point;
  CHECK(s2.dist(got, star) < 1e-3);
  // And the fixed point is no worse than the best grid candidate.
  CHECK(sphere_l1_objective(s2, xv, res.point, xi) <=
        sphere_l1_objective(s2, xv, Eigen::VectorXd(star), xi) + 1e-8);
}

TEST_CASE("oblique l1 prox works columnwise and is near-optimal") {
  Oblique man(6, 3);
  Rng rng(11);
  Eigen::MatrixXd p = man.random_point(rng);
  double xi = 0.05;
  for (int j = 0; j < 3; ++j)
    REQUIRE(xi < p.col(j).cwiseAbs().maxCoeff());

  ObliqueL1ProxStats stats;
  Eigen::MatrixXd out =
      oblique_l1_prox(man, p, xi, SphereL1ProxConfig{}, ExecPolicy::Serial,
                      &stats);
  CHECK(stats.all_converged);
  CHECK(stats.max_iterations <= 10);
  man.check_point(out);

  SUBCASE("columns agree with the single-sphere prox") {
    for (int j = 0; j < 3; ++j) {
      SphereL1ProxResult ref = sphere_l1_prox(p.col(j), xi);
      CAPTURE(j);
      CHECK((out.col(j) - ref.point).norm() == 0.0);
    }
  }

  SUBCASE("no random candidate beats the fixed point") {
    auto objective = [&](const Eigen::MatrixXd& y) {
      double d = man.dist(p, y);
      return xi * y.lpNorm<1>() + 0.5 * d * d;
    };
    double fstar = objective(out);
    for (int trial = 0; trial < 1000; ++trial) {
      Eigen::MatrixXd cand;
      if (trial % 2 == 0) {
        cand = man.random_point(rng);
      } else {
        double scale = std::pow(10.0, rng.uniform(-4.0, -0.5));
        Eigen::MatrixXd t = man.random_tangent(out, scale, rng);
        cand = man.exp(out, t);
      }
      CAPTURE(trial);
      CHECK(objective(cand) >= fstar - 1e-10);
    }
  }

  SUBCASE("wrong shape is rejected") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(6, 2);
    CHECK_THROWS_AS(oblique_l1_prox(man, bad, xi), DimensionError);
  }
}

TEST_CASE("geodesic distance prox steps toward the anchor") {
  Sphere s(3);
  Eigen::VectorXd p = vec({1.0, 0.0, 0.0});
  Eigen::VectorXd q = vec({0.0, 1.0, 0.0});
  double d = s.dist(p, q);
  REQUIRE(d == doctest::Approx(M_PI / 2).epsilon(1e-15));

  SUBCASE("interior step moves exactly lambda*tau") {
    Eigen::VectorXd y = geodesic_distance_prox(s, p, q, 0.6, 0.5);
    CHECK(s.dist(p, y) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s.dist(y, q) == doctest::Approx(d - 0.3).epsilon(1e-12));
  }
  SUBCASE("step clamps at the anchor") {
    Eigen::VectorXd y = geodesic_distance_prox(s, p, q, 4.0, 0.5);
    CHECK(s.dist(y, q) < 1e-12);
  }
  SUBCASE("zero weight is the identity") {
    Eigen::VectorXd y = geodesic_distance_prox(s, p, q, 0.6, 0.0);
    CHECK((y - p).norm() == 0.0);
  }
  SUBCASE("prox of the anchor itself stays put") {
    Eigen::VectorXd y = geodesic_distance_prox(s, q, q, 0.6, 0.5);
    CHECK((y - q).norm() == 0.0);
  }
}

TEST_CASE("rowwise group soft threshold on fixed-rank points") {
  // Dense rank-2 target with well-separated row norms.
  Eigen::MatrixXd a(4, 2);
  a << 2.0, 0.0, 0.0, 1.5, 1.0, 1.0, 0.2, -0.1;
  Eigen::MatrixXd b(2, 3);
  b << 1.0, 0.5, -0.5, 0.0, 1.0, 1.0;
  Eigen::MatrixXd dense = a * b;

  FixedRank man(4, 3, 2);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  FixedRankPoint z;
  z.u = svd.matrixU().leftCols(2);
  z.sigma = svd.singularValues().head(2);
  z.v = svd.matrixV().leftCols(2);
  man.check_point(z);

  Eigen::VectorXd norms = fixed_rank_row_norms(z);
  SUBCASE("row norms match the ambient matrix") {
    CHECK((norms - dense.rowwise().norm()).norm() < 1e-12);
  }

  SUBCASE("matches the dense rowwise shrinkage when the rank survives") {
    double t = 0.3;
    Eigen::MatrixXd oracle = dense;
    for (Eigen::Index i = 0; i < oracle.rows(); ++i) {
      double n = oracle.row(i).norm();
      oracle.row(i) *= n > t ? (n - t) / n : 0.0;
    }
    FixedRankPoint y = rowwise_group_soft_threshold(man, z, t);
    man.check_point(y);
    CHECK((man.ambient(y) - oracle).norm() < 1e-12);
  }

  SUBCASE("a row exactly at the threshold is zeroed") {
    Eigen::Index imin;
    norms.minCoeff(&imin);
    FixedRankPoint y = rowwise_group_soft_threshold(man, z, norms(imin));
    CHECK(man.ambient(y).row(imin).norm() == 0.0);
  }

  SUBCASE("zero threshold is the identity") {
    FixedRankPoint y = rowwise_group_soft_threshold(man, z, 0.0);
    CHECK((man.ambient(y) - man.ambient(z)).norm() == 0.0);
  }

  SUBCASE("dropping to one surviving row breaks the rank") {
    std::vector<double> sorted(norms.data(), norms.data() + norms.size());
    std::sort(sorted.begin(), sorted.end());
    double t = sorted[sorted.size() - 2];  // zeroes all but the largest row
    CHECK_THROWS_AS(rowwise_group_soft_threshold(man, z, t), RankDropError);
  }

  SUBCASE("negative threshold rejected") {
    CHECK_THROWS_AS(rowwise_group_soft_threshold(man, z, -0.1), InvalidConfig);
  }
}
