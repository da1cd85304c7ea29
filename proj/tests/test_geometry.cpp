#include <cmath>

#include <Eigen/Core>

#include "doctest.h"
#include "ncrpg/errors.hpp"
#include "ncrpg/geometry/euclidean.hpp"
#include "ncrpg/geometry/fixed_rank.hpp"
#include "ncrpg/geometry/grassmann.hpp"
#include "ncrpg/geometry/oblique.hpp"
#include "ncrpg/geometry/sphere.hpp"
#include "ncrpg/validation.hpp"

using namespace ncrpg;

TEST_CASE("euclidean ops are vector arithmetic") {
  Euclidean man(3);
  Eigen::Vector3d p(1.0, 2.0, 3.0), q(0.0, -1.0, 5.0);
  CHECK((man.exp(p, q - p) - q).norm() == 0.0);
  CHECK((man.log(p, q) - (q - p)).norm() == 0.0);
  CHECK(man.dist(p, q) == doctest::Approx((q - p).norm()).epsilon(1e-15));
  CHECK((man.transport(p, q, p) - p).norm() == 0.0);
  Eigen::VectorXd mid = man.geodesic_point(p, q, 0.5 * man.dist(p, q));
  CHECK((mid - 0.5 * (p + q)).norm() < 1e-14);
  CHECK_THROWS_AS(man.exp(Eigen::Vector2d(1, 2), Eigen::Vector2d(0, 0)),
                  DimensionError);
}

TEST_CASE("sphere quarter-circle geodesics") {
  SUBCASE("S^1") {
    Sphere man(2);
    Eigen::Vector2d p(1.0, 0.0);
    Eigen::Vector2d x(0.0, M_PI / 2.0);
    Eigen::Vector2d q = man.exp(p, x);
    CHECK(q(0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(man.dist(p, q) == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
    CHECK((man.log(p, q) - x).norm() < 1e-14);
  }
  SUBCASE("S^2") {
    Sphere man(3);
    Eigen::Vector3d p(1.0, 0.0, 0.0);
    Eigen::Vector3d x(0.0, M_PI / 2.0, 0.0);
    Eigen::Vector3d q = man.exp(p, x);
    CHECK((q - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);
    CHECK(man.dist(p, q) == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
  }
}

TEST_CASE("sphere log domain") {
  Sphere man(2);
  Eigen::Vector2d p(1.0, 0.0);
  // Near-antipodal pairs have no unique logarithm.
  Eigen::Vector2d bad(-1.0, 1e-5);
  bad.normalize();
  CHECK_THROWS_AS(man.log(p, bad), IllPosedLog);
  // Beyond the guard the logarithm exists, even for obtuse angles.
  Eigen::Vector2d far(-1.0, 0.5);
  far.normalize();
  Eigen::Vector2d l = man.log(p, far);
  CHECK(man.norm(p, l) == doctest::Approx(man.dist(p, far)).epsilon(1e-14));
}

TEST_CASE("sphere geodesic_point walks by arclength") {
  Sphere man(4);
  Rng rng(7);
  Eigen::VectorXd p = man.random_point(rng);
  Eigen::VectorXd q = man.random_point(rng);
  double d = man.dist(p, q);
  for (double t : {0.0, 0.3 * d, d}) {
    Eigen::VectorXd y = man.geodesic_point(p, q, t);
    CHECK(man.dist(p, y) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("oblique acts columnwise") {
  Oblique man(3, 2);
  Sphere col(3);
  Rng rng(11);
  Eigen::MatrixXd p = man.random_point(rng);
  Eigen::MatrixXd x = man.random_tangent(p, 0.4, rng);
  Eigen::MatrixXd q = man.exp(p, x);
  double d2 = 0.0;
  for (int j = 0; j < 2; ++j) {
    CHECK((q.col(j) - col.exp(p.col(j), x.col(j))).norm() < 1e-14);
    double dj = col.dist(p.col(j), q.col(j));
    d2 += dj * dj;
  }
  CHECK(man.dist(p, q) == doctest::Approx(std::sqrt(d2)).epsilon(1e-13));
}

TEST_CASE("grassmann coordinate planes in R^2") {
  Grassmann man(2, 1);
  Eigen::MatrixXd e1(2, 1), e2(2, 1);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  // Orthogonal lines sit at the maximal principal angle pi/2; the logarithm
  // is ill posed there, the distance is still defined.
  CHECK(man.dist(e1, e2) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(man.log(e1, e2), IllPosedLog);

  // Rotating the line by angle t moves it by geodesic distance t.
  for (double t : {0.2, 0.7, 1.4}) {
    Eigen::MatrixXd x(2, 1);
    x << 0.0, t;
    Eigen::MatrixXd q = man.exp(e1, x);
    CHECK(man.dist(e1, q) == doctest::Approx(t).epsilon(1e-12));
    CHECK(std::abs(q(0, 0)) == doctest::Approx(std::cos(t)).epsilon(1e-12));
    CHECK(std::abs(q(1, 0)) == doctest::Approx(std::sin(t)).epsilon(1e-12));
  }
}

TEST_CASE("grassmann distance is representative independent") {
  Grassmann man(5, 2);
  Rng rng(3);
  Eigen::MatrixXd p = man.random_point(rng);
  Eigen::MatrixXd q = man.random_point(rng);
  // Flip a basis vector and swap columns: same subspace.
  Eigen::MatrixXd p2 = p;
  p2.col(0) = -p.col(0);
  p2.col(0).swap(p2.col(1));
  CHECK(man.dist(p2, q) == doctest::Approx(man.dist(p, q)).epsilon(1e-12));
  CHECK(man.dist(p, p2) < 1e-8);
}

TEST_CASE("fixed-rank projector matches the dense oracle") {
  FixedRank man(6, 5, 2);
  Rng rng(19);
  FixedRankPoint p = man.random_point(rng);
  Eigen::MatrixXd z = rng.normal_matrix(6, 5);
  FixedRankTangent x = man.project(p, z);

  Eigen::MatrixXd iu =
      Eigen::MatrixXd::Identity(6, 6) - p.u * p.u.transpose();
  Eigen::MatrixXd iv =
      Eigen::MatrixXd::Identity(5, 5) - p.v * p.v.transpose();
  Eigen::MatrixXd oracle = z - iu * z * iv;
  CHECK((man.ambient(p, x) - oracle).norm() < 1e-12);

  // Projection leaves tangents fixed.
  FixedRankTangent x2 = man.project(p, man.ambient(p, x));
  CHECK((man.ambient(p, x2) - man.ambient(p, x)).norm() < 1e-12);
}

TEST_CASE("fixed-rank inner product matches ambient assembly") {
  FixedRank man(7, 4, 3);
  Rng rng(23);
  FixedRankPoint p = man.random_point(rng);
  FixedRankTangent x = man.random_tangent(p, 1.0, rng);
  FixedRankTangent y = man.random_tangent(p, 1.0, rng);
  double dense = (man.ambient(p, x).array() * man.ambient(p, y).array()).sum();
  CHECK(man.inner(p, x, y) == doctest::Approx(dense).epsilon(1e-12));
  CHECK(man.norm(p, x) ==
        doctest::Approx(man.ambient(p, x).norm()).epsilon(1e-12));
}

TEST_CASE("orthographic retraction pairs exactly with its inverse") {
  FixedRank man(8, 6, 2);
  Rng rng(29);
  FixedRankPoint p = man.random_point(rng);
  FixedRankTangent x = man.random_tangent(p, 0.1, rng);
  FixedRankPoint q = man.retract(p, x);
  CHECK(man.check_point(q) < 1e-12);
  FixedRankTangent y = man.inverse_retract(p, q);
  CHECK((man.ambient(p, y) - man.ambient(p, x)).norm() < 1e-11);
  CHECK(man.dist_retraction(p, q) ==
        doctest::Approx(man.norm(p, x)).epsilon(1e-11));
}

TEST_CASE("orthographic retraction is first order") {
  FixedRank man(8, 6, 2);
  Rng rng(31);
  FixedRankPoint p = man.random_point(rng);
  FixedRankTangent x = man.random_tangent(p, 1.0, rng);
  auto err = [&](double t) {
    FixedRankPoint q = man.retract(p, man.scale(x, t));
    return (man.ambient(q) - (man.ambient(p) + t * man.ambient(p, x))).norm();
  };
  double e1 = err(1e-2), e2 = err(1e-3);
  CHECK(e1 < 1.0);
  // Quadratic remainder: shrinking t by 10 shrinks the error by ~100.
  CHECK(e1 / e2 > 80.0);
  CHECK(e1 / e2 < 125.0);
}

TEST_CASE("retraction singularity is reported") {
  FixedRank man(5, 5, 2);
  Rng rng(37);
  FixedRankPoint p = man.random_point(rng);
  // A tangent whose m-block cancels the singular values makes S + m singular.
  FixedRankTangent x = man.zero_tangent(p);
  x.m = Eigen::MatrixXd((-p.sigma).asDiagonal());
  CHECK_THROWS_AS(man.retract(p, x), RetractionSingularity);
}

TEST_CASE("manifold axiom suites") {
  Rng rng(1234);
  SUBCASE("euclidean") {
    Euclidean man(6);
    auto reports = manifold_axiom_suite(man, rng, 100);
    for (const auto& r : reports) {
      CAPTURE(r.name);
      CHECK(r.passed);
    }
  }
  SUBCASE("sphere") {
    Sphere man(8);
    auto reports = manifold_axiom_suite(man, rng, 100);
    for (const auto& r : reports) {
      CAPTURE(r.name);
      CHECK(r.passed);
    }
  }
  SUBCASE("oblique") {
    Oblique man(6, 3);
    auto reports = manifold_axiom_suite(man, rng, 100);
    for (const auto& r : reports) {
      CAPTURE(r.name);
      CHECK(r.passed);
    }
  }
  SUBCASE("grassmann") {
    Grassmann man(7, 3);
    auto reports = manifold_axiom_suite(man, rng, 100);
    for (const auto& r : reports) {
      CAPTURE(r.name);
      CAPTURE(r.max_violation);
      CHECK(r.passed);
    }
  }
  SUBCASE("fixed-rank") {
    FixedRank man(8, 6, 2);
    auto reports = manifold_axiom_suite(man, rng, 100);
    for (const auto& r : reports) {
      CAPTURE(r.name);
      CAPTURE(r.max_violation);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("grassmann transport lands tangent at the target representative") {
  Grassmann man(6, 2);
  Rng rng(41);
  Eigen::MatrixXd p = man.random_point(rng);
  Eigen::MatrixXd q = man.random_point(rng);
  Eigen::MatrixXd x = man.random_tangent(p, 1.0, rng);
  Eigen::MatrixXd y = man.transport(p, q, x);
  // Tangency at q (not at exp's internal representative of q).
  CHECK((q.transpose() * y).norm() < 1e-10);
  CHECK(man.norm(q, y) == doctest::Approx(man.norm(p, x)).epsilon(1e-10));
}
