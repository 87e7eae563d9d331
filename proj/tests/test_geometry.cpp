#include "dirprec/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

using namespace dirprec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("curve lengths") {
  SUBCASE("circle") {
    ShapeParams p;
    p.radius = 1.0;
    CHECK(build_curve(ShapeId::circle, p).length() == doctest::Approx(2 * kPi).epsilon(1e-13));
  }
  SUBCASE("ellipse against the complete elliptic integral") {
    const BoundaryCurve c = build_curve(ShapeId::ellipse);
    const double k = std::sqrt(1.0 - 0.25);
    const double oracle = 4.0 * std::comp_ellint_2(k);
    CHECK(std::abs(c.length() - oracle) <= 1e-12 * oracle);
    CHECK(c.length() == doctest::Approx(4.844224110).epsilon(1e-9));
  }
  SUBCASE("kite round trip of the arclength map") {
    const BoundaryCurve c = build_curve(ShapeId::kite);
    CHECK(c.length() > 0);
    for (int k = 0; k < 200; ++k) {
      const double t = 2 * kPi * (k + 0.123) / 200;
      const double s = c.arclength_of(t);
      CHECK(std::abs(c.parameter_of(s) - t) <= 1e-12 * 2 * kPi);
    }
  }
}

TEST_CASE("arclength map is strictly increasing and matches direct quadrature") {
  const BoundaryCurve c = build_curve(ShapeId::kite);
  double prev = -1;
  for (int k = 0; k <= 1000; ++k) {
    const double s = c.arclength_of(2 * kPi * k / 1000);
    CHECK(s > prev);
    prev = s;
  }
  CHECK(prev == doctest::Approx(c.length()).epsilon(1e-14));
  // Composite Simpson on a fine grid as an independent check of one value.
  const double t1 = 1.7;
  const int m = 20000;
  double acc = 0;
  for (int i = 0; i <= m; ++i) {
    const double t = t1 * i / m;
    const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
    acc += w * c.velocity_t(t).norm();
  }
  acc *= t1 / (3.0 * m);
  CHECK(std::abs(acc - c.arclength_of(t1)) <= 1e-11);
}

TEST_CASE("degenerate shapes are rejected") {
  ShapeParams p;
  p.semi_y = 0.0;
  CHECK_THROWS_AS(build_curve(ShapeId::ellipse, p), std::invalid_argument);
  p = {};
  p.radius = -1;
  CHECK_THROWS_AS(build_curve(ShapeId::circle, p), std::invalid_argument);
  p = {};
  p.kite_scale = 0;
  CHECK_THROWS_AS(build_curve(ShapeId::kite, p), std::invalid_argument);
  CHECK_THROWS(parse_shape("square"));
  CHECK(parse_shape("bean") == ShapeId::kite);
}

TEST_CASE("discretize bookkeeping") {
  SUBCASE("circle of unit length") {
    ShapeParams p;
    p.radius = 1.0 / (2 * kPi);
    const BoundaryCurve c = build_curve(ShapeId::circle, p);
    const Discretization d = discretize(c, 4, 8);
    CHECK(d.n == 2048);
    CHECK(d.wavelength == doctest::Approx(1.0 / 256).epsilon(1e-13));
    CHECK(d.omega == doctest::Approx(512 * kPi).epsilon(1e-13));
  }
  SUBCASE("ellipse q = 6") {
    const BoundaryCurve c = build_curve(ShapeId::ellipse);
    const Discretization d = discretize(c, 6, 8);
    const double length = 4.0 * std::comp_ellint_2(std::sqrt(0.75));
    CHECK(d.n == 32768);
    CHECK(std::abs(d.omega - 2 * kPi * 4096 / length) <= 1e-10 * d.omega);
    CHECK(d.length == doctest::Approx(4096 * d.wavelength).epsilon(1e-14));
  }
  SUBCASE("preconditions") {
    const BoundaryCurve c = build_curve(ShapeId::circle);
    CHECK_THROWS_AS(discretize(c, 1, 8), std::invalid_argument);
    CHECK_THROWS_AS(discretize(c, 3, 2), std::invalid_argument);
  }
}

TEST_CASE("equispacing in arclength") {
  for (ShapeId shape : {ShapeId::ellipse, ShapeId::kite}) {
    const BoundaryCurve c = build_curve(shape);
    const Discretization d = discretize(c, 3, 8);
    double worst_s = 0, worst_chord = 0;
    for (int a = 0; a < d.n; ++a) {
      CHECK(d.arclength[a] == a * d.h);
      if (a + 1 < d.n) worst_s = std::max(worst_s, std::abs(d.arclength[a + 1] - d.arclength[a] - d.h));
      // arclength of the parameter interval between consecutive points
      const double t0 = c.parameter_of(d.arclength[a]);
      CHECK((c.position_t(t0) - d.points[a]).norm() <= 1e-13);
      const double chord = (d.points[(a + 1) % d.n] - d.points[a]).norm();
      // chord = h - kappa^2 h^3 / 24 + ...
      const double kappa = d.curvature[a];
      worst_chord = std::max(worst_chord, std::abs(chord - d.h) / (1 + kappa * kappa) / std::pow(d.h, 3));
    }
    CHECK(worst_s <= 4 * std::numeric_limits<double>::epsilon() * d.length);
    CHECK(worst_chord < 0.1);
  }
}

TEST_CASE("curvature") {
  SUBCASE("circle") {
    ShapeParams p;
    p.radius = 2.5;
    const BoundaryCurve c = build_curve(ShapeId::circle, p);
    for (double s : {0.0, 1.0, 7.0}) CHECK(curvature_at(c, s) == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("ellipse major-axis endpoint") {
    const BoundaryCurve c = build_curve(ShapeId::ellipse);
    CHECK(std::abs(curvature_at(c, 0.0)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(curvature_at(c, c.length() / 4)) == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("kite against centred finite differences") {
    const BoundaryCurve c = build_curve(ShapeId::kite);
    for (double t : {0.0, 0.7, 2.0, 3.5}) {
      const double e = 1e-4;
      const Vec2 xm = c.position_t(t - e), x0 = c.position_t(t), xp = c.position_t(t + e);
      const Vec2 d1 = (xp - xm) / (2 * e);
      const Vec2 d2 = (xp - 2 * x0 + xm) / (e * e);
      const double fd = (d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.norm(), 3);
      CHECK(std::abs(curvature_at(c, c.arclength_of(t)) - fd) <= 1e-6);
    }
  }
}

TEST_CASE("total curvature is 2 pi") {
  for (ShapeId shape : {ShapeId::circle, ShapeId::ellipse, ShapeId::kite}) {
    const BoundaryCurve c = build_curve(shape);
    const Discretization d = discretize(c, 3, 8);
    double total = 0;
    for (double k : d.curvature) total += k * d.h;
    CHECK(std::abs(total - 2 * kPi) <= 1e-6 * 2 * kPi);
  }
}

TEST_CASE("normals are outward and unit, tangents follow the arclength") {
  for (ShapeId shape : {ShapeId::circle, ShapeId::ellipse}) {
    const BoundaryCurve c = build_curve(shape);
    const Discretization d = discretize(c, 3, 8);
    const Vec2 centre = c.interior_point();
    for (int a = 0; a < d.n; ++a) {
      CHECK(d.normals[a].dot(d.points[a] - centre) > 0);
      CHECK(d.normals[a].norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(d.normals[a].dot(d.tangents[a])) < 1e-14);
    }
  }
}

TEST_CASE("doubling p keeps the even-indexed points") {
  const BoundaryCurve c = build_curve(ShapeId::kite);
  const Discretization d1 = discretize(c, 3, 8);
  const Discretization d2 = discretize(c, 3, 16);
  CHECK(d2.h == d1.h / 2);
  for (int a = 0; a < d1.n; ++a) CHECK((d2.points[2 * a] - d1.points[a]).norm() == 0.0);
}

TEST_CASE("interior point and diameter") {
  const BoundaryCurve e = build_curve(ShapeId::ellipse);
  CHECK(e.interior_point().norm() < 1e-14);
  CHECK(e.diameter() == doctest::Approx(2.0).epsilon(1e-6));
  const BoundaryCurve k = build_curve(ShapeId::kite);
  const Vec2 x0 = k.interior_point();
  // centroid of the kite lies on the symmetry axis y = 0
  CHECK(std::abs(x0.y()) < 1e-12);
  CHECK(x0.x() > -1.65);
  CHECK(x0.x() < 1.0);
}
