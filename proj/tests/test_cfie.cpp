#include "dirprec/cfie.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <random>

using namespace dirprec;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

struct Fixture {
  BoundaryCurve curve;
  Discretization disc;
  Fixture(ShapeId shape, int q, int p, ShapeParams params = {})
      : curve(shape, params), disc(discretize(curve, q, p)) {}
};

Eigen::VectorXcd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v;
}

cplx h0(double x) { return cplx(std::cyl_bessel_j(0.0, x), std::cyl_neumann(0.0, x)); }
cplx h1(double x) { return cplx(std::cyl_bessel_j(1.0, x), std::cyl_neumann(1.0, x)); }

// Entry-by-entry sound-soft matrix from the kernel splitting
//   K(t, tau) = M1 ln(4 sin^2((t - tau)/2)) + M2,  entry = R_|a-b| M1 + (2pi/n) M2,
// using the standard library Bessel functions and explicit cosine sums.
cplx soft_entry(const Discretization& d, int a, int b, double eta) {
  const int n = d.n;
  const double lp = d.length / (2 * kPi);
  const double w = d.omega;
  double r_weight = 0;
  const int k = std::abs(a - b);
  for (int m = 1; m < n / 2; ++m) r_weight += std::cos(2 * kPi * m * k / n) / m;
  r_weight = -(4 * kPi / n) * r_weight - (4 * kPi / (double(n) * n)) * std::cos(kPi * k);
  if (a == b) {
    const cplx m1 = -lp / (4 * kPi);
    const cplx m2 = lp * (kI / 4.0 - (std::numbers::egamma + std::log(w * lp / 2)) / (2 * kPi));
    const cplx s = r_weight * m1 + (2 * kPi / n) * m2;
    const double dl = -d.h * d.curvature[a] / (4 * kPi);
    return 0.5 + dl - kI * eta * s;
  }
  const Vec2 diff = d.points[a] - d.points[b];
  const double r = diff.norm();
  const double lg = std::log(4 * std::pow(std::sin(kPi * (a - b) / n), 2));
  const cplx sk = kI / 4.0 * h0(w * r) * lp;
  const double s1 = -std::cyl_bessel_j(0.0, w * r) * lp / (4 * kPi);
  const double cos_b = d.normals[b].dot(diff) / r;
  const cplx dk = kI * w / 4.0 * h1(w * r) * cos_b * lp;
  const double d1 = -w * std::cyl_bessel_j(1.0, w * r) * cos_b * lp / (4 * kPi);
  const cplx s = r_weight * s1 + (2 * kPi / n) * (sk - s1 * lg);
  const cplx dl = r_weight * d1 + (2 * kPi / n) * (dk - d1 * lg);
  return dl - kI * eta * s;
}

double exterior_error(const Discretization& d, BoundaryCondition bc) {
  const CfieMatrix m(d, bc, d.omega, Storage::dense);
  const Vec2 x0 = d.curve->interior_point();
  const RightHandSide rhs = point_source_rhs(d, x0, bc);
  const Eigen::VectorXcd q = m.dense().partialPivLu().solve(rhs.f);
  std::vector<Vec2> ring;
  for (int k = 0; k < 32; ++k) ring.push_back(x0 + 3.0 * Vec2(std::cos(2 * kPi * k / 32), std::sin(2 * kPi * k / 32)));
  const FieldResult u = evaluate_field(d, q, bc, m.eta(), ring);
  double err = 0, ref = 0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const cplx g = green(d.omega, ring[k], x0);
    err = std::max(err, std::abs(u.values[k] - g));
    ref = std::max(ref, std::abs(g));
  }
  return err / ref;
}

}  // namespace

TEST_CASE("single layer is symmetric") {
  Fixture f(ShapeId::kite, 2, 8);
  const CfieMatrix m(f.disc, BoundaryCondition::dirichlet, f.disc.omega);
  const Eigen::MatrixXcd s = m.single_layer();
  CHECK((s - s.transpose()).norm() == 0.0);
}

TEST_CASE("circle single layer on the constant mode") {
  ShapeParams p;
  p.radius = 1.0;
  for (int q : {2, 3}) {
    Fixture f(ShapeId::circle, q, 8, p);
    const CfieMatrix m(f.disc, BoundaryCondition::dirichlet, f.disc.omega);
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(f.disc.n);
    const Eigen::VectorXcd s1 = m.single_layer() * ones;
    const double w = f.disc.omega;
    const cplx eig = kI * kPi / 2.0 * std::cyl_bessel_j(0.0, w) * h0(w);
    CHECK((s1 - eig * ones).norm() <= 1e-6 * std::abs(eig) * ones.norm());
  }
}

TEST_CASE("dense and matrix-free products match an entrywise oracle") {
  Fixture f(ShapeId::kite, 2, 16);  // n = 256
  const double eta = f.disc.omega;
  const CfieMatrix dense(f.disc, BoundaryCondition::dirichlet, eta, Storage::dense);
  const CfieMatrix free(f.disc, BoundaryCondition::dirichlet, eta, Storage::matrix_free);
  const Eigen::VectorXcd v = random_vector(f.disc.n, 7);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(f.disc.n);
  for (int a = 0; a < f.disc.n; ++a)
    for (int b = 0; b < f.disc.n; ++b) y[a] += soft_entry(f.disc, a, b, eta) * v[b];
  CHECK((dense.apply(v) - y).norm() <= 1e-13 * y.norm());
  CHECK((free.apply(v) - y).norm() <= 1e-13 * y.norm());
  CHECK((matvec(dense, v) - dense.dense() * v).norm() == 0.0);
}

TEST_CASE("matrix-free and dense storage agree for both conditions") {
  Fixture f(ShapeId::ellipse, 3, 8);  // n = 512
  for (auto bc : {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
    const CfieMatrix dense(f.disc, bc, f.disc.omega, Storage::dense);
    const CfieMatrix free(f.disc, bc, f.disc.omega, Storage::matrix_free);
    CHECK(dense.is_dense());
    CHECK_FALSE(free.is_dense());
    const Eigen::VectorXcd v = random_vector(f.disc.n, 3);
    const Eigen::VectorXcd a = dense.apply(v), b = free.apply(v);
    CHECK((a - b).norm() <= 1e-12 * a.norm());
    CHECK(free.apply(Eigen::VectorXcd::Zero(f.disc.n)).norm() == 0.0);
    const Eigen::MatrixXcd blk = dense.block(10, 20, 100, 30);
    CHECK((blk - dense.dense().block(10, 100, 20, 30)).norm() == 0.0);
    if (bc == BoundaryCondition::dirichlet) {
      CHECK((free.block(10, 20, 100, 30) - blk).norm() <= 1e-13 * blk.norm());
    } else {
      CHECK_THROWS(free.block(0, 4, 0, 4));
    }
  }
}

TEST_CASE("block bookkeeping") {
  Fixture f(ShapeId::kite, 2, 8);
  const int n = f.disc.n;
  const double eta = 1.3 * f.disc.omega;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  SUBCASE("sound-soft minus its identity and single-layer parts is the double layer") {
    const CfieMatrix m(f.disc, BoundaryCondition::dirichlet, eta, Storage::dense);
    const Eigen::MatrixXcd d = m.dense() - 0.5 * id + kI * eta * m.single_layer();
    CHECK((d - m.double_layer()).norm() <= 1e-14 * m.dense().norm());
  }
  SUBCASE("sound-hard from its components") {
    const CfieMatrix m(f.disc, BoundaryCondition::neumann, eta, Storage::dense);
    const Eigen::MatrixXcd expect = 0.5 * id - m.adjoint_double_layer() + m.hypersingular() / (kI * eta);
    CHECK((m.dense() - expect).norm() <= 1e-14 * m.dense().norm());
    CHECK((m.adjoint_double_layer() - m.double_layer().transpose()).norm() == 0.0);
  }
  SUBCASE("matrix is finite") {
    const CfieMatrix m(f.disc, BoundaryCondition::neumann, eta, Storage::dense);
    CHECK(m.dense().allFinite());
  }
  CHECK_THROWS(CfieMatrix(f.disc, BoundaryCondition::dirichlet, 0.0));
  const CfieMatrix m(f.disc, BoundaryCondition::dirichlet, eta);
  CHECK_THROWS(m.apply(Eigen::VectorXcd::Zero(n + 1)));
}

TEST_CASE("point-source exterior field converges under refinement") {
  for (auto bc : {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
    double prev = 0;
    for (int p : {4, 8, 16}) {
      Fixture f(ShapeId::kite, 2, p);
      const double e = exterior_error(f.disc, bc);
      INFO(to_string(bc) << " p=" << p << " error " << e << " previous " << prev);
      if (prev > 0) CHECK((e <= prev / 10 || e < 1e-11));
      prev = e;
    }
  }
}

TEST_CASE("plane-wave right-hand sides") {
  ShapeParams p;
  p.radius = 1.0;
  Fixture f(ShapeId::circle, 2, 8, p);
  const int quarter = f.disc.n / 4;  // the point (0, 1), normal (0, 1)
  const RightHandSide soft = plane_wave_rhs(f.disc, Vec2(1, 0), BoundaryCondition::dirichlet);
  for (int a = 0; a < f.disc.n; ++a) CHECK(std::abs(soft.f[a]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(soft.f[quarter] - cplx(-1.0, 0.0)) < 1e-12);
  const RightHandSide hard = plane_wave_rhs(f.disc, Vec2(1, 0), BoundaryCondition::neumann);
  CHECK(std::abs(hard.f[quarter]) < 1e-10 * f.disc.omega);
  const Vec2 x = f.disc.points[5];
  CHECK(std::abs(hard.f[5] + kI * f.disc.omega * f.disc.normals[5].x() * std::exp(kI * f.disc.omega * x.x())) < 1e-12 * f.disc.omega);
  CHECK_THROWS(plane_wave_rhs(f.disc, Vec2(1, 1), BoundaryCondition::dirichlet));
}

TEST_CASE("point-source right-hand sides") {
  Fixture f(ShapeId::ellipse, 2, 8);
  CHECK_THROWS(point_source_rhs(f.disc, Vec2(2.0, 0.0), BoundaryCondition::dirichlet));
  CHECK_THROWS(point_source_rhs(f.disc, f.disc.points[3], BoundaryCondition::dirichlet));
  CHECK(is_inside(f.disc, Vec2(0.2, 0.1)));
  CHECK_FALSE(is_inside(f.disc, Vec2(1.2, 0.0)));
  // exact field definition
  const Vec2 x0(0.1, 0.05), y(3.0, 1.0);
  CHECK(std::abs(green(f.disc.omega, y, x0) - kI / 4.0 * hankel1(0, f.disc.omega * (y - x0).norm())) < 1e-15);
  // approaching the boundary point (1, 0) raises the nearest data
  double prev = 0;
  for (double x : {0.0, 0.5, 0.8, 0.95, 0.99}) {
    const RightHandSide rhs = point_source_rhs(f.disc, Vec2(x, 0.0), BoundaryCondition::dirichlet);
    const double peak = std::abs(rhs.f[0]);
    CHECK(peak > prev);
    prev = peak;
  }
}

TEST_CASE("field evaluation") {
  Fixture f(ShapeId::kite, 2, 8);
  const double eta = f.disc.omega;
  std::vector<Vec2> targets{Vec2(4, 0), Vec2(0, 5), Vec2(-4, -3)};
  const FieldResult zero = evaluate_field(f.disc, Eigen::VectorXcd::Zero(f.disc.n), BoundaryCondition::dirichlet, eta, targets);
  CHECK(zero.values.norm() == 0.0);
  CHECK_FALSE(zero.too_close);
  const Eigen::VectorXcd q1 = random_vector(f.disc.n, 1), q2 = random_vector(f.disc.n, 2);
  for (auto bc : {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
    const auto a = evaluate_field(f.disc, q1, bc, eta, targets).values;
    const auto b = evaluate_field(f.disc, q2, bc, eta, targets).values;
    const auto c = evaluate_field(f.disc, q1 + q2, bc, eta, targets).values;
    CHECK((c - a - b).norm() <= 1e-13 * c.norm());
  }
  const Vec2 near = f.disc.points[0] + 0.5 * f.disc.wavelength * f.disc.normals[0];
  CHECK(evaluate_field(f.disc, q1, BoundaryCondition::dirichlet, eta, {near}).too_close);
  CHECK_THROWS(evaluate_field(f.disc, q1, BoundaryCondition::dirichlet, eta, {f.curve.interior_point()}));
}

TEST_CASE("solved field decays like the radiating source") {
  Fixture f(ShapeId::ellipse, 2, 8);
  const CfieMatrix m(f.disc, BoundaryCondition::dirichlet, f.disc.omega, Storage::dense);
  const Vec2 x0(0.1, 0.0);
  const Eigen::VectorXcd q = m.dense().partialPivLu().solve(point_source_rhs(f.disc, x0, BoundaryCondition::dirichlet).f);
  for (double radius : {2.0, 4.0}) {
    std::vector<Vec2> near, far;
    for (int k = 0; k < 16; ++k) {
      const Vec2 dir(std::cos(2 * kPi * k / 16), std::sin(2 * kPi * k / 16));
      near.push_back(radius * dir);
      far.push_back(2 * radius * dir);
    }
    const auto un = evaluate_field(f.disc, q, BoundaryCondition::dirichlet, m.eta(), near).values;
    const auto uf = evaluate_field(f.disc, q, BoundaryCondition::dirichlet, m.eta(), far).values;
    for (int k = 0; k < 16; ++k) {
      CHECK(std::abs(uf[k]) <= std::abs(un[k]) * (1.0 / std::sqrt(2.0)) * 1.05);
      CHECK(std::abs(uf[k] - green(f.disc.omega, far[k], x0)) <= 1e-8 * std::abs(green(f.disc.omega, far[k], x0)));
    }
  }
}

TEST_CASE("boundary condition names") {
  CHECK(parse_bc("dirichlet") == BoundaryCondition::dirichlet);
  CHECK(parse_bc("sound-hard") == BoundaryCondition::neumann);
  CHECK(to_string(BoundaryCondition::neumann) == "neumann");
  CHECK_THROWS(parse_bc("robin"));
}
