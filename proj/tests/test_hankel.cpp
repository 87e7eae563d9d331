#include "dirprec/hankel.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace dirprec;
using Real = boost::multiprecision::cpp_bin_float_100;

namespace {

// Ascending series for J0, J1, Y0, Y1 in 100-digit arithmetic.
void series(const Real& x, Real& j0, Real& j1, Real& y0, Real& y1) {
  const Real pi = boost::math::constants::pi<Real>();
  const Real gamma = boost::math::constants::euler<Real>();
  const Real z = x * x / 4;
  Real term0 = 1, term1 = x / 2;  // (x/2)^{2k}/(k!)^2 and (x/2)^{2k+1}/(k!(k+1)!)
  Real harmonic = 0;              // H_k
  Real s_j0 = 0, s_j1 = 0, s_y0 = 0, s_y1 = 0;
  for (int k = 0; k < 400; ++k) {
    const Real sign = (k % 2) ? -1 : 1;
    s_j0 += sign * term0;
    s_j1 += sign * term1;
    if (k > 0) s_y0 -= sign * harmonic * term0;
    // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
    s_y1 += sign * (2 * harmonic + Real(1) / (k + 1)) * term1;
    harmonic += Real(1) / (k + 1);
    term0 *= z / Real((k + 1) * (k + 1));
    term1 *= z / Real((k + 1) * (k + 2));
    if (term0 < Real(1e-90) * (1 + abs(s_j0)) && k > 10 && term1 < Real(1e-90)) break;
  }
  j0 = s_j0;
  j1 = s_j1;
  const Real lg = log(x / 2) + gamma;
  y0 = 2 / pi * (lg * j0 + s_y0);
  y1 = -2 / (pi * x) + 2 / pi * lg * j1 - s_y1 / pi;
}

// Large-argument expansion summed to its smallest term (error ~ e^{-2x}).
void asymptotic(const Real& x, int nu, Real& j, Real& y) {
  const Real pi = boost::math::constants::pi<Real>();
  const Real mu = 4 * nu * nu;
  Real p = 0, q = 0, a = 1;
  Real last = 1e300;
  for (int k = 0; k < 1000; ++k) {
    const Real term = a / pow(8 * x, k);
    if (abs(term) > last) break;
    last = abs(term);
    if (k % 2 == 0) {
      p += ((k / 2) % 2 ? -1 : 1) * term;
    } else {
      q += (((k - 1) / 2) % 2 ? -1 : 1) * term;
    }
    a *= (mu - Real((2 * k + 1) * (2 * k + 1))) / (k + 1);
  }
  const Real chi = x - (2 * nu + 1) * pi / 4;
  const Real amp = sqrt(2 / (pi * x));
  j = amp * (p * cos(chi) - q * sin(chi));
  y = amp * (p * sin(chi) + q * cos(chi));
}

std::complex<double> oracle(int nu, double xd) {
  const Real x = xd;
  Real j0, j1, y0, y1;
  if (xd <= 40) {
    series(x, j0, j1, y0, y1);
    return nu == 0 ? std::complex<double>(double(j0), double(y0))
                   : std::complex<double>(double(j1), double(y1));
  }
  Real j, y;
  asymptotic(x, nu, j, y);
  return {double(j), double(y)};
}

}  // namespace

TEST_CASE("reference values at x = 1") {
  CHECK(hankel1(0, 1.0).real() == doctest::Approx(0.7651976866).epsilon(1e-10));
  CHECK(hankel1(0, 1.0).imag() == doctest::Approx(0.0882569642).epsilon(1e-9));
  CHECK(hankel1(1, 1.0).real() == doctest::Approx(0.4400505857).epsilon(1e-10));
  CHECK(hankel1(1, 1.0).imag() == doctest::Approx(-0.7812128213).epsilon(1e-10));
}

TEST_CASE("relative error against the high-precision oracle on a log grid") {
  double worst = 0;
  double worst_x = 0;
  for (int k = 0; k <= 560; ++k) {
    const double x = std::pow(10.0, -8.0 + 14.0 * k / 560.0);
    const Hankel01 h = hankel01(x);
    for (int nu = 0; nu < 2; ++nu) {
      const std::complex<double> ref = oracle(nu, x);
      const std::complex<double> got = nu == 0 ? h.h0 : h.h1;
      const double err = std::abs(got - ref) / std::abs(ref);
      if (err > worst) {
        worst = err;
        worst_x = x;
      }
    }
  }
  INFO("worst x = " << worst_x);
  CHECK(worst <= 1e-12);
}

TEST_CASE("both regimes agree with the oracle around the switch point") {
  for (double x : {24.0, 24.999, 25.0, 25.001, 26.0, 30.0, 39.5}) {
    const Hankel01 h = hankel01(x);
    CHECK(std::abs(h.h0 - oracle(0, x)) / std::abs(oracle(0, x)) <= 1e-12);
    CHECK(std::abs(h.h1 - oracle(1, x)) / std::abs(oracle(1, x)) <= 1e-12);
  }
}

TEST_CASE("Wronskian J0 Y1 - J1 Y0 = -2/(pi x)") {
  for (double x : {0.1, 1.0, 10.0, 100.0}) {
    const Hankel01 h = hankel01(x);
    const double w = h.h0.real() * h.h1.imag() - h.h1.real() * h.h0.imag();
    const double expected = -2.0 / (std::numbers::pi * x);
    CHECK(std::abs(w - expected) <= 1e-10 * std::abs(expected));
  }
}

TEST_CASE("large-argument modulus") {
  const double x = 1e4;
  const double ratio = std::abs(hankel1(0, x)) / std::sqrt(2.0 / (std::numbers::pi * x));
  CHECK(std::abs(ratio - 1.0) <= 1e-3);
}

TEST_CASE("small-argument logarithmic singularity") {
  // H0(x) - 1 - (2i/pi) ln(x/2) stays bounded as x -> 0.
  double prev = 0;
  for (double x = 1e-1; x >= 1e-8; x /= 10) {
    const std::complex<double> rest = hankel1(0, x) - 1.0 - std::complex<double>(0, 2 / std::numbers::pi) * std::log(x / 2);
    CHECK(std::abs(rest) < 1.0);
    if (prev > 0) CHECK(std::abs(std::abs(rest) - prev) < 1e-2);
    prev = std::abs(rest);
  }
  CHECK(std::abs(hankel1(0, 1e-8).imag()) > 10.0);
}

TEST_CASE("asymptotic fast path matches the dispatcher") {
  for (double x : {25.0, 49.9, 50.0, 199.0, 200.0, 1234.5, 9.9e5}) {
    const Hankel01 a = hankel01_asymptotic(x);
    const Hankel01 b = hankel01(x);
    CHECK(std::abs(a.h0 - b.h0) <= 1e-15 * std::abs(b.h0));
    CHECK(std::abs(a.h1 - b.h1) <= 1e-15 * std::abs(b.h1));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(hankel1(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(hankel1(1, -1.0), std::domain_error);
  CHECK_THROWS_AS(hankel1(0, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(hankel1(2, 1.0), std::invalid_argument);
}
