#include "dirprec/hankel.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dirprec {

namespace detail {

const AsymptoticTable& asymptotic_table() {
  static const AsymptoticTable table = [] {
    // a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k)
    auto coeffs = [](int nu) {
      std::array<double, 16> a{};
      a[0] = 1.0;
      for (int k = 1; k < 16; ++k) {
        const double odd = 2.0 * k - 1.0;
        a[k] = a[k - 1] * (4.0 * nu * nu - odd * odd) / (8.0 * k);
      }
      return a;
    };
    AsymptoticTable t{};
    const auto a0 = coeffs(0);
    const auto a1 = coeffs(1);
    for (int j = 0; j < 8; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      t.p0[j] = sign * a0[2 * j];
      t.q0[j] = sign * a0[2 * j + 1];
      t.p1[j] = sign * a1[2 * j];
      t.q1[j] = sign * a1[2 * j + 1];
    }
    return t;
  }();
  return table;
}

}  // namespace detail

namespace {

constexpr double kEulerGamma = std::numbers::egamma;

// J0, J1, Y0, Y1 for 0 < x < 25 via Miller's backward recurrence normalised
// by J0 + 2 sum J_2k = 1, with Neumann series for the second kind:
//   Y0 = (2/pi)(ln(x/2)+gamma) J0 - (4/pi) sum_k (-1)^k J_2k / k
//   Y1 = -Y0' (differentiated term by term).
Hankel01 hankel01_recurrence(double x) {
  const int top = 2 * (static_cast<int>(x + 40.0) / 2) + 2;
  std::vector<double> j(static_cast<std::size_t>(top) + 2, 0.0);
  j[top + 1] = 0.0;
  j[top] = 1e-300;
  for (int k = top; k >= 1; --k) {
    j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250) {
      for (int m = k - 1; m <= top + 1; ++m) j[m] *= 1e-250;
    }
  }
  double norm = j[0];
  for (int k = 2; k <= top; k += 2) norm += 2.0 * j[k];
  for (auto& v : j) v /= norm;

  const double two_over_pi = 2.0 / std::numbers::pi;
  const double lg = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0;
  double s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= top + 1; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  const double j0 = j[0];
  const double j1 = j[1];
  const double y0 = two_over_pi * lg * j0 - 2.0 * two_over_pi * s0;
  const double y1 = -two_over_pi * j0 / x + two_over_pi * lg * j1 + two_over_pi * s1;
  return {cplx(j0, y0), cplx(j1, y1)};
}

}  // namespace

Hankel01 hankel01(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("hankel01: argument must be positive and finite");
  }
  if (x >= kHankelAsymptoticThreshold) return hankel01_asymptotic(x);
  return hankel01_recurrence(x);
}

cplx hankel1(int order, double x) {
  if (order != 0 && order != 1) {
    throw std::invalid_argument("hankel1: only orders 0 and 1 are supported");
  }
  const Hankel01 h = hankel01(x);
  return order == 0 ? h.h0 : h.h1;
}

}  // namespace dirprec
