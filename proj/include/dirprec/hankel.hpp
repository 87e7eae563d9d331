// Hankel functions of the first kind, orders 0 and 1, for positive real
// arguments.
#pragma once

#include <complex>
#include <numbers>

namespace dirprec {

using cplx = std::complex<double>;

/// H^(1)_0 and H^(1)_1 evaluated at the same argument.
struct Hankel01 {
  cplx h0;
  cplx h1;
};

/// Arguments at or above this value use the large-argument expansion.
inline constexpr double kHankelAsymptoticThreshold = 25.0;

namespace detail {

// Coefficients of the Hankel large-argument expansion split into the
// even (P) and odd (Q) parts, already signed, in powers of 1/x^2:
//   H_nu(x) = sqrt(2/(pi x)) e^{i(x - nu pi/2 - pi/4)} (P(x) + i Q(x)),
//   P = sum_j p_j x^{-2j},  Q = sum_j q_j x^{-2j-1}.
struct AsymptoticTable {
  double p0[8], q0[8], p1[8], q1[8];
};
const AsymptoticTable& asymptotic_table();

}  // namespace detail

/// Large-argument evaluation; accurate to a few ulps for x >= 25.
inline Hankel01 hankel01_asymptotic(double x) {
  const auto& tab = detail::asymptotic_table();
  const double u = 1.0 / x;
  const double u2 = u * u;
  // 16 terms near the threshold, fewer further out.
  const int terms = x >= 200.0 ? 4 : (x >= 50.0 ? 6 : 8);
  double p0 = 0, q0 = 0, p1 = 0, q1 = 0;
  for (int j = terms - 1; j >= 0; --j) {
    p0 = p0 * u2 + tab.p0[j];
    q0 = q0 * u2 + tab.q0[j];
    p1 = p1 * u2 + tab.p1[j];
    q1 = q1 * u2 + tab.q1[j];
  }
  q0 *= u;
  q1 *= u;
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x)) * std::numbers::sqrt2 * 0.5;
  const double c = std::cos(x);
  const double s = std::sin(x);
  // e^{i(x - pi/4)} = e^{ix} (1 - i)/sqrt2,  e^{i(x - 3pi/4)} = e^{ix} (-1 - i)/sqrt2
  const cplx ph0(amp * (c + s), amp * (s - c));
  const cplx ph1(amp * (s - c), -amp * (c + s));
  return {ph0 * cplx(p0, q0), ph1 * cplx(p1, q1)};
}

/// H^(1)_0(x) and H^(1)_1(x) for x > 0. Throws std::domain_error otherwise.
Hankel01 hankel01(double x);

/// H^(1)_order(x), order in {0, 1}, x > 0.
cplx hankel1(int order, double x);

}  // namespace dirprec
