// Free-space Helmholtz kernel G(x,y) = (i/4) H0(omega |x-y|) and its normal
// derivatives, plus the combined-field kernels built from them.
#pragma once

#include "dirprec/geometry.hpp"
#include "dirprec/hankel.hpp"

#include <stdexcept>
#include <string>

namespace dirprec {

enum class BoundaryCondition { dirichlet, neumann };  // sound-soft, sound-hard

BoundaryCondition parse_bc(const std::string& name);
std::string to_string(BoundaryCondition bc);

inline Hankel01 hankel01_fast(double x) {
  return x >= kHankelAsymptoticThreshold ? hankel01_asymptotic(x) : hankel01(x);
}

inline cplx green(double omega, const Vec2& x, const Vec2& y) {
  const double r = (x - y).norm();
  return cplx(0.0, 0.25) * hankel01_fast(omega * r).h0;
}

/// dG/dn(y) = (i omega / 4) H1(omega r) n_y . (x - y) / r
inline cplx green_dny(double omega, const Vec2& x, const Vec2& y, const Vec2& ny) {
  const Vec2 d = x - y;
  const double r = d.norm();
  return cplx(0.0, 0.25 * omega) * hankel01_fast(omega * r).h1 * (ny.dot(d) / r);
}

/// dG/dn(x) = -(i omega / 4) H1(omega r) n_x . (x - y) / r
inline cplx green_dnx(double omega, const Vec2& x, const Vec2& nx, const Vec2& y) {
  const Vec2 d = x - y;
  const double r = d.norm();
  return cplx(0.0, -0.25 * omega) * hankel01_fast(omega * r).h1 * (nx.dot(d) / r);
}

/// d^2 G / dn(x) dn(y) = (i omega/4) [ (omega H0 - 2 H1/r)(n_x.d)(n_y.d)/r^2 + H1 (n_x.n_y)/r ]
inline cplx green_dnxdny(double omega, const Vec2& x, const Vec2& nx, const Vec2& y,
                         const Vec2& ny) {
  const Vec2 d = x - y;
  const double r = d.norm();
  const Hankel01 h = hankel01_fast(omega * r);
  const cplx radial = (omega * h.h0 - 2.0 * h.h1 / r) * (nx.dot(d) * ny.dot(d) / (r * r));
  return cplx(0.0, 0.25 * omega) * (radial + h.h1 * (nx.dot(ny) / r));
}

/// Off-diagonal kernel of the combined-field operator (without quadrature weight):
///   dirichlet: dG/dn(y) - i eta G
///   neumann:  -dG/dn(x) + (1/(i eta)) d^2G/dn(x)dn(y)
inline cplx cfie_kernel(BoundaryCondition bc, double omega, double eta, const Vec2& x,
                        const Vec2& nx, const Vec2& y, const Vec2& ny) {
  if (bc == BoundaryCondition::dirichlet) {
    return green_dny(omega, x, y, ny) - cplx(0.0, eta) * green(omega, x, y);
  }
  return -green_dnx(omega, x, nx, y) + green_dnxdny(omega, x, nx, y, ny) / cplx(0.0, eta);
}

}  // namespace dirprec
