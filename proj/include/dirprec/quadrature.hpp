// Periodic quadrature on an n-point equispaced grid: log-singular weights of
// the Martensen-Kussmaul type and FFT-based spectral differentiation.
#pragma once

#include <Eigen/Core>

#include <complex>
#include <vector>

namespace dirprec {

/// Weights for  int_0^{2pi} ln(4 sin^2((t - tau)/2)) f(tau) dtau ~ sum_j R_{|i-j|} f(t_j)
/// on the grid t_j = 2 pi j / n (n even).
struct LogQuadrature {
  int n = 0;
  std::vector<double> weight;      // R_k, k = 0..n-1, cyclic in k
  std::vector<double> correction;  // R_k - (2pi/n) ln(4 sin^2(pi k/n)); equals R_0 at k = 0

  /// Cyclic-distance lookup for the correction.
  double delta(int a, int b) const {
    int k = a > b ? a - b : b - a;
    return correction[k];
  }
};

LogQuadrature make_log_quadrature(int n);

/// d/ds of a period-L function sampled at n equispaced points, Nyquist mode
/// dropped. Works in place on an Eigen vector.
class SpectralDerivative {
 public:
  SpectralDerivative(int n, double period);
  int size() const { return n_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  /// Dense real differentiation matrix (for small n and tests).
  Eigen::MatrixXd matrix() const;

 private:
  int n_;
  double period_;
};

}  // namespace dirprec
