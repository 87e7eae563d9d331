#include "dirprec/quadrature.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dirprec {

using cplx = std::complex<double>;

LogQuadrature make_log_quadrature(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("make_log_quadrature: n must be even and >= 4");
  const double pi = std::numbers::pi;
  // R_k = -(4pi/n) sum_{m=1}^{n/2-1} cos(2pi m k/n)/m - (4pi/n^2)(-1)^k
  std::vector<cplx> c(n, 0.0), spec;
  for (int m = 1; m < n / 2; ++m) {
    c[m] = 1.0 / m;
    c[n - m] = 1.0 / m;
  }
  Eigen::FFT<double> fft;
  fft.fwd(spec, c);
  LogQuadrature lq;
  lq.n = n;
  lq.weight.resize(n);
  lq.correction.resize(n);
  for (int k = 0; k < n; ++k) {
    const double alt = (k % 2 == 0) ? 1.0 : -1.0;
    lq.weight[k] = -(2.0 * pi / n) * spec[k].real() - (4.0 * pi / (double(n) * n)) * alt;
  }
  lq.correction[0] = lq.weight[0];
  for (int k = 1; k < n; ++k) {
    const double s = std::sin(pi * k / n);
    lq.correction[k] = lq.weight[k] - (2.0 * pi / n) * std::log(4.0 * s * s);
  }
  return lq;
}

SpectralDerivative::SpectralDerivative(int n, double period) : n_(n), period_(period) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("SpectralDerivative: n must be even");
}

Eigen::VectorXcd SpectralDerivative::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != n_) throw std::invalid_argument("SpectralDerivative: size mismatch");
  Eigen::FFT<double> fft;
  std::vector<cplx> in(v.data(), v.data() + n_), spec;
  fft.fwd(spec, in);
  const double scale = 2.0 * std::numbers::pi / period_;
  for (int k = 0; k < n_; ++k) {
    const int freq = k <= n_ / 2 ? k : k - n_;
    if (k == n_ / 2) {
      spec[k] = 0.0;
    } else {
      spec[k] *= cplx(0.0, scale * freq);
    }
  }
  std::vector<cplx> out;
  fft.inv(out, spec);
  return Eigen::Map<const Eigen::VectorXcd>(out.data(), n_);
}

Eigen::MatrixXd SpectralDerivative::matrix() const {
  // D_jk = (pi/L) (-1)^{j-k} cot(pi (j-k)/n), zero diagonal.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
  const double pi = std::numbers::pi;
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) {
      if (j == k) continue;
      const int diff = j - k;
      const double sign = (std::abs(diff) % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = (pi / period_) * sign / std::tan(pi * diff / n_);
    }
  }
  return d;
}

}  // namespace dirprec
