#include "dirprec/cfie.hpp"

#include "dirprec/parallel.hpp"
#include "cfie_kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dirprec {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

std::vector<double> real_part(const Eigen::VectorXcd& v) {
  std::vector<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

std::vector<double> imag_part(const Eigen::VectorXcd& v) {
  std::vector<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i].imag();
  return out;
}
}  // namespace

BoundaryCondition parse_bc(const std::string& name) {
  if (name == "dirichlet" || name == "soft" || name == "sound-soft") return BoundaryCondition::dirichlet;
  if (name == "neumann" || name == "hard" || name == "sound-hard") return BoundaryCondition::neumann;
  throw std::invalid_argument("unknown boundary condition '" + name + "'");
}

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

cplx nystrom_single_layer_diagonal(double h, double omega, double lp, double r0) {
  // R_0 M1(t,t) + (2pi/n) M2(t,t) with
  //   M1(t,t) = -lp/(4pi),  M2(t,t) = [i/4 - (gamma + ln(omega lp/2))/(2pi)] lp.
  const double log_part = -r0 * lp / (4.0 * kPi);
  const double smooth_re = -(std::numbers::egamma + std::log(0.5 * omega * lp)) / (2.0 * kPi);
  return log_part + h * cplx(smooth_re, 0.25);
}

CfieMatrix::CfieMatrix(const Discretization& disc, BoundaryCondition bc, double eta,
                       Storage storage, int dense_limit)
    : disc_(&disc),
      bc_(bc),
      eta_(eta),
      n_(disc.n),
      h_(disc.h),
      omega_(disc.omega),
      lp_(disc.length / (2.0 * kPi)),
      lq_(make_log_quadrature(disc.n)),
      deriv_(disc.n, disc.length) {
  if (!(eta > 0)) throw std::invalid_argument("assemble_cfie: eta must be positive");
  s_diag_ = nystrom_single_layer_diagonal(h_, omega_, lp_, lq_.weight[0]);
  xs_.resize(n_);
  ys_.resize(n_);
  nxs_.resize(n_);
  nys_.resize(n_);
  for (int a = 0; a < n_; ++a) {
    xs_[a] = disc.points[a].x();
    ys_[a] = disc.points[a].y();
    nxs_[a] = disc.normals[a].x();
    nys_[a] = disc.normals[a].y();
  }
  const bool dense = storage == Storage::dense || (storage == Storage::automatic && n_ <= dense_limit);
  if (dense) assemble_dense();
}

const Eigen::MatrixXcd& CfieMatrix::dense() const {
  if (!is_dense()) throw std::logic_error("CfieMatrix: matrix-free storage has no dense matrix");
  return dense_;
}

CfieMatrix::Pair CfieMatrix::pair(int a, int b) const {
  const double dx = xs_[a] - xs_[b];
  const double dy = ys_[a] - ys_[b];
  const double r = std::sqrt(dx * dx + dy * dy);
  const Hankel01 hk = hankel01_fast(omega_ * r);
  const double delta = lq_.delta(a, b);
  Pair p;
  p.s = cplx(0.0, 0.25 * h_) * hk.h0 - (delta * lp_ / (4.0 * kPi)) * hk.h0.real();
  p.c = (cplx(0.0, 0.25 * h_ * omega_) * hk.h1 - (delta * omega_ * lp_ / (4.0 * kPi)) * hk.h1.real()) / r;
  p.nbd = nxs_[b] * dx + nys_[b] * dy;
  p.nad = nxs_[a] * dx + nys_[a] * dy;
  p.nanb = nxs_[a] * nxs_[b] + nys_[a] * nys_[b];
  return p;
}

Eigen::MatrixXcd CfieMatrix::single_layer() const {
  Eigen::MatrixXcd s(n_, n_);
  for (int a = 0; a < n_; ++a) {
    s(a, a) = s_diag_;
    for (int b = a + 1; b < n_; ++b) s(a, b) = s(b, a) = pair(a, b).s;
  }
  return s;
}

Eigen::MatrixXcd CfieMatrix::single_layer_nn() const {
  Eigen::MatrixXcd s(n_, n_);
  for (int a = 0; a < n_; ++a) {
    s(a, a) = s_diag_;
    for (int b = a + 1; b < n_; ++b) {
      const Pair p = pair(a, b);
      s(a, b) = s(b, a) = p.s * p.nanb;
    }
  }
  return s;
}

Eigen::MatrixXcd CfieMatrix::double_layer() const {
  Eigen::MatrixXcd d(n_, n_);
  for (int a = 0; a < n_; ++a) {
    d(a, a) = d_diag(a);
    for (int b = a + 1; b < n_; ++b) {
      const Pair p = pair(a, b);
      d(a, b) = p.c * p.nbd;
      d(b, a) = -p.c * p.nad;
    }
  }
  return d;
}

Eigen::MatrixXcd CfieMatrix::adjoint_double_layer() const { return double_layer().transpose(); }

Eigen::MatrixXcd CfieMatrix::hypersingular() const {
  Eigen::MatrixXcd x = single_layer();
  // S Dspec: Dspec is antisymmetric, so each row transforms as -Dspec row^T.
  for (int a = 0; a < n_; ++a) {
    const Eigen::VectorXcd row = x.row(a).transpose();
    x.row(a) = -deriv_.apply(row).transpose();
  }
  for (int b = 0; b < n_; ++b) {
    const Eigen::VectorXcd col = x.col(b);
    x.col(b) = deriv_.apply(col);
  }
  x += (omega_ * omega_) * single_layer_nn();
  return x;
}

void CfieMatrix::assemble_dense() {
  if (bc_ == BoundaryCondition::dirichlet) {
    dense_.resize(n_, n_);
    const cplx ieta(0.0, eta_);
    for (int a = 0; a < n_; ++a) {
      dense_(a, a) = 0.5 + d_diag(a) - ieta * s_diag_;
      for (int b = a + 1; b < n_; ++b) {
        const Pair p = pair(a, b);
        dense_(a, b) = p.c * p.nbd - ieta * p.s;
        dense_(b, a) = -p.c * p.nad - ieta * p.s;
      }
    }
    return;
  }
  dense_ = hypersingular() / cplx(0.0, eta_);
  for (int a = 0; a < n_; ++a) {
    dense_(a, a) += 0.5 - d_diag(a);
    for (int b = a + 1; b < n_; ++b) {
      const Pair p = pair(a, b);
      // -D'_ab = c (n_a.d),  -D'_ba = -c (n_b.d)
      dense_(a, b) += p.c * p.nad;
      dense_(b, a) -= p.c * p.nbd;
    }
  }
}

Eigen::VectorXcd CfieMatrix::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != n_) throw std::invalid_argument("CfieMatrix::apply: dimension mismatch");
  if (is_dense()) return dense_ * v;
  return apply_matrix_free(v);
}

Eigen::VectorXcd CfieMatrix::apply_matrix_free(const Eigen::VectorXcd& v) const {
  const int workers = worker_count();
  const bool soft = bc_ == BoundaryCondition::dirichlet;
  const int outputs = soft ? 1 : 3;
  // Per worker, per output: real and imaginary accumulators.
  std::vector<std::vector<double>> acc(static_cast<std::size_t>(workers) * outputs * 2,
                                       std::vector<double>(n_, 0.0));
  const std::vector<double> vre = real_part(v), vim = imag_part(v);
  std::vector<double> wre, wim;
  if (!soft) {
    const Eigen::VectorXcd w = deriv_.apply(v);
    wre = real_part(w);
    wim = imag_part(w);
  }

  detail::KernelGeometry g{n_,
                           xs_.data(),
                           ys_.data(),
                           nxs_.data(),
                           nys_.data(),
                           lq_.correction.data(),
                           omega_,
                           0.25 * h_,
                           0.25 * h_ * omega_,
                           lp_ / (4.0 * kPi),
                           omega_ * lp_ / (4.0 * kPi)};

  // Rows are paired (a, n-1-a) so every task touches n-1 unordered pairs.
  const int tasks = (n_ + 1) / 2;
  parallel_for(0, tasks, [&](int worker, int task) {
    auto slot = [&](int k) {
      auto& re = acc[(static_cast<std::size_t>(worker) * outputs + k) * 2];
      auto& im = acc[(static_cast<std::size_t>(worker) * outputs + k) * 2 + 1];
      return detail::SplitAcc{re.data(), im.data()};
    };
    const int rows[2] = {task, n_ - 1 - task};
    const int nrows = rows[0] == rows[1] ? 1 : 2;
    for (int k = 0; k < nrows; ++k) {
      if (soft) {
        detail::soft_row_pass(g, rows[k], eta_, {vre.data(), vim.data()}, slot(0));
      } else {
        detail::hard_row_pass(g, rows[k], {wre.data(), wim.data()}, {vre.data(), vim.data()},
                              slot(0), slot(1), slot(2));
      }
    }
  });

  auto gather = [&](int k) {
    Eigen::VectorXcd out(n_);
    for (int a = 0; a < n_; ++a) {
      double re = 0.0, im = 0.0;
      for (int wk = 0; wk < workers; ++wk) {
        re += acc[(static_cast<std::size_t>(wk) * outputs + k) * 2][a];
        im += acc[(static_cast<std::size_t>(wk) * outputs + k) * 2 + 1][a];
      }
      out[a] = cplx(re, im);
    }
    return out;
  };

  if (soft) {
    Eigen::VectorXcd y = gather(0);
    const cplx ies = cplx(0.0, eta_) * s_diag_;
    for (int a = 0; a < n_; ++a) y[a] += (0.5 + d_diag(a) - ies) * v[a];
    return y;
  }
  Eigen::VectorXcd sw = gather(0), snn = gather(1), dp = gather(2);
  const Eigen::VectorXcd w = deriv_.apply(v);
  for (int a = 0; a < n_; ++a) {
    sw[a] += s_diag_ * w[a];
    snn[a] += s_diag_ * v[a];
    dp[a] += d_diag(a) * v[a];
  }
  const Eigen::VectorXcd nv = deriv_.apply(sw) + (omega_ * omega_) * snn;
  return 0.5 * v - dp + nv / cplx(0.0, eta_);
}

Eigen::MatrixXcd CfieMatrix::block(int row0, int rows, int col0, int cols) const {
  if (row0 < 0 || col0 < 0 || row0 + rows > n_ || col0 + cols > n_)
    throw std::out_of_range("CfieMatrix::block: range outside the matrix");
  if (is_dense()) return dense_.block(row0, col0, rows, cols);
  if (bc_ == BoundaryCondition::neumann)
    throw std::logic_error("CfieMatrix::block: neumann blocks need dense storage");
  Eigen::MatrixXcd out(rows, cols);
  const cplx ieta(0.0, eta_);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int a = row0 + i, b = col0 + j;
      if (a == b) {
        out(i, j) = 0.5 + d_diag(a) - ieta * s_diag_;
      } else {
        const Pair p = pair(a, b);
        out(i, j) = p.c * p.nbd - ieta * p.s;
      }
    }
  }
  return out;
}

CfieMatrix assemble_cfie(const Discretization& disc, BoundaryCondition bc, double eta,
                         Storage storage, int dense_limit) {
  return CfieMatrix(disc, bc, eta, storage, dense_limit);
}

Eigen::VectorXcd matvec(const CfieMatrix& m, const Eigen::VectorXcd& v) { return m.apply(v); }

RightHandSide plane_wave_rhs(const Discretization& disc, const Vec2& direction,
                             BoundaryCondition bc) {
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("plane_wave_rhs: direction must be a unit vector");
  RightHandSide rhs;
  rhs.kind = SourceKind::plane_wave;
  rhs.direction = direction;
  rhs.f.resize(disc.n);
  for (int a = 0; a < disc.n; ++a) {
    const cplx ui = std::exp(kI * (disc.omega * direction.dot(disc.points[a])));
    if (bc == BoundaryCondition::dirichlet) {
      rhs.f[a] = -ui;
    } else {
      rhs.f[a] = -kI * disc.omega * direction.dot(disc.normals[a]) * ui;
    }
  }
  return rhs;
}

bool is_inside(const Discretization& disc, const Vec2& x) {
  double winding = 0.0;
  for (int a = 0; a < disc.n; ++a) {
    const Vec2 u = disc.points[a] - x;
    const Vec2 v = disc.points[(a + 1) % disc.n] - x;
    winding += std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
  }
  return std::abs(winding) > kPi;
}

RightHandSide point_source_rhs(const Discretization& disc, const Vec2& x0, BoundaryCondition bc) {
  if (!is_inside(disc, x0)) throw std::invalid_argument("point_source_rhs: source must be inside the scatterer");
  for (const auto& p : disc.points)
    if ((p - x0).norm() < 1e-12) throw std::invalid_argument("point_source_rhs: source lies on the boundary");
  RightHandSide rhs;
  rhs.kind = SourceKind::point_source;
  rhs.source = x0;
  rhs.f.resize(disc.n);
  for (int a = 0; a < disc.n; ++a) {
    if (bc == BoundaryCondition::dirichlet) {
      rhs.f[a] = green(disc.omega, disc.points[a], x0);
    } else {
      rhs.f[a] = green_dnx(disc.omega, disc.points[a], disc.normals[a], x0);
    }
  }
  return rhs;
}

FieldResult evaluate_field(const Discretization& disc, const Eigen::VectorXcd& density,
                           BoundaryCondition bc, double eta, const std::vector<Vec2>& targets) {
  if (density.size() != disc.n) throw std::invalid_argument("evaluate_field: density size mismatch");
  FieldResult res;
  res.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(targets.size()));
  const cplx ieta(0.0, eta);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vec2& x = targets[t];
    if (is_inside(disc, x)) throw std::invalid_argument("evaluate_field: target inside the scatterer");
    cplx u = 0.0;
    for (int b = 0; b < disc.n; ++b) {
      const Vec2& y = disc.points[b];
      if ((x - y).norm() < 2.0 * disc.wavelength) res.too_close = true;
      const cplx g = green(disc.omega, x, y);
      const cplx dg = green_dny(disc.omega, x, y, disc.normals[b]);
      const cplx k = bc == BoundaryCondition::dirichlet ? dg - ieta * g : -g + dg / ieta;
      u += k * density[b];
    }
    res.values[static_cast<Eigen::Index>(t)] = disc.h * u;
  }
  return res;
}

}  // namespace dirprec
