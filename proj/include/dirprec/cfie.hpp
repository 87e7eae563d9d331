// Nystrom discretisation of the combined-field integral equations
//   dirichlet (sound-soft):  (1/2 I + D - i eta S) q = f
//   neumann   (sound-hard):  (1/2 I - D' + (1/(i eta)) N) q = f
// on an equispaced-in-arclength grid. Log-singular kernels use the periodic
// Martensen-Kussmaul splitting; N is applied through Maue's identity
//   N = d/ds S d/ds + omega^2 S_nn,
// with spectral differentiation.
#pragma once

#include "dirprec/geometry.hpp"
#include "dirprec/kernels.hpp"
#include "dirprec/quadrature.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace dirprec {

enum class Storage { automatic, dense, matrix_free };

/// Single-layer Nystrom entries. lp = L/(2pi) is the parametric speed and
/// `delta` the log-quadrature correction for the index distance.
inline cplx nystrom_single_layer(double h, double omega, double lp, double r, double delta) {
  const Hankel01 hk = hankel01_fast(omega * r);
  return cplx(0.0, 0.25 * h) * hk.h0 - (delta * lp / (4.0 * std::numbers::pi)) * hk.h0.real();
}
cplx nystrom_single_layer_diagonal(double h, double omega, double lp, double r0);

/// Dense or matrix-free CFIE system matrix. Matrix-free storage regenerates
/// entries on every product; both paths use identical entry formulas.
class CfieMatrix {
 public:
  CfieMatrix(const Discretization& disc, BoundaryCondition bc, double eta,
             Storage storage = Storage::automatic, int dense_limit = 4096);

  int size() const { return n_; }
  BoundaryCondition bc() const { return bc_; }
  double eta() const { return eta_; }
  double omega() const { return omega_; }
  const Discretization& discretization() const { return *disc_; }
  const LogQuadrature& log_quadrature() const { return lq_; }
  bool is_dense() const { return dense_.size() > 0; }
  const Eigen::MatrixXcd& dense() const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

  /// Exact sub-block M(rows, cols) of the system matrix. For neumann this
  /// requires dense storage.
  Eigen::MatrixXcd block(int row0, int rows, int col0, int cols) const;

  // Component operators as dense matrices (intended for small n).
  Eigen::MatrixXcd single_layer() const;
  Eigen::MatrixXcd single_layer_nn() const;
  Eigen::MatrixXcd double_layer() const;
  Eigen::MatrixXcd adjoint_double_layer() const;
  Eigen::MatrixXcd hypersingular() const;

 private:
  struct Pair {
    cplx s;      // S_ab = S_ba
    cplx c;      // D_ab = c (n_b.d), D_ba = -c (n_a.d), d = x_a - x_b
    double nbd;  // n_b . d
    double nad;  // n_a . d
    double nanb;
  };
  Pair pair(int a, int b) const;
  cplx s_diag() const { return s_diag_; }
  cplx d_diag(int a) const { return -h_ * disc_->curvature[a] / (4.0 * std::numbers::pi); }

  void assemble_dense();
  Eigen::VectorXcd apply_matrix_free(const Eigen::VectorXcd& v) const;

  const Discretization* disc_;
  BoundaryCondition bc_;
  double eta_;
  int n_;
  double h_, omega_, lp_;
  LogQuadrature lq_;
  SpectralDerivative deriv_;
  cplx s_diag_;
  std::vector<double> xs_, ys_, nxs_, nys_;
  Eigen::MatrixXcd dense_;
};

CfieMatrix assemble_cfie(const Discretization& disc, BoundaryCondition bc, double eta,
                         Storage storage = Storage::automatic, int dense_limit = 4096);

Eigen::VectorXcd matvec(const CfieMatrix& m, const Eigen::VectorXcd& v);

enum class SourceKind { plane_wave, point_source };

struct RightHandSide {
  Eigen::VectorXcd f;
  SourceKind kind = SourceKind::plane_wave;
  Vec2 direction = Vec2(1, 0);  // plane wave
  Vec2 source = Vec2::Zero();   // point source
};

/// Incident plane wave u_I = exp(i omega d.x); f = -u_I or -du_I/dn.
RightHandSide plane_wave_rhs(const Discretization& disc, const Vec2& direction,
                             BoundaryCondition bc);

/// Boundary data of the radiating field G(., x0) for an interior source x0,
/// so that the exterior solution equals G(., x0).
RightHandSide point_source_rhs(const Discretization& disc, const Vec2& x0, BoundaryCondition bc);

/// Winding-number test against the discretised boundary polygon.
bool is_inside(const Discretization& disc, const Vec2& x);

struct FieldResult {
  Eigen::VectorXcd values;
  bool too_close = false;  // some target within 2 wavelengths of the boundary
};

/// Scattered field at exterior targets from the density q:
///   dirichlet: u = (D - i eta S) q,   neumann: u = (-S + (1/(i eta)) D) q.
FieldResult evaluate_field(const Discretization& disc, const Eigen::VectorXcd& density,
                           BoundaryCondition bc, double eta, const std::vector<Vec2>& targets);

}  // namespace dirprec
