// Directional preconditioner: an approximate inverse of B + U E U^t obtained
// from the block factorisation of the augmented system
//   [B U 0; U^t 0 I; 0 I E] [q; p; r] = [f; 0; 0]
// with S = U^t B^-1 U, T = S^-1 and W = E + T.
#pragma once

#include "dirprec/directional.hpp"
#include "dirprec/sparse_lu.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <optional>
#include <vector>

namespace dirprec {

struct SchurBlock {
  Eigen::MatrixXcd s;
  Eigen::MatrixXcd t;
  double condition = 0;    // 2-norm condition number of S
  bool regularized = false;  // T from a truncated pseudo-inverse
};

/// One S/T pair per diagonal block of the approximation.
std::vector<SchurBlock> build_schur_blocks(const DirectionalApprox& approx);

/// Keeps the ceil(tau * dim) largest entries in magnitude; ties resolved in
/// favour of the lexicographically smaller (row, col).
Eigen::SparseMatrix<cplx> threshold_T(const Eigen::MatrixXcd& t, double tau);

/// E plus the anti-diagonal (a, D-1-a) of every T_i, on the phase index space.
Eigen::SparseMatrix<cplx> build_W(const DirectionalApprox& approx, const std::vector<SchurBlock>& blocks);

struct PreconditionerOptions {
  double tau = 4.0;
  /// Unapproximated pipeline: full T, W = E + T solved densely.
  bool exact = false;
};

struct LevelDiagnostics {
  int block = 0;
  int level = 0;
  int dim = 0;
  double condition = 0;
  bool regularized = false;
  long nnz_t = 0;
};

struct PreconditionerDiagnostics {
  std::vector<LevelDiagnostics> blocks;
  long nnz_e = 0;
  long nnz_w = 0;
  int dim_w = 0;
  long lu_fill = 0;
};

class DirectionalPreconditioner {
 public:
  DirectionalPreconditioner(const DirectionalApprox& approx, const PreconditionerOptions& opt = {});

  int size() const { return approx_->size(); }
  /// q = B^-1 (f - U [T] (g - r)),  g = U^t B^-1 f,  r = W^-1 [T] g.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& f) const;

  const std::vector<SchurBlock>& schur() const { return schur_; }
  const Eigen::SparseMatrix<cplx>& W() const { return w_; }
  const SparseLU& lu() const { return lu_; }
  const PreconditionerDiagnostics& diagnostics() const { return diag_; }
  void write_diagnostics(std::ostream& out) const;

 private:
  Eigen::VectorXcd apply_T(const Eigen::VectorXcd& y) const;

  const DirectionalApprox* approx_;
  PreconditionerOptions opt_;
  std::vector<SchurBlock> schur_;
  std::vector<Eigen::SparseMatrix<cplx>> t_sparse_;  // thresholded T per block
  Eigen::SparseMatrix<cplx> w_;
  SparseLU lu_;
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXcd>> dense_w_;
  PreconditionerDiagnostics diag_;
};

}  // namespace dirprec
