// Left-looking sparse LU with partial pivoting and a COLAMD column order:
//   P A Q = L U,  L unit lower triangular, U upper triangular.
#pragma once

#include <Eigen/Sparse>

#include <complex>
#include <vector>

namespace dirprec {

class SparseLU {
 public:
  using Scalar = std::complex<double>;
  using Matrix = Eigen::SparseMatrix<Scalar>;  // column major

  SparseLU() = default;
  explicit SparseLU(const Matrix& a) { factorize(a); }

  /// Throws std::runtime_error when a pivot vanishes.
  void factorize(const Matrix& a);

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;

  int size() const { return n_; }
  /// Factors in pivot order (row k of L and U is the k-th pivot row).
  const Matrix& L() const { return l_; }
  const Matrix& U() const { return u_; }
  /// row_perm[k] = original row of pivot k;  col_perm[k] = original column k.
  const std::vector<int>& row_perm() const { return row_perm_; }
  const std::vector<int>& col_perm() const { return col_perm_; }
  /// P A Q assembled explicitly.
  Matrix permuted(const Matrix& a) const;

  long nnz_factors() const { return static_cast<long>(l_.nonZeros() + u_.nonZeros()); }
  /// nnz(L) + nnz(U) - nnz(A), with the unit diagonal of L not stored.
  long fill_in() const { return nnz_factors() - input_nnz_; }

 private:
  int n_ = 0;
  long input_nnz_ = 0;
  Matrix l_, u_;
  std::vector<int> row_perm_, col_perm_;
};

}  // namespace dirprec
