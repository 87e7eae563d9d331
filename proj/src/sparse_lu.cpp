#include "dirprec/sparse_lu.hpp"

#include <Eigen/OrderingMethods>

#include <cmath>
#include <stdexcept>
#include <string>

namespace dirprec {

void SparseLU::factorize(const Matrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("SparseLU: matrix must be square");
  n_ = static_cast<int>(input.rows());
  Matrix a = input;
  a.makeCompressed();
  input_nnz_ = a.nonZeros();

  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
  Eigen::COLAMDOrdering<int> colamd;
  colamd(a, perm);
  col_perm_.resize(n_);
  for (int k = 0; k < n_; ++k) col_perm_[k] = perm.indices()[k];

  // pivot_of[row] = pivot step of the original row, or -1 while unpivoted.
  std::vector<int> pivot_of(n_, -1);
  row_perm_.assign(n_, -1);
  std::vector<Scalar> x(n_, Scalar(0));
  std::vector<char> mark(n_, 0);
  std::vector<int> pattern;
  // Columns of L keyed by original row, converted at the end.
  std::vector<std::vector<std::pair<int, Scalar>>> lcols(n_), ucols(n_);
  double norm_a = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (Matrix::InnerIterator it(a, k); it; ++it) norm_a = std::max(norm_a, std::abs(it.value()));

  for (int j = 0; j < n_; ++j) {
    pattern.clear();
    for (Matrix::InnerIterator it(a, col_perm_[j]); it; ++it) {
      x[it.row()] = it.value();
      if (!mark[it.row()]) {
        mark[it.row()] = 1;
        pattern.push_back(it.row());
      }
    }
    // Forward substitution in pivot order: x -= L(:,k) x[row_perm[k]].
    for (int k = 0; k < j; ++k) {
      const Scalar xk = x[row_perm_[k]];
      if (xk == Scalar(0)) continue;
      for (const auto& [row, value] : lcols[k]) {
        if (!mark[row]) {
          mark[row] = 1;
          pattern.push_back(row);
        }
        x[row] -= value * xk;
      }
    }
    int pivot_row = -1;
    double best = -1.0;
    for (int row : pattern) {
      if (pivot_of[row] >= 0) continue;
      const double mag = std::abs(x[row]);
      if (mag > best || (mag == best && row < pivot_row)) {
        best = mag;
        pivot_row = row;
      }
    }
    if (pivot_row < 0 || !(best > 1e-14 * norm_a)) {
      throw std::runtime_error("SparseLU: zero pivot in column " + std::to_string(j) +
                               " (|pivot| = " + std::to_string(std::max(best, 0.0)) + ")");
    }
    const Scalar pivot = x[pivot_row];
    pivot_of[pivot_row] = j;
    row_perm_[j] = pivot_row;
    for (int row : pattern) {
      const Scalar value = x[row];
      if (row != pivot_row && value != Scalar(0)) {
        if (pivot_of[row] >= 0) {
          ucols[j].emplace_back(pivot_of[row], value);
        } else {
          lcols[j].emplace_back(row, value / pivot);
        }
      }
      x[row] = Scalar(0);
      mark[row] = 0;
    }
    ucols[j].emplace_back(j, pivot);
  }

  std::vector<Eigen::Triplet<Scalar>> lt, ut;
  for (int j = 0; j < n_; ++j) {
    for (const auto& [row, value] : lcols[j]) lt.emplace_back(pivot_of[row], j, value);
    for (const auto& [k, value] : ucols[j]) ut.emplace_back(k, j, value);
  }
  l_.resize(n_, n_);
  u_.resize(n_, n_);
  l_.setFromTriplets(lt.begin(), lt.end());
  u_.setFromTriplets(ut.begin(), ut.end());
}

Eigen::VectorXcd SparseLU::solve(const Eigen::VectorXcd& b) const {
  if (b.size() != n_) throw std::invalid_argument("SparseLU::solve: dimension mismatch");
  // L U z = P b, x = Q z.
  Eigen::VectorXcd y(n_);
  for (int k = 0; k < n_; ++k) y[k] = b[row_perm_[k]];
  for (int j = 0; j < n_; ++j) {
    const Scalar yj = y[j];
    if (yj == Scalar(0)) continue;
    for (Matrix::InnerIterator it(l_, j); it; ++it) y[it.row()] -= it.value() * yj;
  }
  for (int j = n_ - 1; j >= 0; --j) {
    Scalar diag(0);
    for (Matrix::InnerIterator it(u_, j); it; ++it)
      if (it.row() == j) diag = it.value();
    y[j] /= diag;
    const Scalar yj = y[j];
    for (Matrix::InnerIterator it(u_, j); it; ++it)
      if (it.row() < j) y[it.row()] -= it.value() * yj;
  }
  Eigen::VectorXcd x(n_);
  for (int k = 0; k < n_; ++k) x[col_perm_[k]] = y[k];
  return x;
}

SparseLU::Matrix SparseLU::permuted(const Matrix& a) const {
  std::vector<int> inv_row(n_);
  for (int k = 0; k < n_; ++k) inv_row[row_perm_[k]] = k;
  std::vector<Eigen::Triplet<Scalar>> t;
  for (int j = 0; j < n_; ++j)
    for (Matrix::InnerIterator it(a, col_perm_[j]); it; ++it) t.emplace_back(inv_row[it.row()], j, it.value());
  Matrix out(n_, n_);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace dirprec
