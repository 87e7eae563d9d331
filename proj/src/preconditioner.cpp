#include "dirprec/preconditioner.hpp"

#include "dirprec/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace dirprec {

std::vector<SchurBlock> build_schur_blocks(const DirectionalApprox& approx) {
  std::vector<SchurBlock> out(approx.block_count());
  parallel_for(0, approx.block_count(), [&](int, int b) {
    const Eigen::MatrixXcd& u = approx.fourier(approx.block_level(b));
    SchurBlock& sb = out[b];
    sb.s = u.transpose() * approx.block(b).inverse * u;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sb.s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv[0];
    const double smin = sv[sv.size() - 1];
    sb.condition = smin > 0 ? smax / smin : INFINITY;
    if (sb.condition > 1e12) {
      sb.regularized = true;
      Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] > 1e-12 * smax) inv[k] = 1.0 / sv[k];
      sb.t = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    } else {
      sb.t = sb.s.partialPivLu().inverse();
    }
  });
  for (int b = 0; b < approx.block_count(); ++b)
    if (out[b].regularized)
      std::cerr << "warning: S block " << b << " ill-conditioned (cond " << out[b].condition
                << "), using a pseudo-inverse\n";
  return out;
}

Eigen::SparseMatrix<cplx> threshold_T(const Eigen::MatrixXcd& t, double tau) {
  if (!(tau >= 1.0)) throw std::invalid_argument("threshold_T: tau must be at least 1");
  const long rows = t.rows(), cols = t.cols();
  const long total = rows * cols;
  const long keep = std::min<long>(total, static_cast<long>(std::ceil(tau * static_cast<double>(rows))));
  std::vector<long> order(total);
  std::iota(order.begin(), order.end(), 0L);
  // Linear index row*cols + col keeps the (row, col) tie-break.
  auto mag = [&](long k) { return std::abs(t(k / cols, k % cols)); };
  std::stable_sort(order.begin(), order.end(), [&](long x, long y) { return mag(x) > mag(y); });
  std::vector<Eigen::Triplet<cplx>> kept;
  kept.reserve(keep);
  for (long k = 0; k < keep; ++k) kept.emplace_back(order[k] / cols, order[k] % cols, t(order[k] / cols, order[k] % cols));
  Eigen::SparseMatrix<cplx> out(rows, cols);
  out.setFromTriplets(kept.begin(), kept.end());
  return out;
}

Eigen::SparseMatrix<cplx> build_W(const DirectionalApprox& approx, const std::vector<SchurBlock>& blocks) {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(approx.e_entries().size() + approx.phase_dim());
  for (const auto& e : approx.e_entries()) t.emplace_back(e.row, e.col, e.value);
  for (int i = 0; i < approx.segment_count(); ++i) {
    const Eigen::MatrixXcd& ti = blocks[approx.block_of(i)].t;
    const int d = static_cast<int>(ti.rows());
    const int off = approx.offset(i);
    for (int a = 0; a < d; ++a) t.emplace_back(off + a, off + d - 1 - a, ti(a, d - 1 - a));
  }
  Eigen::SparseMatrix<cplx> w(approx.phase_dim(), approx.phase_dim());
  w.setFromTriplets(t.begin(), t.end());
  return w;
}

DirectionalPreconditioner::DirectionalPreconditioner(const DirectionalApprox& approx,
                                                     const PreconditionerOptions& opt)
    : approx_(&approx), opt_(opt) {
  schur_ = build_schur_blocks(approx);
  t_sparse_.resize(schur_.size());
  for (std::size_t b = 0; b < schur_.size(); ++b) {
    if (opt_.exact) {
      t_sparse_[b] = schur_[b].t.sparseView(0.0, 0.0);
    } else {
      t_sparse_[b] = threshold_T(schur_[b].t, opt_.tau);
    }
    LevelDiagnostics ld;
    ld.block = static_cast<int>(b);
    ld.level = approx.block_level(static_cast<int>(b));
    ld.dim = static_cast<int>(schur_[b].t.rows());
    ld.condition = schur_[b].condition;
    ld.regularized = schur_[b].regularized;
    ld.nnz_t = t_sparse_[b].nonZeros();
    diag_.blocks.push_back(ld);
  }
  diag_.nnz_e = static_cast<long>(approx.e_entries().size());
  diag_.dim_w = approx.phase_dim();
  if (opt_.exact) {
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(approx.phase_dim(), approx.phase_dim());
    for (const auto& e : approx.e_entries()) w(e.row, e.col) += e.value;
    for (int i = 0; i < approx.segment_count(); ++i) {
      const Eigen::MatrixXcd& ti = schur_[approx.block_of(i)].t;
      w.block(approx.offset(i), approx.offset(i), ti.rows(), ti.cols()) += ti;
    }
    diag_.nnz_w = static_cast<long>((w.array() != cplx(0.0)).count());
    dense_w_.emplace(w);
  } else {
    w_ = build_W(approx, schur_);
    diag_.nnz_w = w_.nonZeros();
    lu_.factorize(w_);
    diag_.lu_fill = lu_.fill_in();
  }
}

Eigen::VectorXcd DirectionalPreconditioner::apply_T(const Eigen::VectorXcd& y) const {
  Eigen::VectorXcd out(y.size());
  for (int i = 0; i < approx_->segment_count(); ++i) {
    const auto& t = t_sparse_[approx_->block_of(i)];
    const int off = approx_->offset(i);
    out.segment(off, t.rows()) = t * y.segment(off, t.cols());
  }
  return out;
}

Eigen::VectorXcd DirectionalPreconditioner::apply(const Eigen::VectorXcd& f) const {
  if (f.size() != size()) throw std::invalid_argument("DirectionalPreconditioner::apply: dimension mismatch");
  const Eigen::VectorXcd bf = approx_->apply_Binv(f);
  const Eigen::VectorXcd g = approx_->apply_Ut(bf);
  const Eigen::VectorXcd tg = apply_T(g);
  const Eigen::VectorXcd r = dense_w_ ? Eigen::VectorXcd(dense_w_->solve(tg)) : lu_.solve(tg);
  return bf - approx_->apply_Binv(approx_->apply_U(apply_T(g - r)));
}

void DirectionalPreconditioner::write_diagnostics(std::ostream& out) const {
  out << "block,level,dim,cond_s,regularized,nnz_t\n";
  for (const auto& b : diag_.blocks)
    out << b.block << ',' << b.level << ',' << b.dim << ',' << b.condition << ','
        << (b.regularized ? 1 : 0) << ',' << b.nnz_t << '\n';
  out << "# nnz_e=" << diag_.nnz_e << " nnz_w=" << diag_.nnz_w << " dim_w=" << diag_.dim_w
      << " lu_fill=" << diag_.lu_fill << '\n';
}

}  // namespace dirprec
