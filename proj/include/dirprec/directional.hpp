// Data-sparse approximation M ~ B + U E U^t: flat diagonal blocks B, partial
// Fourier blocks U and one directional coefficient per ordered segment pair.
#pragma once

#include "dirprec/cfie.hpp"
#include "dirprec/segmentation.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

namespace dirprec {

/// K = { -omega + j omega / 2^level : j = 0 .. 2^(level+1) }.
struct PhaseGrid {
  int level = 0;
  double omega = 0;

  int size() const { return (2 << level) + 1; }
  double spacing() const { return omega / static_cast<double>(1 << level); }
  double value(int j) const { return -omega + j * spacing(); }
  /// Index of the nearest gridpoint; exact midpoints go to the one nearer 0.
  int nearest(double k) const;
};

struct PhasePair {
  int row = 0;      // index of k^i in K_i
  int col = 0;      // index of k^j in K_j
  double ki = 0;    // rounded values
  double kj = 0;
  double ki_exact = 0;  // omega a.t_i before rounding
  double kj_exact = 0;  // -omega a.t_j before rounding
};

/// a = (c_i - c_j)/|c_i - c_j|;  k^i = [omega a.t_i]_i,  k^j = [-omega a.t_j]_j.
PhasePair phase_pair(const Segment& si, const Segment& sj, double omega);

/// U_l(j, c) = exp(i K_c (j - (N-1)/2) h) for a segment of N = 2^l p points.
Eigen::MatrixXcd level_fourier_matrix(int level, int p, double h, double omega);

/// CFIE restricted to a straight segment of 2^level p points with the grid
/// spacing, wavenumber and log correction of `disc`. Cached per level, bc
/// and discretisation.
struct FlatBlock {
  Eigen::MatrixXcd b;
  Eigen::MatrixXcd inverse;
};
std::shared_ptr<const FlatBlock> flat_segment_operator(int level, const Discretization& disc,
                                                       BoundaryCondition bc, double eta);

/// Interpolation data shared by all segments of one level: first-kind
/// Chebyshev nodes (arclength offsets from the centre) and the averaged
/// Lagrange basis alpha_b = mean over the segment points of l_b.
struct ChebyshevLevel {
  std::vector<double> offsets;
  std::vector<double> alpha;
};
ChebyshevLevel level_chebyshev(int level, int p, double h, int m_c);

/// Curve geometry at a segment's Chebyshev nodes.
struct NodeGeometry {
  std::vector<double> offsets;
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
};
NodeGeometry node_geometry(const Segment& s, const ChebyshevLevel& cheb, const BoundaryCurve& curve);

/// e_ij = sum_{b,b'} alpha_i(b) h K(x_b, y_b') e^{-i k^i o_b} e^{-i k^j o_b'} alpha_j(b').
template <class Kernel>
cplx compute_e(const NodeGeometry& gi, const ChebyshevLevel& ci, const NodeGeometry& gj,
               const ChebyshevLevel& cj, const PhasePair& pp, double h, Kernel&& kernel) {
  const int mi = static_cast<int>(gi.points.size());
  const int mj = static_cast<int>(gj.points.size());
  std::vector<cplx> right(mj);
  for (int b = 0; b < mj; ++b)
    right[b] = cj.alpha[b] * std::exp(cplx(0.0, -pp.kj * gj.offsets[b]));
  cplx e = 0.0;
  for (int a = 0; a < mi; ++a) {
    cplx row = 0.0;
    for (int b = 0; b < mj; ++b)
      row += kernel(gi.points[a], gi.normals[a], gj.points[b], gj.normals[b]) * right[b];
    e += ci.alpha[a] * std::exp(cplx(0.0, -pp.ki * gi.offsets[a])) * row;
  }
  return h * e;
}

enum class DiagonalMode { flat, exact };

struct DirectionalOptions {
  int m_c = 10;
  DiagonalMode diagonal = DiagonalMode::flat;
  bool zero_e = false;  // drop all directional coefficients
};

struct EEntry {
  int i = 0;
  int j = 0;
  int row = 0;  // global index in the concatenated phase space
  int col = 0;
  cplx value;
};

class DirectionalApprox {
 public:
  DirectionalApprox(const CfieMatrix& m, const SegmentList& segs, const DirectionalOptions& opt = {});

  int size() const { return n_; }
  int phase_dim() const { return phase_dim_; }
  int segment_count() const { return segs_->size(); }
  const SegmentList& segments() const { return *segs_; }
  const DirectionalOptions& options() const { return opt_; }
  int offset(int i) const { return offsets_[i]; }
  int grid_size(int i) const { return PhaseGrid{segs_->segments[i].level, omega_}.size(); }

  /// Diagonal blocks are shared per level (flat) or per segment (exact).
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_of(int segment) const { return block_of_[segment]; }
  int block_level(int block) const { return block_level_[block]; }
  const FlatBlock& block(int b) const { return *blocks_[b]; }
  const Eigen::MatrixXcd& fourier(int level) const { return fourier_.at(level); }

  const std::vector<EEntry>& e_entries() const { return e_; }
  Eigen::SparseMatrix<cplx> e_matrix() const;

  Eigen::VectorXcd apply_B(const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd apply_Binv(const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd apply_U(const Eigen::VectorXcd& y) const;   // N_K -> n
  Eigen::VectorXcd apply_Ut(const Eigen::VectorXcd& v) const;  // n -> N_K
  Eigen::VectorXcd apply_E(const Eigen::VectorXcd& y) const;
  /// (B + U E U^t) v
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

  /// Dense U (n x N_K) for small instances and tests.
  Eigen::MatrixXcd dense_U() const;
  Eigen::MatrixXcd dense_B() const;

  /// Coordinate text dump "row col re im" of E.
  void write_e(std::ostream& out) const;

 private:
  const SegmentList* segs_;
  DirectionalOptions opt_;
  int n_ = 0;
  double omega_ = 0;
  int phase_dim_ = 0;
  std::vector<int> offsets_;
  std::vector<std::shared_ptr<const FlatBlock>> blocks_;
  std::vector<int> block_of_;
  std::vector<int> block_level_;
  std::map<int, Eigen::MatrixXcd> fourier_;
  std::vector<EEntry> e_;
};

}  // namespace dirprec
