#include "dirprec/directional.hpp"

#include "dirprec/parallel.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace dirprec {

namespace {
constexpr double kPi = std::numbers::pi;

// Truncation of the infinite-line convolution for the flat hypersingular block.
constexpr int kLineTerms = 131072;
}  // namespace

int PhaseGrid::nearest(double k) const {
  const int half = 1 << level;
  const double u = k / spacing();
  const double f = std::floor(u);
  const double d = u - f;
  long idx;
  if (d > 0.5) {
    idx = static_cast<long>(f) + 1;
  } else if (d < 0.5) {
    idx = static_cast<long>(f);
  } else {
    idx = u > 0 ? static_cast<long>(f) : static_cast<long>(f) + 1;
  }
  idx = std::clamp<long>(idx, -half, half);
  return static_cast<int>(idx) + half;
}

PhasePair phase_pair(const Segment& si, const Segment& sj, double omega) {
  const Vec2 d = si.center - sj.center;
  const double len = d.norm();
  if (!(len > 0)) throw std::logic_error("phase_pair: coincident segment centres");
  const Vec2 a = d / len;
  const PhaseGrid gi{si.level, omega}, gj{sj.level, omega};
  PhasePair pp;
  pp.ki_exact = omega * a.dot(si.tangent);
  pp.kj_exact = -omega * a.dot(sj.tangent);
  pp.row = gi.nearest(pp.ki_exact);
  pp.col = gj.nearest(pp.kj_exact);
  pp.ki = gi.value(pp.row);
  pp.kj = gj.value(pp.col);
  return pp;
}

Eigen::MatrixXcd level_fourier_matrix(int level, int p, double h, double omega) {
  const int rows = (1 << level) * p;
  const PhaseGrid grid{level, omega};
  Eigen::MatrixXcd u(rows, grid.size());
  for (int c = 0; c < grid.size(); ++c) {
    const double k = grid.value(c);
    for (int j = 0; j < rows; ++j) u(j, c) = std::exp(cplx(0.0, k * (j - 0.5 * (rows - 1)) * h));
  }
  return u;
}

namespace {

Eigen::MatrixXcd build_flat_block(int level, const Discretization& disc, BoundaryCondition bc,
                                  double eta) {
  const int rows = (1 << level) * disc.p;
  const double h = disc.h;
  const double omega = disc.omega;
  const double lp = disc.length / (2.0 * kPi);
  const LogQuadrature lq = make_log_quadrature(disc.n);
  const cplx s0 = nystrom_single_layer_diagonal(h, omega, lp, lq.weight[0]);
  auto line_delta = [&](int m) { return m < disc.n / 2 ? lq.correction[m] : 0.0; };
  auto line_s = [&](int m) {
    return m == 0 ? s0 : nystrom_single_layer(h, omega, lp, m * h, line_delta(m));
  };

  std::vector<cplx> toeplitz(rows);
  if (bc == BoundaryCondition::dirichlet) {
    const cplx ieta(0.0, eta);
    for (int k = 0; k < rows; ++k) toeplitz[k] = -ieta * line_s(k);
    toeplitz[0] += 0.5;
  } else {
    // N = d/ds S d/ds + omega^2 S on the infinite line; the squared sinc
    // derivative has symbol w(0) = -pi^2/(3h^2), w(j) = -2(-1)^j/(jh)^2.
    const int span = kLineTerms + rows;
    std::vector<cplx> s(span + 1);
    for (int m = 0; m <= span; ++m) s[m] = line_s(m);
    auto w = [&](int j) {
      if (j == 0) return omega * omega - kPi * kPi / (3.0 * h * h);
      const double jh = j * h;
      return ((j & 1) ? 2.0 : -2.0) / (jh * jh);
    };
    for (int k = 0; k < rows; ++k) {
      cplx acc = 0.0;
      // Sum from the smallest terms up for a little extra accuracy.
      for (int m = kLineTerms; m >= 1; --m) acc += s[m] * (w(k - m) + w(k + m));
      acc += s[0] * w(k);
      toeplitz[k] = acc / cplx(0.0, eta);
    }
    toeplitz[0] += 0.5;
  }
  Eigen::MatrixXcd b(rows, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j) b(i, j) = toeplitz[std::abs(i - j)];
  return b;
}

using FlatKey = std::tuple<int, int, int, int, double, double, double>;

}  // namespace

std::shared_ptr<const FlatBlock> flat_segment_operator(int level, const Discretization& disc,
                                                       BoundaryCondition bc, double eta) {
  if (level < 0 || level > disc.q) throw std::invalid_argument("flat_segment_operator: bad level");
  static std::mutex mutex;
  static std::map<FlatKey, std::shared_ptr<const FlatBlock>> cache;
  const FlatKey key{level, static_cast<int>(bc), disc.n, disc.p, disc.h, disc.omega, eta};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto block = std::make_shared<FlatBlock>();
  block->b = build_flat_block(level, disc, bc, eta);
  block->inverse = block->b.partialPivLu().inverse();
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(block)).first->second;
}

ChebyshevLevel level_chebyshev(int level, int p, double h, int m_c) {
  if (m_c < 1) throw std::invalid_argument("level_chebyshev: m_c must be positive");
  const int count = (1 << level) * p;
  const double half = 0.5 * count * h;
  ChebyshevLevel c;
  c.offsets.resize(m_c);
  std::vector<double> bary(m_c);
  for (int b = 0; b < m_c; ++b) {
    const double theta = (2 * b + 1) * kPi / (2.0 * m_c);
    c.offsets[b] = half * std::cos(theta);
    bary[b] = ((b & 1) ? -1.0 : 1.0) * std::sin(theta);
  }
  c.alpha.assign(m_c, 0.0);
  std::vector<double> basis(m_c);
  for (int j = 0; j < count; ++j) {
    const double t = (j - 0.5 * (count - 1)) * h;
    int hit = -1;
    double denom = 0.0;
    for (int b = 0; b < m_c; ++b) {
      const double d = t - c.offsets[b];
      if (d == 0.0) {
        hit = b;
        break;
      }
      basis[b] = bary[b] / d;
      denom += basis[b];
    }
    if (hit >= 0) {
      c.alpha[hit] += 1.0;
      continue;
    }
    for (int b = 0; b < m_c; ++b) c.alpha[b] += basis[b] / denom;
  }
  for (double& a : c.alpha) a /= count;
  return c;
}

NodeGeometry node_geometry(const Segment& s, const ChebyshevLevel& cheb, const BoundaryCurve& curve) {
  NodeGeometry g;
  g.offsets = cheb.offsets;
  for (double o : cheb.offsets) {
    const CurvePoint cp = curve.at(s.center_arclength + o);
    g.points.push_back(cp.position);
    g.normals.push_back(cp.normal);
  }
  return g;
}

DirectionalApprox::DirectionalApprox(const CfieMatrix& m, const SegmentList& segs,
                                     const DirectionalOptions& opt)
    : segs_(&segs), opt_(opt), n_(m.size()), omega_(m.omega()) {
  const Discretization& disc = m.discretization();
  const int count = segs.size();
  if (count < 2) throw std::invalid_argument("DirectionalApprox: need at least two segments");
  offsets_.resize(count);
  for (int i = 0; i < count; ++i) {
    offsets_[i] = phase_dim_;
    phase_dim_ += grid_size(i);
  }
  for (const auto& s : segs.segments)
    if (!fourier_.count(s.level))
      fourier_[s.level] = level_fourier_matrix(s.level, disc.p, disc.h, omega_);

  block_of_.resize(count);
  if (opt_.diagonal == DiagonalMode::flat) {
    std::map<int, int> by_level;
    for (int i = 0; i < count; ++i) {
      const int level = segs.segments[i].level;
      auto it = by_level.find(level);
      if (it == by_level.end()) {
        it = by_level.emplace(level, block_count()).first;
        blocks_.push_back(flat_segment_operator(level, disc, m.bc(), m.eta()));
        block_level_.push_back(level);
      }
      block_of_[i] = it->second;
    }
  } else {
    for (int i = 0; i < count; ++i) {
      const Segment& s = segs.segments[i];
      auto block = std::make_shared<FlatBlock>();
      block->b = m.block(s.start, s.count, s.start, s.count);
      block->inverse = block->b.partialPivLu().inverse();
      block_of_[i] = block_count();
      blocks_.push_back(std::move(block));
      block_level_.push_back(s.level);
    }
  }

  if (opt_.zero_e) return;
  if (disc.curve == nullptr) throw std::invalid_argument("DirectionalApprox: discretization has no curve");
  std::map<int, ChebyshevLevel> cheb;
  for (const auto& s : segs.segments)
    if (!cheb.count(s.level)) cheb[s.level] = level_chebyshev(s.level, disc.p, disc.h, opt_.m_c);
  std::vector<NodeGeometry> nodes(count);
  for (int i = 0; i < count; ++i)
    nodes[i] = node_geometry(segs.segments[i], cheb.at(segs.segments[i].level), *disc.curve);

  const BoundaryCondition bc = m.bc();
  const double eta = m.eta();
  const double omega = omega_;
  auto kernel = [bc, omega, eta](const Vec2& x, const Vec2& nx, const Vec2& y, const Vec2& ny) {
    return cfie_kernel(bc, omega, eta, x, nx, y, ny);
  };
  e_.resize(static_cast<std::size_t>(count) * (count - 1));
  parallel_for(0, count, [&](int, int i) {
    const Segment& si = segs.segments[i];
    std::size_t slot = static_cast<std::size_t>(i) * (count - 1);
    for (int j = 0; j < count; ++j) {
      if (j == i) continue;
      const Segment& sj = segs.segments[j];
      const PhasePair pp = phase_pair(si, sj, omega);
      EEntry& e = e_[slot++];
      e.i = i;
      e.j = j;
      e.row = offsets_[i] + pp.row;
      e.col = offsets_[j] + pp.col;
      e.value = compute_e(nodes[i], cheb.at(si.level), nodes[j], cheb.at(sj.level), pp, disc.h, kernel);
    }
  });
}

Eigen::SparseMatrix<cplx> DirectionalApprox::e_matrix() const {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(e_.size());
  for (const auto& e : e_) t.emplace_back(e.row, e.col, e.value);
  Eigen::SparseMatrix<cplx> out(phase_dim_, phase_dim_);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Eigen::VectorXcd DirectionalApprox::apply_B(const Eigen::VectorXcd& v) const {
  if (v.size() != n_) throw std::invalid_argument("apply_B: dimension mismatch");
  Eigen::VectorXcd out(n_);
  for (const auto& s : segs_->segments)
    out.segment(s.start, s.count) = blocks_[block_of_[s.index]]->b * v.segment(s.start, s.count);
  return out;
}

Eigen::VectorXcd DirectionalApprox::apply_Binv(const Eigen::VectorXcd& v) const {
  if (v.size() != n_) throw std::invalid_argument("apply_Binv: dimension mismatch");
  Eigen::VectorXcd out(n_);
  for (const auto& s : segs_->segments)
    out.segment(s.start, s.count) = blocks_[block_of_[s.index]]->inverse * v.segment(s.start, s.count);
  return out;
}

Eigen::VectorXcd DirectionalApprox::apply_U(const Eigen::VectorXcd& y) const {
  if (y.size() != phase_dim_) throw std::invalid_argument("apply_U: dimension mismatch");
  Eigen::VectorXcd out(n_);
  for (const auto& s : segs_->segments) {
    const auto& u = fourier_.at(s.level);
    out.segment(s.start, s.count) = u * y.segment(offsets_[s.index], u.cols());
  }
  return out;
}

Eigen::VectorXcd DirectionalApprox::apply_Ut(const Eigen::VectorXcd& v) const {
  if (v.size() != n_) throw std::invalid_argument("apply_Ut: dimension mismatch");
  Eigen::VectorXcd out(phase_dim_);
  for (const auto& s : segs_->segments) {
    const auto& u = fourier_.at(s.level);
    out.segment(offsets_[s.index], u.cols()) = u.transpose() * v.segment(s.start, s.count);
  }
  return out;
}

Eigen::VectorXcd DirectionalApprox::apply_E(const Eigen::VectorXcd& y) const {
  if (y.size() != phase_dim_) throw std::invalid_argument("apply_E: dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(phase_dim_);
  for (const auto& e : e_) out[e.row] += e.value * y[e.col];
  return out;
}

Eigen::VectorXcd DirectionalApprox::apply(const Eigen::VectorXcd& v) const {
  return apply_B(v) + apply_U(apply_E(apply_Ut(v)));
}

Eigen::MatrixXcd DirectionalApprox::dense_U() const {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n_, phase_dim_);
  for (const auto& s : segs_->segments) {
    const auto& f = fourier_.at(s.level);
    u.block(s.start, offsets_[s.index], f.rows(), f.cols()) = f;
  }
  return u;
}

Eigen::MatrixXcd DirectionalApprox::dense_B() const {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n_, n_);
  for (const auto& s : segs_->segments)
    b.block(s.start, s.start, s.count, s.count) = blocks_[block_of_[s.index]]->b;
  return b;
}

void DirectionalApprox::write_e(std::ostream& out) const {
  out.precision(17);
  for (const auto& e : e_)
    out << e.row << ' ' << e.col << ' ' << e.value.real() << ' ' << e.value.imag() << '\n';
}

}  // namespace dirprec
