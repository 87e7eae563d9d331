// Partition of the discretised boundary into almost-planar segments and
// short non-planar leaves by recursive bisection.
#pragma once

#include "dirprec/geometry.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace dirprec {

/// Contiguous point range produced by the bisection, before geometry is attached.
struct SegmentRange {
  int level = 0;  // count = 2^level p
  int start = 0;
  int count = 0;
  double max_curvature = 0;
  bool planar = true;
};

/// Splits 2^q initial ranges of 2^q p points each. A range at level l stops
/// when  2^l sqrt(c) <= 2^q  (almost-planar), otherwise when 2^l <= m_l
/// (non-planar leaf); otherwise it is halved. `curvature` holds the signed
/// curvature at every point.
std::vector<SegmentRange> partition_points(std::span<const double> curvature, int q, int p,
                                           int m_l);

struct Segment {
  int index = 0;
  int level = 0;
  int start = 0;
  int count = 0;
  double center_arclength = 0;  // (start + (count-1)/2) h
  Vec2 center;
  Vec2 tangent;
  double max_curvature = 0;
  bool planar = true;

  /// Arclength interval covered by the segment's quadrature cells.
  double begin_arclength(double h) const { return (start - 0.5) * h; }
  double end_arclength(double h) const { return (start + count - 0.5) * h; }
};

struct SegmentList {
  int q = 0;
  int p = 0;
  int m_l = 0;
  std::vector<Segment> segments;
  std::vector<int> point_segment;  // point index -> segment index

  int size() const { return static_cast<int>(segments.size()); }
  int non_planar_count() const;
  int min_level() const;
  int max_level() const;
};

/// Requires m_l in {2, 4} and 2^q >= m_l.
SegmentList build_segments(const Discretization& disc, int m_l = 4);

/// CSV with columns i,level,start,count,cx,cy,tx,ty,max_curvature,planar.
void write_segments_csv(const SegmentList& segs, std::ostream& out);

}  // namespace dirprec
