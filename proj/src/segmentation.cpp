#include "dirprec/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dirprec {

namespace {

void split(std::span<const double> curvature, int q, int p, int m_l, int level, int start,
           std::vector<SegmentRange>& out) {
  const int count = (1 << level) * p;
  double cmax = 0.0;
  for (int a = start; a < start + count; ++a) cmax = std::max(cmax, std::abs(curvature[a]));
  // 2^l lambda <= 2^q lambda / sqrt(c)  <=>  c <= 4^(q-l)
  const double bound = std::ldexp(1.0, 2 * (q - level));
  if (cmax <= bound) {
    out.push_back({level, start, count, cmax, true});
    return;
  }
  if ((1 << level) <= m_l) {
    out.push_back({level, start, count, cmax, false});
    return;
  }
  split(curvature, q, p, m_l, level - 1, start, out);
  split(curvature, q, p, m_l, level - 1, start + count / 2, out);
}

}  // namespace

std::vector<SegmentRange> partition_points(std::span<const double> curvature, int q, int p,
                                           int m_l) {
  if (m_l != 2 && m_l != 4) throw std::invalid_argument("partition_points: m_l must be 2 or 4");
  if ((1 << q) < m_l) throw std::invalid_argument("partition_points: q too small for m_l");
  const int seg_points = (1 << q) * p;
  if (static_cast<long>(curvature.size()) != static_cast<long>(seg_points) << q)
    throw std::invalid_argument("partition_points: expected 4^q p curvature samples");
  std::vector<SegmentRange> out;
  for (int i = 0; i < (1 << q); ++i) split(curvature, q, p, m_l, q, i * seg_points, out);
  return out;
}

int SegmentList::non_planar_count() const {
  return static_cast<int>(std::count_if(segments.begin(), segments.end(),
                                        [](const Segment& s) { return !s.planar; }));
}

int SegmentList::min_level() const {
  int l = q;
  for (const auto& s : segments) l = std::min(l, s.level);
  return l;
}

int SegmentList::max_level() const {
  int l = 0;
  for (const auto& s : segments) l = std::max(l, s.level);
  return l;
}

SegmentList build_segments(const Discretization& disc, int m_l) {
  if (disc.curve == nullptr) throw std::invalid_argument("build_segments: discretization has no curve");
  SegmentList list;
  list.q = disc.q;
  list.p = disc.p;
  list.m_l = m_l;
  const auto ranges = partition_points(disc.curvature, disc.q, disc.p, m_l);
  list.point_segment.assign(disc.n, -1);
  for (const auto& r : ranges) {
    Segment s;
    s.index = list.size();
    s.level = r.level;
    s.start = r.start;
    s.count = r.count;
    s.max_curvature = r.max_curvature;
    s.planar = r.planar;
    s.center_arclength = (r.start + 0.5 * (r.count - 1)) * disc.h;
    const CurvePoint cp = disc.curve->at(s.center_arclength);
    s.center = cp.position;
    s.tangent = cp.tangent;
    for (int a = r.start; a < r.start + r.count; ++a) list.point_segment[a] = s.index;
    list.segments.push_back(s);
  }
  return list;
}

void write_segments_csv(const SegmentList& segs, std::ostream& out) {
  out << "i,level,start,count,cx,cy,tx,ty,max_curvature,planar\n";
  out.precision(17);
  for (const auto& s : segs.segments) {
    out << s.index << ',' << s.level << ',' << s.start << ',' << s.count << ',' << s.center.x()
        << ',' << s.center.y() << ',' << s.tangent.x() << ',' << s.tangent.y() << ','
        << s.max_curvature << ',' << (s.planar ? 1 : 0) << '\n';
  }
}

}  // namespace dirprec
