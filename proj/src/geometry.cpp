#include "dirprec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dirprec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPanelOrder = 10;

struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& panel_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    gauss_legendre(kPanelOrder, r.x, r.w);
    return r;
  }();
  return rule;
}

}  // namespace

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[order - 1 - i] = z;
    weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

ShapeId parse_shape(const std::string& name) {
  if (name == "circle") return ShapeId::circle;
  if (name == "ellipse") return ShapeId::ellipse;
  if (name == "kite" || name == "bean") return ShapeId::kite;
  throw std::invalid_argument("unknown shape '" + name + "'");
}

std::string to_string(ShapeId shape) {
  switch (shape) {
    case ShapeId::circle: return "circle";
    case ShapeId::ellipse: return "ellipse";
    case ShapeId::kite: return "kite";
  }
  return "?";
}

BoundaryCurve::BoundaryCurve(ShapeId shape, const ShapeParams& params, int table_panels)
    : shape_(shape), params_(params), panels_(table_panels) {
  switch (shape) {
    case ShapeId::circle:
      if (!(params.radius > 0)) throw std::invalid_argument("circle: radius must be positive");
      break;
    case ShapeId::ellipse:
      if (!(params.semi_x > 0) || !(params.semi_y > 0))
        throw std::invalid_argument("ellipse: semi-axes must be positive");
      break;
    case ShapeId::kite:
      if (!(params.kite_scale > 0)) throw std::invalid_argument("kite: scale must be positive");
      break;
  }
  if (panels_ < 16) throw std::invalid_argument("BoundaryCurve: too few table panels");
  table_.assign(panels_ + 1, 0.0);
  const double dt = kTwoPi / panels_;
  for (int k = 0; k < panels_; ++k) {
    table_[k + 1] = table_[k] + panel_integral(k * dt, (k + 1) * dt);
  }
  length_ = table_[panels_];
}

Vec2 BoundaryCurve::position_t(double t) const {
  switch (shape_) {
    case ShapeId::circle: return params_.radius * Vec2(std::cos(t), std::sin(t));
    case ShapeId::ellipse: return Vec2(params_.semi_x * std::cos(t), params_.semi_y * std::sin(t));
    case ShapeId::kite:
      return params_.kite_scale *
             Vec2(std::cos(t) + 0.65 * std::cos(2 * t) - 0.65, 1.5 * std::sin(t));
  }
  return Vec2::Zero();
}

Vec2 BoundaryCurve::velocity_t(double t) const {
  switch (shape_) {
    case ShapeId::circle: return params_.radius * Vec2(-std::sin(t), std::cos(t));
    case ShapeId::ellipse: return Vec2(-params_.semi_x * std::sin(t), params_.semi_y * std::cos(t));
    case ShapeId::kite:
      return params_.kite_scale * Vec2(-std::sin(t) - 1.3 * std::sin(2 * t), 1.5 * std::cos(t));
  }
  return Vec2::Zero();
}

Vec2 BoundaryCurve::acceleration_t(double t) const {
  switch (shape_) {
    case ShapeId::circle: return -params_.radius * Vec2(std::cos(t), std::sin(t));
    case ShapeId::ellipse: return Vec2(-params_.semi_x * std::cos(t), -params_.semi_y * std::sin(t));
    case ShapeId::kite:
      return params_.kite_scale * Vec2(-std::cos(t) - 2.6 * std::cos(2 * t), -1.5 * std::sin(t));
  }
  return Vec2::Zero();
}

double BoundaryCurve::panel_integral(double a, double b) const {
  const auto& rule = panel_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kPanelOrder; ++i) sum += rule.w[i] * speed_t(mid + half * rule.x[i]);
  return sum * half;
}

double BoundaryCurve::arclength_of(double t) const {
  const double dt = kTwoPi / panels_;
  int k = static_cast<int>(std::floor(t / dt));
  k = std::clamp(k, 0, panels_ - 1);
  const double t0 = k * dt;
  if (t == t0) return table_[k];
  return table_[k] + panel_integral(t0, t);
}

double BoundaryCurve::parameter_of(double s) const {
  s = std::fmod(s, length_);
  if (s < 0) s += length_;
  const auto it = std::upper_bound(table_.begin(), table_.end(), s);
  int k = static_cast<int>(it - table_.begin()) - 1;
  k = std::clamp(k, 0, panels_ - 1);
  const double dt = kTwoPi / panels_;
  const double t0 = k * dt;
  if (s == table_[k]) return t0;
  // Hermite initial guess on the panel, then Newton on the exact arclength.
  const double frac = (s - table_[k]) / (table_[k + 1] - table_[k]);
  double t = t0 + frac * dt;
  for (int it2 = 0; it2 < 8; ++it2) {
    const double r = arclength_of(t) - s;
    const double step = r / speed_t(t);
    t -= step;
    if (std::abs(step) <= 4e-16 * std::max(1.0, t)) break;
  }
  return t;
}

CurvePoint BoundaryCurve::at(double s) const {
  const double t = parameter_of(s);
  const Vec2 v = velocity_t(t);
  const Vec2 acc = acceleration_t(t);
  const double speed = v.norm();
  CurvePoint cp;
  cp.position = position_t(t);
  cp.tangent = v / speed;
  cp.normal = Vec2(cp.tangent.y(), -cp.tangent.x());
  cp.curvature = (v.x() * acc.y() - v.y() * acc.x()) / (speed * speed * speed);
  return cp;
}

Vec2 BoundaryCurve::interior_point() const {
  if (shape_ != ShapeId::kite) return Vec2::Zero();
  // Area centroid via Green's theorem, trapezoid rule in t (spectrally accurate).
  const int m = 4096;
  double area = 0, cx = 0, cy = 0;
  for (int k = 0; k < m; ++k) {
    const double t = kTwoPi * k / m;
    const Vec2 x = position_t(t);
    const Vec2 v = velocity_t(t);
    const double cross = x.x() * v.y() - x.y() * v.x();
    area += 0.5 * cross;
    cx += x.x() * cross / 3.0;
    cy += x.y() * cross / 3.0;
  }
  return Vec2(cx / area, cy / area);
}

double BoundaryCurve::diameter() const {
  const int m = 512;
  std::vector<Vec2> pts(m);
  for (int k = 0; k < m; ++k) pts[k] = position_t(kTwoPi * k / m);
  double d = 0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) d = std::max(d, (pts[a] - pts[b]).norm());
  return d;
}

BoundaryCurve build_curve(ShapeId shape, const ShapeParams& params) {
  return BoundaryCurve(shape, params);
}

double curvature_at(const BoundaryCurve& curve, double s) { return curve.at(s).curvature; }

Discretization discretize(const BoundaryCurve& curve, int q, int p) {
  if (q < 2) throw std::invalid_argument("discretize: q must be at least 2");
  if (p < 4) throw std::invalid_argument("discretize: p must be at least 4");
  if (q > 12) throw std::invalid_argument("discretize: q too large");
  Discretization d;
  d.q = q;
  d.p = p;
  const long waves = 1L << (2 * q);
  d.n = static_cast<int>(waves * p);
  d.length = curve.length();
  d.h = d.length / d.n;
  d.omega = kTwoPi * static_cast<double>(waves) / d.length;
  d.wavelength = d.length / static_cast<double>(waves);
  d.curve = &curve;
  d.arclength.resize(d.n);
  d.points.resize(d.n);
  d.tangents.resize(d.n);
  d.normals.resize(d.n);
  d.curvature.resize(d.n);
  for (int a = 0; a < d.n; ++a) {
    const double s = a * d.h;
    const CurvePoint cp = curve.at(s);
    d.arclength[a] = s;
    d.points[a] = cp.position;
    d.tangents[a] = cp.tangent;
    d.normals[a] = cp.normal;
    d.curvature[a] = cp.curvature;
  }
  return d;
}

}  // namespace dirprec
