// Smooth closed scatterer boundaries, their arclength parametrisation and
// equispaced-in-arclength discretisations.
#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace dirprec {

using Vec2 = Eigen::Vector2d;

enum class ShapeId { circle, ellipse, kite };

ShapeId parse_shape(const std::string& name);
std::string to_string(ShapeId shape);

/// Shape parameters. Only the fields relevant to the chosen shape are read.
struct ShapeParams {
  double radius = 1.0;     // circle
  double semi_x = 1.0;     // ellipse
  double semi_y = 0.5;     // ellipse
  double kite_scale = 1.0; // kite: scale * (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
};

/// Point data on the curve at a given arclength.
struct CurvePoint {
  Vec2 position;
  Vec2 tangent;  // unit, direction of increasing arclength
  Vec2 normal;   // unit, outward
  double curvature;  // signed, positive where the boundary is convex
};

/// Counter-clockwise C-infinity closed curve with a numerically exact
/// arclength map. Immutable after construction.
class BoundaryCurve {
 public:
  BoundaryCurve(ShapeId shape, const ShapeParams& params, int table_panels = 4096);

  ShapeId shape() const { return shape_; }
  const ShapeParams& params() const { return params_; }
  double length() const { return length_; }

  /// Parameter t in [0, 2pi) -> position and its first two derivatives.
  Vec2 position_t(double t) const;
  Vec2 velocity_t(double t) const;
  Vec2 acceleration_t(double t) const;

  /// Arclength from t = 0 to t, for t in [0, 2pi].
  double arclength_of(double t) const;
  /// Inverse of arclength_of; s is reduced modulo the length first.
  double parameter_of(double s) const;

  /// Geometry at arclength s (taken modulo the length).
  CurvePoint at(double s) const;

  /// A point strictly inside the curve (centre, or area centroid for the kite).
  Vec2 interior_point() const;
  /// Largest distance between two boundary points (sampled).
  double diameter() const;

 private:
  double speed_t(double t) const { return velocity_t(t).norm(); }
  double panel_integral(double a, double b) const;

  ShapeId shape_;
  ShapeParams params_;
  int panels_;
  std::vector<double> table_;  // arclength at t_k = 2 pi k / panels_
  double length_;
};

BoundaryCurve build_curve(ShapeId shape, const ShapeParams& params = {});

/// Signed curvature at arclength s.
double curvature_at(const BoundaryCurve& curve, double s);

/// n = 4^q p points equispaced in arclength, with the frequency chosen so the
/// boundary is exactly 4^q wavelengths long.
struct Discretization {
  int q = 0;
  int p = 0;
  int n = 0;
  double length = 0;      // L
  double h = 0;           // L / n
  double omega = 0;       // 2 pi 4^q / L
  double wavelength = 0;  // 2 pi / omega = L / 4^q
  std::vector<double> arclength;  // s_a = a h
  std::vector<Vec2> points;
  std::vector<Vec2> tangents;
  std::vector<Vec2> normals;
  std::vector<double> curvature;
  const BoundaryCurve* curve = nullptr;  // non-owning; must outlive this object
};

Discretization discretize(const BoundaryCurve& curve, int q, int p);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace dirprec
