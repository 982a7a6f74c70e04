#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace crowdsense::geo {

inline constexpr double kEarthRadius = 6371000.0;  // meters
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// WGS84 position in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const noexcept {
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
           lon >= -180.0 && lon <= 180.0;
  }
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Local metric frame: x meters east, y meters north of a projection origin.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
  friend PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.x + b.x, a.y + b.y}; }
  friend PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend PlanarPoint operator*(double s, PlanarPoint p) { return {s * p.x, s * p.y}; }
  friend PlanarPoint operator*(PlanarPoint p, double s) { return {s * p.x, s * p.y}; }
};

inline double dot(PlanarPoint a, PlanarPoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(PlanarPoint a, PlanarPoint b) { return a.x * b.y - a.y * b.x; }
inline double norm(PlanarPoint a) { return std::hypot(a.x, a.y); }
inline double distance(PlanarPoint a, PlanarPoint b) { return norm(b - a); }

/// Direction in radians, counterclockwise from due east, kept in [0, 2π).
class Heading {
 public:
  Heading() = default;
  explicit Heading(double radians) : theta_(normalize(radians)) {}

  static Heading from_degrees(double degrees) { return Heading(degrees * kPi / 180.0); }
  /// Heading of the vector from -> to. Undefined (returns 0) for coincident points.
  static Heading between(PlanarPoint from, PlanarPoint to) {
    return Heading(std::atan2(to.y - from.y, to.x - from.x));
  }

  double radians() const noexcept { return theta_; }
  double degrees() const noexcept { return theta_ * 180.0 / kPi; }
  PlanarPoint unit() const { return {std::cos(theta_), std::sin(theta_)}; }

  static double normalize(double radians) {
    double t = std::fmod(radians, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2π
    if (t >= kTwoPi) t = 0.0;
    return t;
  }

 private:
  double theta_ = 0.0;
};

/// Equirectangular projection around `origin`.
PlanarPoint project(GeoPoint p, GeoPoint origin);
/// Inverse of project() for the same origin.
GeoPoint unproject(PlanarPoint p, GeoPoint origin);

/// Distance from p to the closed segment ab; a == b degenerates to a point.
double point_to_segment_distance(PlanarPoint p, PlanarPoint a, PlanarPoint b);

/// Minimum distance from p over the polyline's segments. A single vertex
/// counts as a point; an empty polyline yields +inf.
double point_to_polyline_distance(PlanarPoint p, std::span<const PlanarPoint> polyline);

struct PolylineProjection {
  double distance = 0.0;  // to the closest point
  double offset = 0.0;    // arc length from the first vertex to the closest point
};
PolylineProjection project_onto_polyline(PlanarPoint p, std::span<const PlanarPoint> polyline);

double polyline_length(std::span<const PlanarPoint> polyline);

/// Minimal absolute difference on the circle, in [0, π].
double angular_difference(Heading a, Heading b);

/// Closed-polygon containment for a convex polygon given in either winding.
/// Zero-length edges are ignored so a trapezoid collapsed to a triangle works.
bool convex_polygon_contains(std::span<const PlanarPoint> polygon, PlanarPoint p,
                             double tolerance = 1e-9);

struct BoundingBox {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

  static BoundingBox of(std::span<const PlanarPoint> pts);
  bool contains(PlanarPoint p, double tolerance = 0.0) const {
    return p.x >= min_x - tolerance && p.x <= max_x + tolerance && p.y >= min_y - tolerance &&
           p.y <= max_y + tolerance;
  }
  BoundingBox expanded(double margin) const {
    return {min_x - margin, min_y - margin, max_x + margin, max_y + margin};
  }
  void extend(PlanarPoint p);
  void extend(const BoundingBox& other);
};

}  // namespace crowdsense::geo
