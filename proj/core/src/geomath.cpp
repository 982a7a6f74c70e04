#include "crowdsense/geomath.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace crowdsense::geo {

namespace {
constexpr double kDegToRad = kPi / 180.0;

PlanarPoint closest_on_segment(PlanarPoint p, PlanarPoint a, PlanarPoint b, double& t) {
  const PlanarPoint ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) {
    t = 0.0;
    return a;
  }
  t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + t * ab;
}
}  // namespace

PlanarPoint project(GeoPoint p, GeoPoint origin) {
  const double scale = kEarthRadius * kDegToRad;
  return {(p.lon - origin.lon) * std::cos(origin.lat * kDegToRad) * scale,
          (p.lat - origin.lat) * scale};
}

GeoPoint unproject(PlanarPoint p, GeoPoint origin) {
  const double scale = kEarthRadius * kDegToRad;
  return {origin.lat + p.y / scale,
          origin.lon + p.x / (std::cos(origin.lat * kDegToRad) * scale)};
}

double point_to_segment_distance(PlanarPoint p, PlanarPoint a, PlanarPoint b) {
  // fixed endpoint order makes the result bit-identical under a <-> b
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  double t = 0.0;
  return distance(p, closest_on_segment(p, a, b, t));
}

double point_to_polyline_distance(PlanarPoint p, std::span<const PlanarPoint> polyline) {
  if (polyline.empty()) return std::numeric_limits<double>::infinity();
  if (polyline.size() == 1) return distance(p, polyline.front());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    best = std::min(best, point_to_segment_distance(p, polyline[i - 1], polyline[i]));
  }
  return best;
}

PolylineProjection project_onto_polyline(PlanarPoint p, std::span<const PlanarPoint> polyline) {
  PolylineProjection best{std::numeric_limits<double>::infinity(), 0.0};
  if (polyline.empty()) return best;
  if (polyline.size() == 1) return {distance(p, polyline.front()), 0.0};
  double walked = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    double t = 0.0;
    const PlanarPoint c = closest_on_segment(p, polyline[i - 1], polyline[i], t);
    const double d = distance(p, c);
    const double seg_len = distance(polyline[i - 1], polyline[i]);
    if (d < best.distance) best = {d, walked + t * seg_len};
    walked += seg_len;
  }
  return best;
}

double polyline_length(std::span<const PlanarPoint> polyline) {
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) total += distance(polyline[i - 1], polyline[i]);
  return total;
}

double angular_difference(Heading a, Heading b) {
  const double d = std::abs(a.radians() - b.radians());
  return d > kPi ? kTwoPi - d : d;
}

bool convex_polygon_contains(std::span<const PlanarPoint> polygon, PlanarPoint p,
                             double tolerance) {
  if (polygon.size() < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const PlanarPoint a = polygon[i];
    const PlanarPoint b = polygon[(i + 1) % polygon.size()];
    const PlanarPoint edge = b - a;
    const double len = norm(edge);
    if (len == 0.0) continue;
    // signed distance of p from the edge's supporting line
    const double side = cross(edge, p - a) / len;
    if (std::abs(side) <= tolerance) continue;
    const int s = side > 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  return true;
}

BoundingBox BoundingBox::of(std::span<const PlanarPoint> pts) {
  BoundingBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) box.extend(p);
  return box;
}

void BoundingBox::extend(PlanarPoint p) {
  min_x = std::min(min_x, p.x);
  min_y = std::min(min_y, p.y);
  max_x = std::max(max_x, p.x);
  max_y = std::max(max_y, p.y);
}

void BoundingBox::extend(const BoundingBox& other) {
  min_x = std::min(min_x, other.min_x);
  min_y = std::min(min_y, other.min_y);
  max_x = std::max(max_x, other.max_x);
  max_y = std::max(max_y, other.max_y);
}

}  // namespace crowdsense::geo
