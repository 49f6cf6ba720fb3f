#include "slimetrail/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace slimetrail::geom {

int orientation(Point a, Point b, Point c) noexcept {
  const long double v = (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
                        (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
  return (v > 0) - (v < 0);
}

bool on_segment(Point p, Point a, Point b) noexcept {
  return orientation(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) noexcept {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  return on_segment(q1, p1, p2) || on_segment(q2, p1, p2) || on_segment(p1, q1, q2) ||
         on_segment(p2, q1, q2);
}

std::optional<Point> intersection_point(Point p1, Point p2, Point q1, Point q2) noexcept {
  const double rx = p2.x - p1.x, ry = p2.y - p1.y;
  const double sx = q2.x - q1.x, sy = q2.y - q1.y;
  const double denom = rx * sy - ry * sx;
  if (denom == 0.0) return std::nullopt;
  const double t = ((q1.x - p1.x) * sy - (q1.y - p1.y) * sx) / denom;
  const double u = ((q1.x - p1.x) * ry - (q1.y - p1.y) * rx) / denom;
  if (t < 0 || t > 1 || u < 0 || u > 1) return std::nullopt;
  return Point{p1.x + t * rx, p1.y + t * ry};
}

double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double point_segment_distance(Point p, Point a, Point b) noexcept {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return distance(p, Point{a.x + t * dx, a.y + t * dy});
}

}  // namespace slimetrail::geom
