// Small exact-enough planar predicates on double coordinates. Layout points
// are kept well separated, so no epsilon is used in the orientation test.

#pragma once

#include <optional>

#include "slimetrail/game.hpp"

namespace slimetrail::geom {

// +1 counter-clockwise, -1 clockwise, 0 collinear.
int orientation(Point a, Point b, Point c) noexcept;

// Closed-segment test: touching endpoints and collinear overlap count.
bool segments_intersect(Point p1, Point p2, Point q1, Point q2) noexcept;

// Crossing point of two segments that intersect in exactly one point.
std::optional<Point> intersection_point(Point p1, Point p2, Point q1, Point q2) noexcept;

bool on_segment(Point p, Point a, Point b) noexcept;

double distance(Point a, Point b) noexcept;
double point_segment_distance(Point p, Point a, Point b) noexcept;

}  // namespace slimetrail::geom
