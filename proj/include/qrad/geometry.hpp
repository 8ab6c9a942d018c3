#pragma once

#include <vector>

#include "qrad/types.hpp"

namespace qrad {

using Polygon = std::vector<Vec2>;

// Counterclockwise convex hull (Andrew's monotone chain), collinear points dropped.
Polygon convex_hull(std::vector<Vec2> pts);

// Minkowski sum of two counterclockwise convex polygons.
Polygon minkowski_sum(const Polygon& a, const Polygon& b);

// Regular polygon circumscribing the disk of the given radius.
Polygon circumscribed_disk(double radius, int sides = 8);

double polygon_area(const Polygon& p);

// Sutherland-Hodgman clip of `subject` against a counterclockwise convex `clip`.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

bool contains_convex(const Polygon& p, Vec2 x);

// x-range of a convex polygon along the horizontal line at height y; false if empty.
bool horizontal_span(const Polygon& p, double y, double& lo, double& hi);

}  // namespace qrad
