#pragma once

namespace rvg {

struct Point2;

enum class Orientation { Right = -1, Collinear = 0, Left = 1 };

// Sign of the signed area of (a, b, c). Exact for all finite inputs.
int orient2d(const Point2& a, const Point2& b, const Point2& c);

Orientation orientation(const Point2& a, const Point2& b, const Point2& c);

// Positive when d lies strictly inside the circle through the CCW triangle (a, b, c).
int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

namespace detail {
// Expansion-arithmetic path of orient2d without the floating-point filter.
int exactOrientSign(double ax, double ay, double bx, double by, double cx, double cy);
}  // namespace detail

}  // namespace rvg
