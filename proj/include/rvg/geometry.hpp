#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rvg/predicates.hpp"

namespace rvg {

inline constexpr double kGeomEps = 1e-9;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
  friend bool operator<(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 rotated(Point2 p, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

Point2 makePoint(double x, double y);  // throws on non-finite input

double signedArea(std::span<const Point2> ring);

// Simple polygon. Outer boundaries are counterclockwise, holes clockwise.
class Polygon {
 public:
  Polygon() = default;
  // Normalizes (drops near-duplicate and collinear vertices) and orients counterclockwise.
  explicit Polygon(std::vector<Point2> pts);
  static Polygon hole(std::vector<Point2> pts);
  // No normalization; caller guarantees the invariants.
  static Polygon trusted(std::vector<Point2> pts);

  const std::vector<Point2>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  const Point2& operator[](std::size_t i) const { return v_[i]; }
  const Point2& at(std::size_t i) const { return v_[i % v_.size()]; }
  const Point2& prev(std::size_t i) const { return v_[(i + v_.size() - 1) % v_.size()]; }
  const Point2& next(std::size_t i) const { return v_[(i + 1) % v_.size()]; }
  double signedArea() const { return rvg::signedArea(v_); }
  double area() const { return std::fabs(signedArea()); }
  bool isCcw() const { return signedArea() > 0.0; }

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.v_ == b.v_; }

 private:
  std::vector<Point2> v_;
};

struct Region {
  Polygon outer;
  std::vector<Polygon> holes;
  double area() const;
};

struct PolygonSet {
  std::vector<Region> regions;
  double area() const;
  bool empty() const { return regions.empty(); }
  std::size_t vertexCount() const;
};

enum class Containment { Inside, OnBoundary, Outside };

struct BBox {
  double minx = 0, miny = 0, maxx = 0, maxy = 0;
};
BBox bbox(std::span<const Point2> pts);

// Drops consecutive points closer than eps and vertices within eps of the chord of their neighbours.
std::vector<Point2> normalizeRing(std::vector<Point2> pts, double eps = kGeomEps);

// Interior angle at i exceeds pi with respect to the region the ring bounds (interior on the left).
bool isReflex(const Polygon& poly, std::size_t i);
bool isConvex(const Polygon& poly);
bool isSimple(const Polygon& poly);

std::vector<Point2> convexHull(std::vector<Point2> pts);

Polygon translate(const Polygon& p, Point2 d);
Polygon rotate(const Polygon& p, double theta);
Point2 centroid(const Polygon& p);
Polygon centered(const Polygon& p);
Polygon invert(const Polygon& p);

Polygon minkowskiSumConvex(const Polygon& a, const Polygon& b);
// Handles degenerate convex point sets (a single point or a segment) on either side.
std::vector<Point2> minkowskiSumConvexPoints(std::span<const Point2> a, std::span<const Point2> b);
PolygonSet minkowskiSumGeneral(const Polygon& a, const Polygon& b);

PolygonSet unionMerge(const std::vector<Polygon>& polys);
PolygonSet difference(const Polygon& a, const PolygonSet& b);
PolygonSet intersection(const PolygonSet& a, const PolygonSet& b);
PolygonSet toSet(const Polygon& p);

Containment containsPoint(std::span<const Point2> ring, Point2 p);
Containment containsPoint(const Polygon& poly, Point2 p);
Containment containsPoint(const Region& r, Point2 p);
Containment containsPoint(const PolygonSet& s, Point2 p);

double distancePointSegment(Point2 p, Point2 a, Point2 b);
bool onSegment(Point2 p, Point2 a, Point2 b);  // exact
bool segmentsProperlyCross(Point2 a, Point2 b, Point2 c, Point2 d);  // exact, interiors only

// Interiors overlap by more than tol.
bool polygonsIntersect(const Polygon& a, const Polygon& b, double tol = kGeomEps);
// a lies inside the closed region of container up to tol.
bool polygonInside(const Polygon& a, const Polygon& container, double tol = kGeomEps);

// Triangulation of a simple polygon into counterclockwise triangles.
std::vector<Polygon> triangulatePolygon(const Polygon& p);

}  // namespace rvg
