#pragma once

#include <random>
#include <vector>

#include "rvg/geometry.hpp"

namespace rvg::testing {

inline Polygon box(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

inline Polygon lShape() { return Polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}); }

struct RandomMap {
  Polygon workspace;
  std::vector<Polygon> obstacles;
  PolygonSet free;
};

// Convex obstacles (rotated boxes and triangles) scattered in a size x size square.
inline RandomMap randomMap(std::uint64_t seed, int count = 6, double size = 10.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomMap m{box(0, 0, size, size), {}, {}};
  for (int k = 0; k < count; ++k) {
    const Point2 c{size * (0.15 + 0.7 * u(rng)), size * (0.15 + 0.7 * u(rng))};
    const double rot = kTwoPi * u(rng);
    std::vector<Point2> pts;
    if (k % 2 == 0) {
      const double w = size * (0.03 + 0.08 * u(rng)), h = size * (0.03 + 0.08 * u(rng));
      pts = {{-w, -h}, {w, -h}, {w, h}, {-w, h}};
    } else {
      for (int i = 0; i < 3; ++i) {
        const double a = kTwoPi * (i + 0.3 * u(rng)) / 3.0;
        const double r = size * (0.04 + 0.08 * u(rng));
        pts.push_back({r * std::cos(a), r * std::sin(a)});
      }
    }
    for (Point2& p : pts) p = c + rotated(p, rot);
    m.obstacles.push_back(Polygon(pts));
  }
  m.free = difference(m.workspace, unionMerge(m.obstacles));
  return m;
}

inline double boundaryDistance(const PolygonSet& s, Point2 p) {
  double best = 1e300;
  for (const Region& r : s.regions) {
    std::vector<const Polygon*> rings{&r.outer};
    for (const Polygon& h : r.holes) rings.push_back(&h);
    for (const Polygon* ring : rings)
      for (std::size_t i = 0; i < ring->size(); ++i)
        best = std::min(best, distancePointSegment(p, (*ring)[i], ring->next(i)));
  }
  return best;
}

inline Polygon placed(const Polygon& robot, double x, double y, double theta) {
  std::vector<Point2> pts;
  for (const Point2& v : robot.vertices()) pts.push_back(rotated(v, theta) + Point2{x, y});
  return Polygon::trusted(std::move(pts));
}

}  // namespace rvg::testing
