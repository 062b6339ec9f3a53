#pragma once

#include <utility>
#include <vector>

#include "rvg/geometry.hpp"
#include "rvg/visibility.hpp"

namespace rvg {

struct AngleInterval {
  double lb = 0.0;
  double ub = 0.0;

  static AngleInterval slice(int i, int n);
  double width() const { return ub - lb; }
  double mean() const { return 0.5 * (lb + ub); }
  // Closed membership modulo 2*pi.
  bool contains(double theta, double tol = 1e-12) const;
};

double wrapAngle(double theta);                   // into [0, 2*pi)
double circularDistance(double a, double b);      // in [0, pi]

// Convex overestimate of the region swept by robot while rotating about the origin over the interval.
Polygon sweptBoundingPolygon(const Polygon& robot, const AngleInterval& interval);

struct Layer {
  int index = 0;
  AngleInterval interval;
  PolygonSet grown;
  FreeSpaceTriangulation free;
  std::vector<Point2> vertices;          // reflex vertices of the free space
  std::vector<int> triVertex;            // triangulation id of each vertex
  std::vector<std::pair<int, int>> edges;  // bitangent, mutually visible pairs (i < j)
  std::vector<VisibilityRegion> cache;   // one region per vertex
  std::vector<int> nativeOfTri;          // triangulation id -> vertex index, or -1

  int vertexIndexAt(Point2 p) const;
};

// Grown obstacles of one slice, including the eroded workspace boundary.
PolygonSet growObstacles(const Polygon& bound, const Polygon& workspace, const std::vector<Polygon>& obstacles);

Layer buildLayer(const Polygon& robot, const AngleInterval& interval, const Polygon& workspace,
                 const std::vector<Polygon>& obstacles);

// Builds all n slices; threads <= 0 reads RVG_THREADS and falls back to the hardware count.
std::vector<Layer> buildLayers(const Polygon& robot, int n, const Polygon& workspace,
                               const std::vector<Polygon>& obstacles, int threads = 0);

}  // namespace rvg
