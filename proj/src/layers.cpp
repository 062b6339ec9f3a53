#include "rvg/layers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rvg/triangulation.hpp"

namespace rvg {

AngleInterval AngleInterval::slice(int i, int n) {
  const double w = kTwoPi / n;
  return {i * w, (i + 1) * w};
}

bool AngleInterval::contains(double theta, double tol) const {
  const double t = wrapAngle(theta);
  for (double c : {t, t + kTwoPi, t - kTwoPi}) {
    if (c >= lb - tol && c <= ub + tol) return true;
  }
  return false;
}

double wrapAngle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

double circularDistance(double a, double b) {
  const double d = std::fabs(wrapAngle(a) - wrapAngle(b));
  return std::min(d, kTwoPi - d);
}

Polygon sweptBoundingPolygon(const Polygon& robot, const AngleInterval& interval) {
  const double width = std::max(0.0, interval.width());
  const int pieces = std::max(1, static_cast<int>(std::ceil(width / (kPi / 4) - 1e-12)));
  const double step = width / pieces;
  std::vector<Point2> pts;
  for (const Point2& v : robot.vertices()) {
    const double r = norm(v);
    const double phi = std::atan2(v.y, v.x);
    for (int k = 0; k <= pieces; ++k) pts.push_back(rotated(v, interval.lb + k * step));
    if (step <= 0.0 || r == 0.0) continue;
    const double apex = r / std::cos(0.5 * step);
    for (int k = 0; k < pieces; ++k) {
      const double a = phi + interval.lb + (k + 0.5) * step;
      pts.push_back({apex * std::cos(a), apex * std::sin(a)});
    }
  }
  return Polygon(convexHull(std::move(pts)));
}

PolygonSet growObstacles(const Polygon& bound, const Polygon& workspace,
                         const std::vector<Polygon>& obstacles) {
  const Polygon nb = invert(bound);
  std::vector<Polygon> pieces;
  auto addSum = [&](const Polygon& convexPiece) {
    pieces.push_back(minkowskiSumConvex(convexPiece, nb));
  };
  for (const Polygon& o : obstacles) {
    if (isConvex(o)) {
      addSum(o);
    } else {
      for (const Polygon& t : triangulatePolygon(o)) addSum(t);
    }
  }
  double reach = 0.0;
  for (const Point2& p : bound.vertices()) reach = std::max(reach, norm(p));
  const BBox b = bbox(workspace.vertices());
  const double m = reach + 1.0;
  const std::vector<Point2> frame{{b.minx - m, b.miny - m}, {b.maxx + m, b.miny - m},
                                  {b.maxx + m, b.maxy + m}, {b.minx - m, b.maxy + m}};
  const Polygon hole = Polygon::hole(workspace.vertices());
  const Triangulation ring = Triangulation::fromRings({frame, hole.vertices()});
  for (const auto& tr : ring.tris()) {
    if (!tr.inside) continue;
    const auto& P = ring.points();
    addSum(Polygon::trusted({P[tr.v[0]], P[tr.v[1]], P[tr.v[2]]}));
  }
  return unionMerge(pieces);
}

int Layer::vertexIndexAt(Point2 p) const {
  const int v = free.vertexAt(p);
  if (v < 0 || v >= static_cast<int>(nativeOfTri.size())) return -1;
  return nativeOfTri[v];
}

Layer buildLayer(const Polygon& robot, const AngleInterval& interval, const Polygon& workspace,
                 const std::vector<Polygon>& obstacles) {
  Layer layer;
  layer.interval = interval;
  const Polygon bound = sweptBoundingPolygon(robot, interval);
  layer.grown = growObstacles(bound, workspace, obstacles);
  const BBox b = bbox(workspace.vertices());
  double reach = 0.0;
  for (const Point2& p : bound.vertices()) reach = std::max(reach, norm(p));
  const double m = reach + 1.0;
  const Polygon frame({{b.minx - m, b.miny - m}, {b.maxx + m, b.miny - m},
                       {b.maxx + m, b.maxy + m}, {b.minx - m, b.maxy + m}});
  PolygonSet free = difference(frame, layer.grown);
  if (free.empty()) return layer;
  layer.free = FreeSpaceTriangulation::fromFreeSpace(std::move(free));

  const auto& reflex = layer.free.reflexVertices();
  layer.nativeOfTri.assign(static_cast<std::size_t>(layer.free.tri().realPointCount()), -1);
  for (int id : reflex) {
    layer.nativeOfTri[id] = static_cast<int>(layer.vertices.size());
    layer.vertices.push_back(layer.free.point(id));
    layer.triVertex.push_back(id);
  }
  layer.cache.reserve(layer.vertices.size());
  for (const Point2& v : layer.vertices) layer.cache.push_back(visibilityQuery(v, layer.free));
  for (std::size_t i = 0; i < layer.vertices.size(); ++i) {
    for (int w : layer.cache[i].visible()) {
      const int j = layer.nativeOfTri[w];
      if (j <= static_cast<int>(i)) continue;
      if (isBitangent(layer.vertices[i], layer.vertices[j], layer.free))
        layer.edges.push_back({static_cast<int>(i), j});
    }
  }
  std::sort(layer.edges.begin(), layer.edges.end());
  return layer;
}

std::vector<Layer> buildLayers(const Polygon& robot, int n, const Polygon& workspace,
                               const std::vector<Polygon>& obstacles, int threads) {
  if (n < 2) throw std::invalid_argument("resolution n must be at least 2");
  if (threads <= 0) {
    const char* env = std::getenv("RVG_THREADS");
    threads = env ? std::atoi(env) : 0;
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min(threads, n);
  std::vector<Layer> layers(static_cast<std::size_t>(n));
  std::atomic<int> nextIndex{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto worker = [&] {
    for (int i = nextIndex++; i < n; i = nextIndex++) {
      try {
        layers[i] = buildLayer(robot, AngleInterval::slice(i, n), workspace, obstacles);
        layers[i].index = i;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failureMutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return layers;
}

}  // namespace rvg
