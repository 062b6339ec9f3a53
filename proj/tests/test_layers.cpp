#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rvg/layers.hpp"
#include "rvg/oracle.hpp"
#include "support.hpp"

using namespace rvg;
using namespace rvg::testing;

namespace {

Polygon unitSquareRobot() { return box(-0.5, -0.5, 0.5, 0.5); }

Polygon poseHull(const Polygon& robot, const AngleInterval& in) {
  std::vector<Point2> pts;
  for (const Point2& v : robot.vertices()) {
    pts.push_back(rotated(v, in.lb));
    pts.push_back(rotated(v, in.ub));
  }
  return Polygon(convexHull(pts));
}

bool insideWithTol(const Polygon& poly, Point2 p, double tol) {
  if (containsPoint(poly, p) != Containment::Outside) return true;
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (distancePointSegment(p, poly[i], poly.next(i)) <= tol) return true;
  return false;
}

}  // namespace

TEST(AngleInterval, SlicesTileTheCircle) {
  for (int n : {2, 7, 36, 360}) {
    for (int i = 0; i < n; ++i) {
      const auto a = AngleInterval::slice(i, n);
      EXPECT_NEAR(a.width(), kTwoPi / n, 1e-15);
      if (i + 1 < n) EXPECT_EQ(a.ub, AngleInterval::slice(i + 1, n).lb);
      EXPECT_TRUE(a.contains(a.lb));
      EXPECT_TRUE(a.contains(a.ub));
      EXPECT_TRUE(a.contains(a.mean() + kTwoPi));
    }
    EXPECT_NEAR(AngleInterval::slice(n - 1, n).ub, kTwoPi, 1e-12);
    EXPECT_TRUE(AngleInterval::slice(n - 1, n).contains(0.0));
    EXPECT_TRUE(AngleInterval::slice(0, n).contains(kTwoPi));
    EXPECT_FALSE(AngleInterval::slice(0, n).contains(kPi + 0.01));
  }
  EXPECT_NEAR(wrapAngle(-0.5), kTwoPi - 0.5, 1e-15);
  EXPECT_NEAR(circularDistance(0.1, kTwoPi - 0.1), 0.2, 1e-12);
  EXPECT_NEAR(circularDistance(0.0, kPi), kPi, 1e-12);
}

TEST(SweptBound, ZeroWidthIsTheRobot) {
  const Polygon robot = box(0, 0, 1, 1);
  const Polygon b = sweptBoundingPolygon(robot, {0.0, 0.0});
  EXPECT_NEAR(b.area(), 1.0, 1e-12);
  EXPECT_EQ(b.size(), 4u);
}

TEST(SweptBound, ThinSegmentQuarterTurnContainsArc) {
  const Polygon robot = box(0, -1e-3, 1, 1e-3);
  const AngleInterval in{0.0, kPi / 2};
  const Polygon b = sweptBoundingPolygon(robot, in);
  for (int k = 0; k <= 1000; ++k) {
    const double t = in.lb + in.width() * k / 1000.0;
    for (const Point2& v : robot.vertices()) EXPECT_TRUE(insideWithTol(b, rotated(v, t), 1e-12));
  }
  EXPECT_GE(b.area(), kPi / 4 - 1e-9);
}

TEST(SweptBound, ContainsSampledPosesOfRandomRobots) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point2> pts;
    const int k = 3 + trial % 5;
    for (int i = 0; i < k; ++i) {
      const double a = kTwoPi * (i + 0.8 * u(rng)) / k;
      const double r = 0.3 + 1.5 * u(rng);
      pts.push_back(Point2{0.4 * (u(rng) - 0.5), 0.4 * (u(rng) - 0.5)} + Point2{r * std::cos(a), r * std::sin(a)});
    }
    const Polygon robot(pts);
    const int n = std::vector<int>{2, 4, 8, 36, 360}[trial % 5];
    const AngleInterval in = AngleInterval::slice(trial % n, n);
    const Polygon b = sweptBoundingPolygon(robot, in);
    EXPECT_TRUE(isConvex(b));
    for (int s = 0; s < 1000; ++s) {
      const double t = in.lb + in.width() * u(rng);
      for (const Point2& v : robot.vertices()) EXPECT_TRUE(insideWithTol(b, rotated(v, t), 1e-12));
    }
  }
}

TEST(SweptBound, OverestimateShrinksWithResolution) {
  const Polygon robot({{-1, -0.4}, {1.5, -0.3}, {1.2, 0.5}, {-0.8, 0.6}});
  double prev = 1e300;
  double R = 0.0;
  for (const Point2& v : robot.vertices()) R = std::max(R, norm(v));
  for (int n : {36, 72, 180, 360}) {
    const AngleInterval in = AngleInterval::slice(3, n);
    const double excess = sweptBoundingPolygon(robot, in).area() - poseHull(robot, in).area();
    EXPECT_GE(excess, 0.0);
    EXPECT_LT(excess, prev);
    prev = excess;
    // Every bound vertex is within the chord offset of some rotated robot vertex arc.
    const double half = 0.5 * in.width();
    const double offset = R * (1 - std::cos(half)) / std::cos(half);
    const Polygon bound = sweptBoundingPolygon(robot, in);
    for (const Point2& p : bound.vertices()) {
      double best = 1e300;
      for (const Point2& v : robot.vertices())
        for (int s = 0; s <= 200; ++s) best = std::min(best, rvg::distance(p, rotated(v, in.lb + in.width() * s / 200.0)));
      EXPECT_LE(best, offset + 1e-9);
    }
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(BuildLayer, PointRobotInConvexWorkspaceHasNoVertices) {
  const Polygon robot = box(-1e-3, -1e-3, 1e-3, 1e-3);
  const Layer layer = buildLayer(robot, AngleInterval::slice(0, 36), box(0, 0, 10, 10), {});
  EXPECT_FALSE(layer.free.empty());
  EXPECT_TRUE(layer.vertices.empty());
  EXPECT_TRUE(layer.edges.empty());
  const BBox b = bbox(sweptBoundingPolygon(robot, AngleInterval::slice(0, 36)).vertices());
  // The eroded corners are intersection points of two grown pieces and carry overlay rounding.
  EXPECT_NEAR(layer.free.freeSpace().area(), (10 - (b.maxx - b.minx)) * (10 - (b.maxy - b.miny)), 1e-4);
}

TEST(BuildLayer, SquareRobotSquareObstacleMatchesHandSum) {
  const Polygon robot = unitSquareRobot();
  const AngleInterval in = AngleInterval::slice(0, 36);
  const Polygon obstacle = box(4, 4, 6, 6);
  const Layer layer = buildLayer(robot, in, box(0, 0, 20, 20), {obstacle});

  // Independent construction: hull of robot corners and arc apexes, then the hull of o - b.
  std::vector<Point2> boundPts;
  for (const Point2& v : robot.vertices()) {
    boundPts.push_back(rotated(v, in.lb));
    boundPts.push_back(rotated(v, in.ub));
    boundPts.push_back(rotated(v, in.mean()) * (1.0 / std::cos(0.5 * in.width())));
  }
  std::vector<Point2> diff;
  for (const Point2& o : obstacle.vertices())
    for (const Point2& b : convexHull(boundPts)) diff.push_back(o - b);
  const std::vector<Point2> expected = convexHull(diff);

  std::set<std::pair<double, double>> want, got;
  for (const Point2& p : expected) want.insert({p.x, p.y});
  for (const Point2& p : layer.vertices) got.insert({p.x, p.y});
  ASSERT_EQ(got.size(), want.size());
  auto it = want.begin();
  for (const auto& g : got) {
    EXPECT_NEAR(g.first, it->first, 1e-9);
    EXPECT_NEAR(g.second, it->second, 1e-9);
    ++it;
  }
  EXPECT_GE(layer.vertices.size(), 4u);
  // Every hull edge of the grown obstacle is a graph edge.
  const std::set<std::pair<int, int>> edges(layer.edges.begin(), layer.edges.end());
  for (std::size_t i = 0; i < layer.vertices.size(); ++i) {
    const int v = layer.triVertex[i];
    const int nxt = layer.vertexIndexAt(layer.free.point(layer.free.info()[v].next));
    ASSERT_GE(nxt, 0);
    EXPECT_TRUE(edges.count({std::min<int>(i, nxt), std::max<int>(i, nxt)}));
  }
}

TEST(BuildLayer, ObstacleCoveringWorkspaceGivesEmptyGraph) {
  const Layer layer = buildLayer(unitSquareRobot(), AngleInterval::slice(0, 8), box(0, 0, 10, 10), {box(1, 1, 9, 9)});
  EXPECT_TRUE(layer.free.empty());
  EXPECT_TRUE(layer.vertices.empty());
  EXPECT_TRUE(layer.edges.empty());
}

TEST(BuildLayer, GraphInvariantsAndCompleteness) {
  const Polygon robot({{-0.3, -0.2}, {0.5, -0.2}, {0.5, 0.2}, {-0.3, 0.2}});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RandomMap m = randomMap(seed, 6, 10.0);
    const Layer layer = buildLayer(robot, AngleInterval::slice(int(seed), 12), m.workspace, m.obstacles);
    ASSERT_FALSE(layer.free.empty());
    ASSERT_EQ(layer.cache.size(), layer.vertices.size());
    const std::set<std::pair<int, int>> edges(layer.edges.begin(), layer.edges.end());
    for (std::size_t i = 0; i < layer.vertices.size(); ++i) {
      EXPECT_TRUE(layer.free.info()[layer.triVertex[i]].reflex);
      EXPECT_EQ(layer.vertexIndexAt(layer.vertices[i]), int(i));
      for (std::size_t j = i + 1; j < layer.vertices.size(); ++j) {
        const Point2 a = layer.vertices[i], b = layer.vertices[j];
        const bool vis = segmentVisible(a, b, layer.free.freeSpace());
        const bool want = vis && isBitangent(a, b, layer.free);
        if (want != bool(edges.count({int(i), int(j)}))) {
          bool degenerate = false;
          for (int v = 0; v < layer.free.tri().realPointCount(); ++v) {
            const Point2 w = layer.free.point(v);
            if (!(w == a) && !(w == b) && distancePointSegment(w, a, b) < kGeomEps) degenerate = true;
          }
          EXPECT_TRUE(degenerate) << "seed " << seed << " pair " << i << "," << j;
        }
      }
    }
    for (auto [i, j] : layer.edges) {
      EXPECT_TRUE(layer.cache[i].seesVertex(layer.triVertex[j]));
      EXPECT_TRUE(layer.cache[j].seesVertex(layer.triVertex[i]));
    }
  }
}

TEST(BuildLayer, GrowthIsSoundForSampledPoses) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Polygon robot({{-0.6, -0.3}, {0.9, -0.25}, {0.2, 0.1}, {0.7, 0.5}, {-0.5, 0.4}});
  const RandomMap m = randomMap(12, 7, 10.0);
  int freeSamples = 0;
  for (int n : {4, 12, 36}) {
    for (int l = 0; l < n; l += std::max(1, n / 4)) {
      const Layer layer = buildLayer(robot, AngleInterval::slice(l, n), m.workspace, m.obstacles);
      if (layer.free.empty()) continue;
      for (int s = 0; s < 1000; ++s) {
        const double x = 10 * u(rng), y = 10 * u(rng);
        const double th = layer.interval.lb + layer.interval.width() * u(rng);
        if (layer.free.classify({x, y}) == Containment::Outside) continue;
        ++freeSamples;
        const Polygon pose = placed(robot, x, y, th);
        EXPECT_TRUE(polygonInside(pose, m.workspace)) << x << "," << y << "," << th;
        for (const Polygon& o : m.obstacles) EXPECT_FALSE(polygonsIntersect(pose, o)) << x << "," << y << "," << th;
      }
    }
  }
  EXPECT_GT(freeSamples, 1000);
}

TEST(BuildLayer, NearBoundaryPointEscapesAsResolutionGrows) {
  const Polygon robot = unitSquareRobot();
  const Polygon obstacle = box(0, 0, 1, 1);
  const double r = std::sqrt(0.5);
  // The corner lies along the mid-sweep direction of a vertex in slice 0 at n = 36.
  const double dir = kPi * 230.0 / 180.0;
  const Point2 p = Point2{1, 1} - (r + 2e-4) * Point2{std::cos(dir), std::sin(dir)};
  bool escaped = false;
  int firstFree = 0;
  for (int n : {36, 72, 180, 360, 720}) {
    bool allFree = true;
    for (int l = 0; l < n; l += n / 36) {
      const Layer layer = buildLayer(robot, AngleInterval::slice(l, n), box(-5, -5, 10, 10), {obstacle});
      if (layer.free.classify(p) == Containment::Outside) allFree = false;
    }
    if (allFree && !escaped) firstFree = n;
    if (escaped) EXPECT_TRUE(allFree) << n;
    escaped = escaped || allFree;
  }
  EXPECT_TRUE(escaped);
  EXPECT_GT(firstFree, 36);
}

TEST(BuildLayer, CacheMatchesFreshQueries) {
  const Polygon robot({{-0.3, -0.2}, {0.5, -0.2}, {0.5, 0.2}, {-0.3, 0.2}});
  const RandomMap m = randomMap(8, 6, 10.0);
  const Layer layer = buildLayer(robot, AngleInterval::slice(2, 18), m.workspace, m.obstacles);
  ASSERT_FALSE(layer.vertices.empty());
  for (std::size_t i = 0; i < layer.vertices.size(); ++i) {
    const VisibilityRegion fresh = visibilityQuery(layer.vertices[i], layer.free);
    EXPECT_EQ(fresh.visible(), layer.cache[i].visible());
    EXPECT_EQ(fresh.wedges().size(), layer.cache[i].wedges().size());
    EXPECT_EQ(fresh.area(), layer.cache[i].area());
    EXPECT_EQ(layer.cache[i].origin(), layer.vertices[i]);
  }
}

TEST(BuildLayers, DeterministicAcrossRunsAndThreadCounts) {
  const Polygon robot({{-0.3, -0.2}, {0.5, -0.2}, {0.5, 0.2}, {-0.3, 0.2}});
  const RandomMap m = randomMap(5, 6, 10.0);
  const auto a = buildLayers(robot, 12, m.workspace, m.obstacles, 1);
  const auto b = buildLayers(robot, 12, m.workspace, m.obstacles, 4);
  const auto c = buildLayers(robot, 12, m.workspace, m.obstacles, 4);
  ASSERT_EQ(a.size(), 12u);
  for (int l = 0; l < 12; ++l) {
    EXPECT_EQ(a[l].index, l);
    EXPECT_EQ(a[l].vertices, b[l].vertices);
    EXPECT_EQ(a[l].edges, b[l].edges);
    EXPECT_EQ(b[l].vertices, c[l].vertices);
    EXPECT_EQ(b[l].edges, c[l].edges);
  }
  EXPECT_THROW(buildLayers(robot, 1, m.workspace, m.obstacles), std::invalid_argument);
}
