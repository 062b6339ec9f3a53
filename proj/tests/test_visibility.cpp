#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rvg/oracle.hpp"
#include "rvg/visibility.hpp"
#include "support.hpp"

using namespace rvg;
using namespace rvg::testing;

namespace {

FreeSpaceTriangulation freeOf(const Polygon& workspace, const std::vector<Polygon>& obstacles) {
  return triangulateFreeSpace(workspace, unionMerge(obstacles));
}

struct GridCompare {
  double visibleArea = 0.0;
  int mismatches = 0;
};

// Ray-cast oracle: classify every cell centre of an n x n grid over bbox by a brute-force segment test.
GridCompare gridOracle(const VisibilityRegion& region, const PolygonSet& free, int n) {
  std::vector<Point2> all;
  for (const Region& r : free.regions)
    for (const Point2& p : r.outer.vertices()) all.push_back(p);
  const BBox b = bbox(all);
  const double hx = (b.maxx - b.minx) / n, hy = (b.maxy - b.miny) / n;
  GridCompare out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 p{b.minx + (i + 0.5) * hx, b.miny + (j + 0.5) * hy};
      const bool brute = segmentVisible(region.origin(), p, free);
      if (brute) out.visibleArea += hx * hy;
      if (brute != region.contains(p) && boundaryDistance(free, p) > 1e-7) ++out.mismatches;
    }
  }
  return out;
}

// A boundary vertex e is locally tangent to segment (o, e) iff extending past e stays free.
bool extensionFree(Point2 e, Point2 o, const PolygonSet& free) {
  const Point2 d = e - o;
  const Point2 p = e + (1e-6 / norm(d)) * d;
  return containsPoint(free, p) != Containment::Outside;
}

// Segment passes within kGeomEps of a boundary vertex other than its endpoints.
bool nearDegenerate(Point2 a, Point2 b, const FreeSpaceTriangulation& fs) {
  for (int v = 0; v < fs.tri().realPointCount(); ++v) {
    const Point2 w = fs.point(v);
    if (w == a || w == b) continue;
    if (distancePointSegment(w, a, b) < kGeomEps) return true;
  }
  return false;
}

}  // namespace

TEST(TriangulateFreeSpace, Examples) {
  const auto empty = freeOf(box(0, 0, 1, 1), {});
  EXPECT_EQ(empty.tri().insideCount(), 2);

  const auto holed = freeOf(box(0, 0, 3, 3), {box(1, 1, 2, 2)});
  EXPECT_EQ(holed.tri().insideCount(), 8);
  EXPECT_NEAR(holed.tri().insideArea(), 8.0, 1e-9);

  const Polygon triangle({{0, 0}, {1, 0}, {0, 1}});
  EXPECT_EQ(freeOf(triangle, {}).tri().insideCount(), 1);

  EXPECT_THROW(freeOf(box(0, 0, 1, 1), {box(-1, -1, 2, 2)}), std::runtime_error);
}

TEST(TriangulateFreeSpace, RandomMapsAreaSum) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RandomMap m = randomMap(seed);
    const auto fs = FreeSpaceTriangulation::fromFreeSpace(m.free);
    EXPECT_NEAR(fs.tri().insideArea(), m.free.area(), 1e-9 * 100);
  }
}

TEST(VisibilityQuery, ConvexWorkspaceSeesEverything) {
  const Polygon ws({{0, 0}, {4, 0}, {5, 3}, {2, 5}, {-1, 3}});
  const auto fs = freeOf(ws, {});
  for (const Point2 q : {Point2{2, 2}, Point2{0, 0}, Point2{4.5, 1.5}}) {
    const auto reg = visibilityQuery(q, fs);
    EXPECT_NEAR(reg.area(), ws.area(), 1e-9);
    EXPECT_EQ(reg.visible().size(), 5u);
  }
}

TEST(VisibilityQuery, OutsideFreeSpaceThrows) {
  const auto fs = freeOf(box(0, 0, 10, 10), {box(4, 4, 6, 6)});
  EXPECT_THROW(visibilityQuery({5, 5}, fs), std::invalid_argument);
  EXPECT_THROW(visibilityQuery({11, 5}, fs), std::invalid_argument);
}

TEST(VisibilityQuery, PillarShadowMatchesRayCast) {
  const std::vector<Polygon> obs{box(4, 4, 6, 6)};
  const auto fs = freeOf(box(0, 0, 10, 10), obs);
  const auto reg = visibilityQuery({0, 0}, fs);
  const auto grid = gridOracle(reg, fs.freeSpace(), 500);
  EXPECT_NEAR(reg.area(), grid.visibleArea, 0.005 * grid.visibleArea);
  EXPECT_EQ(grid.mismatches, 0);
  EXPECT_LT(reg.area(), 96.0);
  EXPECT_FALSE(reg.contains({8, 8}));
  EXPECT_TRUE(reg.contains({9, 1}));
}

TEST(VisibilityQuery, LShapeReflexCornerMatchesRayCast) {
  const auto fs = freeOf(lShape(), {});
  const auto reg = visibilityQuery({1, 1}, fs);
  EXPECT_NEAR(reg.area(), 3.0, 1e-12);
  const auto grid = gridOracle(reg, fs.freeSpace(), 500);
  EXPECT_NEAR(reg.area(), grid.visibleArea, 0.005 * grid.visibleArea);
  EXPECT_EQ(grid.mismatches, 0);

  const auto corner = visibilityQuery({0.2, 1.9}, fs);
  const auto g2 = gridOracle(corner, fs.freeSpace(), 500);
  EXPECT_NEAR(corner.area(), g2.visibleArea, 0.005 * g2.visibleArea);
  EXPECT_EQ(g2.mismatches, 0);
}

TEST(VisibilityQuery, RandomMapsRayCast) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const RandomMap m = randomMap(seed);
    const auto fs = FreeSpaceTriangulation::fromFreeSpace(m.free);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    Point2 q;
    do q = {u(rng), u(rng)};
    while (containsPoint(m.free, q) != Containment::Inside);
    const auto reg = visibilityQuery(q, fs);
    const auto grid = gridOracle(reg, m.free, 200);
    EXPECT_NEAR(reg.area(), grid.visibleArea, 0.01 * grid.visibleArea) << "seed " << seed;
    EXPECT_EQ(grid.mismatches, 0) << "seed " << seed;
  }
}

TEST(VisibilityQuery, PolygonIsStarShapedAndMatchesArea) {
  const RandomMap m = randomMap(3);
  const auto fs = FreeSpaceTriangulation::fromFreeSpace(m.free);
  const auto reg = visibilityQuery({0.5, 0.5}, fs);
  const auto poly = reg.polygon();
  EXPECT_NEAR(std::fabs(signedArea(poly)), reg.area(), 1e-9);
  for (const Point2& p : poly) EXPECT_TRUE(segmentVisible(reg.origin(), p, m.free));
}

TEST(VisibleVertices, MatchBruteForceOnRandomMaps) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  int compared = 0, degenerate = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RandomMap m = randomMap(seed);
    const auto fs = FreeSpaceTriangulation::fromFreeSpace(m.free);
    std::vector<Point2> queries;
    for (int v = 0; v < fs.tri().realPointCount(); ++v) queries.push_back(fs.point(v));
    for (int k = 0; k < 10; ++k) {
      Point2 q;
      do q = {u(rng), u(rng)};
      while (containsPoint(m.free, q) == Containment::Outside);
      queries.push_back(q);
    }
    for (const Point2& q : queries) {
      const auto reg = visibilityQuery(q, fs);
      std::set<std::pair<int, int>> got;
      for (VertexRef r : visibleVertices(reg, fs)) got.insert({r.ring, r.index});
      std::set<std::pair<int, int>> want;
      for (std::size_t r = 0; r < fs.rings().size(); ++r)
        for (std::size_t i = 0; i < fs.rings()[r].size(); ++i)
          if (nearDegenerate(q, fs.rings()[r][i], fs)) {
            ++degenerate;
            got.erase({int(r), int(i)});
          } else if (segmentVisible(q, fs.rings()[r][i], m.free)) {
            want.insert({int(r), int(i)});
          }
      compared += static_cast<int>(fs.tri().realPointCount());
      EXPECT_EQ(got, want) << "seed " << seed << " q " << q.x << "," << q.y;
    }
  }
  EXPECT_LT(degenerate * 100, compared);
}

TEST(VisibleVertices, Examples) {
  const auto fs = freeOf(box(0, 0, 10, 10), {Polygon({{4, 4}, {6, 4}, {5, 6}})});
  const auto reg = visibilityQuery({5, 0.5}, fs);
  EXPECT_TRUE(reg.seesVertex(fs.vertexAt({4, 4})));
  EXPECT_TRUE(reg.seesVertex(fs.vertexAt({6, 4})));
  EXPECT_FALSE(reg.seesVertex(fs.vertexAt({5, 6})));

  const auto fromVertex = visibilityQuery({4, 4}, fs);
  EXPECT_TRUE(fromVertex.seesVertex(fs.vertexAt({6, 4})));
  EXPECT_TRUE(fromVertex.seesVertex(fs.vertexAt({5, 6})));

  // (8,5) lies exactly on the shadow ray from (0,1) grazing the pillar corner (6,4).
  const auto fs2 = freeOf(box(0, 0, 10, 10), {box(4, 4, 6, 6), box(8, 5, 9, 6)});
  const auto shadow = visibilityQuery({0, 1}, fs2);
  EXPECT_TRUE(shadow.contains({8, 5}));
  EXPECT_TRUE(shadow.seesVertex(fs2.vertexAt({8, 5})));
  EXPECT_TRUE(shadow.contains({7, 4.4}));
  EXPECT_FALSE(shadow.contains({7, 4.6}));
}

TEST(VisibilityQuery, SymmetricForRandomPairs) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const RandomMap m = randomMap(7, 8);
  const auto fs = FreeSpaceTriangulation::fromFreeSpace(m.free);
  int pairs = 0, visiblePairs = 0;
  while (pairs < 1000) {
    const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    if (containsPoint(m.free, a) != Containment::Inside) continue;
    if (containsPoint(m.free, b) != Containment::Inside) continue;
    ++pairs;
    const bool ab = visibilityQuery(a, fs).contains(b);
    EXPECT_EQ(ab, visibilityQuery(b, fs).contains(a));
    EXPECT_EQ(ab, segmentVisible(a, b, m.free));
    visiblePairs += ab;
  }
  EXPECT_GT(visiblePairs, 100);
  EXPECT_LT(visiblePairs, 1000);
}

TEST(VisibilityQuery, ContainsOriginAndClearanceBall) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const RandomMap m = randomMap(9);
  const auto fs = FreeSpaceTriangulation::fromFreeSpace(m.free);
  const double delta = 0.05;
  for (int k = 0; k < 200;) {
    const Point2 q{u(rng), u(rng)};
    if (containsPoint(m.free, q) != Containment::Inside || boundaryDistance(m.free, q) < delta) continue;
    ++k;
    const auto reg = visibilityQuery(q, fs);
    EXPECT_TRUE(reg.contains(q));
    for (int d = 0; d < 16; ++d) EXPECT_TRUE(reg.contains(q + rotated({0.9 * delta, 0}, kTwoPi * d / 16)));
  }
}

TEST(IsBitangent, Examples) {
  const auto fs = freeOf(box(0, 0, 20, 20), {box(4, 4, 6, 6), box(10, 5, 12, 7)});
  // Hull edge of a convex obstacle.
  EXPECT_TRUE(isBitangent({4, 4}, {6, 4}, fs));
  // Diagonal enters the obstacle wedge at both ends.
  EXPECT_FALSE(isBitangent({4, 4}, {6, 6}, fs));
  // Outer common tangent of the two squares.
  EXPECT_TRUE(isBitangent({6, 4}, {12, 5}, fs));
  EXPECT_TRUE(isBitangent({4, 6}, {10, 7}, fs));
  // Separating tangent passes between the squares.
  EXPECT_TRUE(isBitangent({6, 4}, {10, 7}, fs));
  // Tangent at one end only.
  EXPECT_FALSE(isBitangent({6, 4}, {10, 5}, fs));
  // Convex free-space corner of the workspace is not reflex.
  EXPECT_FALSE(isBitangent({0, 0}, {4, 6}, fs));
  // Non-vertex endpoints impose nothing.
  EXPECT_TRUE(isBitangent({1, 1}, {4, 6}, fs));
  EXPECT_TRUE(isBitangent({6, 4}, {6, 4}, fs));

  for (auto [a, b] : {std::pair<Point2, Point2>{{6, 4}, {12, 5}}, {{4, 6}, {10, 7}}, {{6, 4}, {10, 7}}}) {
    EXPECT_TRUE(extensionFree(a, b, fs.freeSpace()));
    EXPECT_TRUE(extensionFree(b, a, fs.freeSpace()));
  }
  EXPECT_TRUE(extensionFree({6, 4}, {10, 5}, fs.freeSpace()));
  EXPECT_FALSE(extensionFree({10, 5}, {6, 4}, fs.freeSpace()));
}

TEST(IsBitangent, MatchesExtensionOracleOnRandomMaps) {
  int checked = 0, tangent = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RandomMap m = randomMap(seed);
    const auto fs = FreeSpaceTriangulation::fromFreeSpace(m.free);
    const int nv = fs.tri().realPointCount();
    for (int a = 0; a < nv; ++a) {
      const auto reg = visibilityQuery(fs.point(a), fs);
      for (int b = a + 1; b < nv; ++b) {
        if (!reg.seesVertex(b)) continue;
        const Point2 pa = fs.point(a), pb = fs.point(b);
        const bool want = extensionFree(pa, pb, m.free) && extensionFree(pb, pa, m.free);
        const bool got = isBitangent(pa, pb, fs);
        EXPECT_EQ(got, want) << "seed " << seed << " " << a << "-" << b;
        ++checked;
        tangent += got;
      }
    }
  }
  EXPECT_GT(checked, 500);
  EXPECT_GT(tangent, 50);
}
