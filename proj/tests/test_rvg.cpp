#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "rvg/layers.hpp"
#include "rvg/oracle.hpp"
#include "rvg/query.hpp"
#include "rvg/rvg.hpp"
#include "support.hpp"

using namespace rvg;
using namespace rvg::testing;

namespace {

Polygon barRobot() { return box(-0.6, -0.25, 0.6, 0.25); }

std::vector<Layer> copiesOf(const Layer& base, int n) {
  std::vector<Layer> layers;
  for (int l = 0; l < n; ++l) {
    Layer c = base;
    c.index = l;
    c.interval = AngleInterval::slice(l, n);
    layers.push_back(std::move(c));
  }
  return layers;
}

struct Micro {
  Polygon workspace;
  std::vector<Polygon> obstacles;
  Polygon robot;
  int n;
};

Micro microInstance(int seed) {
  const RandomMap m = randomMap(7000 + seed, 1 + seed % 3, 8.0);
  return {m.workspace, m.obstacles, box(-0.4, -0.15, 0.4, 0.15), 3 + seed % 6};
}

using Key = std::pair<int, Point2>;

std::map<Key, int> keyed(const RvgGraph& g) {
  std::map<Key, int> out;
  for (int v = 0; v < static_cast<int>(g.vertices().size()); ++v) out[{g.vertices()[v].layer, g.vertices()[v].pos}] = v;
  return out;
}

}  // namespace

TEST(EdgeCost, Examples) {
  EXPECT_DOUBLE_EQ(edgeCost({5.0, 0.0}, 1.0, 0.0), 5.0);
  EXPECT_NEAR(edgeCost({0.0, kTwoPi / 36}, 0.0, 1.0), 0.1745, 5e-5);
  EXPECT_NEAR(edgeCost({3.0, kTwoPi / 36}, 0.5, 0.5), 1.5 + kPi / 36, 1e-15);
  EXPECT_THROW(edgeCost({-1.0, 0.0}, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(edgeCost({1.0, -1e-3}, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(edgeCost({1.0, 0.0}, -1.0, 0.0), std::invalid_argument);
}

TEST(Propagate, IdenticalGeometryTwoLayers) {
  const Layer base = buildLayer(box(-0.5, -0.5, 0.5, 0.5), AngleInterval::slice(0, 2), box(0, 0, 10, 10),
                                {box(3, 3, 5, 4), box(6, 6, 7, 8)});
  const auto layers = copiesOf(base, 2);
  const RvgGraph g = propagate(layers);
  const std::size_t v = base.vertices.size(), e = base.edges.size();
  ASSERT_GT(v, 0u);
  EXPECT_EQ(g.vertices().size(), 2 * v);
  for (const RvgVertex& x : g.vertices()) EXPECT_TRUE(x.native());
  for (int l = 0; l < 2; ++l)
    for (const Point2& p : base.vertices) EXPECT_GE(g.vertexAt(l, p), 0);
  // In-slice edges on both sides plus one rotation edge per shared position.
  EXPECT_EQ(g.edges().size(), 2 * e + v);
  const RvgGraph naive = naivePropagate(layers, 1);
  EXPECT_EQ(naive.edges().size(), g.edges().size());
}

TEST(Propagate, PureRotationEdge) {
  const Layer base = buildLayer(box(-0.5, -0.5, 0.5, 0.5), AngleInterval::slice(0, 36), box(0, 0, 10, 10),
                                {box(3, 3, 5, 4)});
  const auto layers = copiesOf(base, 36);
  const RvgGraph g = propagate(layers);
  const Point2 p = base.vertices.front();
  const int a = g.vertexAt(4, p), b = g.vertexAt(5, p);
  ASSERT_GE(a, 0);
  ASSERT_GE(b, 0);
  bool found = false;
  for (const auto& arc : g.neighbours(a))
    if (arc.to == b) {
      found = true;
      EXPECT_EQ(g.edges()[arc.edge].weight.translation, 0.0);
      EXPECT_NEAR(g.edges()[arc.edge].weight.rotation, kTwoPi / 36, 1e-12);
    }
  EXPECT_TRUE(found);
}

TEST(Propagate, RegisteredPositionsAreFree) {
  const RandomMap m = randomMap(11, 5, 10.0);
  const auto layers = buildLayers(barRobot(), 12, m.workspace, m.obstacles, 2);
  const RvgGraph g = propagate(layers);
  int blockedNatives = 0;
  for (int l = 0; l < 12; ++l) {
    const int next = (l + 1) % 12;
    for (const Point2& p : layers[l].vertices)
      if (layers[next].free.classify(p) == Containment::Outside) {
        ++blockedNatives;
        EXPECT_LT(g.vertexAt(next, p), 0);
      }
  }
  EXPECT_GT(blockedNatives, 0);
  for (const RvgVertex& x : g.vertices())
    EXPECT_NE(layers[x.layer].free.classify(x.pos), Containment::Outside);
}

TEST(Propagate, DictionaryHoldsNatives) {
  const RandomMap m = randomMap(12, 4, 10.0);
  const auto layers = buildLayers(barRobot(), 8, m.workspace, m.obstacles, 2);
  const RvgGraph g = propagate(layers);
  for (int l = 0; l < 8; ++l) {
    const auto tags = g.dictionary(l);
    const std::set<std::pair<int, int>> have(tags.begin(), tags.end());
    for (int j = 0; j < static_cast<int>(layers[l].vertices.size()); ++j) EXPECT_TRUE(have.count({l, j}));
  }
}

TEST(CrossLayerEligible, Examples) {
  const Polygon robot = box(-0.3, -0.3, 0.3, 0.3);
  const Layer layer = buildLayer(robot, AngleInterval::slice(1, 8), box(0, 0, 10, 10), {box(4, 4, 6, 6)});
  // Corners of the grown pillar.
  std::vector<Point2> corners = layer.vertices;
  ASSERT_GE(corners.size(), 4u);
  const Point2 lo = *std::min_element(corners.begin(), corners.end(), [](Point2 a, Point2 b) { return a.x + a.y < b.x + b.y; });
  const Point2 hi = *std::max_element(corners.begin(), corners.end(), [](Point2 a, Point2 b) { return a.x + a.y < b.x + b.y; });
  const int ihi = layer.vertexIndexAt(hi);
  EXPECT_FALSE(crossLayerEligible(lo, hi, layer, layer.cache[ihi]));
  EXPECT_TRUE(crossLayerEligible(hi, hi, layer, layer.cache[ihi]));

  // Outer tangent: two consecutive hull corners along one side of the pillar.
  int checked = 0;
  for (auto [i, j] : layer.edges) {
    const Point2 a = layer.vertices[i], b = layer.vertices[j];
    ASSERT_TRUE(crossLayerEligible(a, b, layer, layer.cache[j]));
    for (int k = 0; k <= 100; ++k) {
      const Point2 p = a + (k / 100.0) * (b - a);
      EXPECT_TRUE(layer.free.classify(p) != Containment::Outside ||
                  boundaryDistance(layer.free.freeSpace(), p) < 1e-9);
    }
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Propagate, MatchesNaiveFixpoint) {
  for (int seed = 0; seed < 10; ++seed) {
    const Micro m = microInstance(seed);
    const auto layers = buildLayers(m.robot, m.n, m.workspace, m.obstacles, 2);
    for (int hops : {1, 2, PropagationOptions::kUnlimited}) {
      const RvgGraph g = propagate(layers, {hops});
      const RvgGraph o = naivePropagate(layers, hops);
      const auto kg = keyed(g), ko = keyed(o);
      ASSERT_EQ(kg.size(), ko.size()) << "seed " << seed << " hops " << hops;
      std::vector<int> toO(kg.size());
      for (const auto& [k, v] : kg) {
        auto it = ko.find(k);
        ASSERT_NE(it, ko.end());
        toO[v] = it->second;
      }
      EXPECT_EQ(g.edges().size(), o.edges().size()) << "seed " << seed << " hops " << hops;
      const int nv = static_cast<int>(kg.size());
      for (int s = 0; s < nv; ++s) {
        const auto dg = dijkstra(nv, g.edges(), s, 1.0, 0.5);
        const auto dn = dijkstra(nv, o.edges(), toO[s], 1.0, 0.5);
        for (int t = 0; t < nv; ++t) {
          if (std::isinf(dg[t])) EXPECT_TRUE(std::isinf(dn[toO[t]]));
          else EXPECT_NEAR(dg[t], dn[toO[t]], 1e-9);
        }
      }
    }
  }
}

TEST(Propagate, EdgesExecuteCollisionFree) {
  const Polygon robot = barRobot();
  for (std::uint64_t seed : {21u, 22u}) {
    const RandomMap m = randomMap(seed, 5, 10.0);
    const int n = 10;
    const auto layers = buildLayers(robot, n, m.workspace, m.obstacles, 2);
    const RvgGraph g = propagate(layers);
    for (const RvgEdge& e : g.edges()) {
      const RvgVertex& a = g.vertices()[e.a];
      const RvgVertex& b = g.vertices()[e.b];
      if (a.layer == b.layer) {
        const double th = a.interval.mean();
        for (int k = 0; k <= 100; ++k) {
          const Point2 p = a.pos + (k / 100.0) * (b.pos - a.pos);
          ASSERT_TRUE(poseFree({p.x, p.y, th}, robot, m.obstacles, m.workspace))
              << "translation edge " << e.a << "-" << e.b;
        }
      } else {
        ASSERT_EQ(a.pos, b.pos);
        const double from = a.interval.mean();
        const double d = std::remainder(b.interval.mean() - from, kTwoPi);
        const int steps = static_cast<int>(std::ceil(std::fabs(d) / 1e-2));
        for (int k = 0; k <= steps; ++k)
          ASSERT_TRUE(poseFree({a.pos.x, a.pos.y, from + d * k / steps}, robot, m.obstacles, m.workspace))
              << "rotation edge " << e.a << "-" << e.b;
      }
    }
  }
}

TEST(Propagate, UndirectedConsistency) {
  const RandomMap m = randomMap(31, 4, 10.0);
  const auto layers = buildLayers(barRobot(), 8, m.workspace, m.obstacles, 2);
  const RvgGraph g = propagate(layers);
  for (int id = 0; id < static_cast<int>(g.edges().size()); ++id) {
    const RvgEdge& e = g.edges()[id];
    EXPECT_GE(e.weight.translation, 0.0);
    EXPECT_GE(e.weight.rotation, 0.0);
    auto has = [&](int from, int to) {
      for (const auto& arc : g.neighbours(from))
        if (arc.to == to && arc.edge == id) return true;
      return false;
    };
    EXPECT_TRUE(has(e.a, e.b));
    EXPECT_TRUE(has(e.b, e.a));
  }
}

TEST(Propagate, SubstitutesDecoupleRotationAndTranslation) {
  const RandomMap m = randomMap(41, 5, 10.0);
  const int n = 12;
  const auto layers = buildLayers(barRobot(), n, m.workspace, m.obstacles, 2);
  const RvgGraph g = propagate(layers);
  int subs = 0;
  for (int v = 0; v < static_cast<int>(g.vertices().size()); ++v) {
    const RvgVertex& x = g.vertices()[v];
    if (x.native()) continue;
    ++subs;
    bool rotation = false;
    for (const auto& arc : g.neighbours(v)) {
      const RvgEdge& e = g.edges()[arc.edge];
      const RvgVertex& y = g.vertices()[arc.to];
      if (y.layer == x.layer) {
        EXPECT_EQ(e.weight.rotation, 0.0);
        EXPECT_NEAR(e.weight.translation, distance(x.pos, y.pos), 1e-12);
      } else {
        EXPECT_EQ(e.weight.translation, 0.0);
        EXPECT_NEAR(e.weight.rotation, kTwoPi / n, 1e-12);
        rotation = true;
      }
    }
    EXPECT_TRUE(rotation);
  }
  EXPECT_GT(subs, 0);
}

TEST(Propagate, WrapsAroundTheCircle) {
  const RandomMap m = randomMap(51, 5, 10.0);
  const int n = 8;
  const auto layers = buildLayers(barRobot(), n, m.workspace, m.obstacles, 2);
  const RvgGraph g = propagate(layers);
  int wrapRotations = 0, fromLast = 0;
  for (const RvgEdge& e : g.edges()) {
    const int la = g.vertices()[e.a].layer, lb = g.vertices()[e.b].layer;
    if ((la == 0 && lb == n - 1) || (la == n - 1 && lb == 0)) ++wrapRotations;
  }
  for (int v : g.registered(0))
    if (g.vertices()[v].originLayer == n - 1) ++fromLast;
  EXPECT_GT(wrapRotations, 0);
  EXPECT_GT(fromLast, 0);
}

TEST(Propagate, RejectsBadInput) {
  const RandomMap m = randomMap(61, 2, 10.0);
  const auto layers = buildLayers(barRobot(), 4, m.workspace, m.obstacles, 2);
  EXPECT_THROW(propagate({layers[0]}), std::invalid_argument);
  EXPECT_THROW(propagate(layers, {-1}), std::invalid_argument);
}
