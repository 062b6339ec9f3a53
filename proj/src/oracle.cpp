#include "rvg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <tuple>
#include <stdexcept>

namespace rvg {

namespace {

double paramOn(Point2 a, Point2 b, Point2 p) {
  const Point2 d = b - a;
  return dot(p - a, d) / dot(d, d);
}

void edgeSplits(Point2 a, Point2 b, Point2 c, Point2 d, std::vector<double>& ts) {
  // Vertices within tolerance of the segment split it, so rounding cannot hide a passage into the interior.
  if (distancePointSegment(c, a, b) <= kGeomEps) ts.push_back(paramOn(a, b, c));
  if (distancePointSegment(d, a, b) <= kGeomEps) ts.push_back(paramOn(a, b, d));
  if (segmentsProperlyCross(a, b, c, d)) {
    const Point2 r = b - a, s = d - c;
    ts.push_back(cross(c - a, s) / cross(r, s));
  }
}

double boundaryDistance(const PolygonSet& s, Point2 p) {
  double best = 1e300;
  auto scan = [&](const Polygon& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i)
      best = std::min(best, distancePointSegment(p, poly[i], poly.next(i)));
  };
  for (const Region& r : s.regions) {
    scan(r.outer);
    for (const Polygon& h : r.holes) scan(h);
  }
  return best;
}

bool outside(const PolygonSet& s, Point2 p) {
  return containsPoint(s, p) == Containment::Outside && boundaryDistance(s, p) > kGeomEps;
}

}  // namespace

bool segmentVisible(Point2 a, Point2 b, const PolygonSet& free) {
  if (outside(free, a)) return false;
  if (a == b) return true;
  if (outside(free, b)) return false;
  std::vector<double> ts{0.0, 1.0};
  auto scan = [&](const Polygon& p) {
    for (std::size_t i = 0; i < p.size(); ++i) edgeSplits(a, b, p[i], p.next(i), ts);
  };
  for (const Region& r : free.regions) {
    scan(r.outer);
    for (const Polygon& h : r.holes) scan(h);
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double t0 = std::clamp(ts[i], 0.0, 1.0), t1 = std::clamp(ts[i + 1], 0.0, 1.0);
    if (t1 - t0 <= 0.0) continue;
    const Point2 m = a + (0.5 * (t0 + t1)) * (b - a);
    if (outside(free, m)) return false;
  }
  return true;
}

std::vector<double> dijkstra(int vertexCount, const std::vector<RvgEdge>& edges, int source, double alpha,
                             double beta) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(vertexCount));
  for (const RvgEdge& e : edges) {
    const double w = edgeCost(e.weight, alpha, beta);
    adj[e.a].push_back({e.b, w});
    adj[e.b].push_back({e.a, w});
  }
  std::vector<double> d(static_cast<std::size_t>(vertexCount), INFINITY);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du != d[u]) continue;
    for (auto [v, w] : adj[u])
      if (du + w < d[v]) {
        d[v] = du + w;
        pq.push({d[v], v});
      }
  }
  return d;
}

FullVisibilityGraph fullVisibilityGraph2D(const Polygon& workspace, const std::vector<Polygon>& obstacles) {
  FullVisibilityGraph g;
  g.free = difference(workspace, unionMerge(obstacles));
  for (const Region& r : g.free.regions) {
    for (const Point2& p : r.outer.vertices()) g.points.push_back(p);
    for (const Polygon& h : r.holes)
      for (const Point2& p : h.vertices()) g.points.push_back(p);
  }
  const int m = static_cast<int>(g.points.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (segmentVisible(g.points[i], g.points[j], g.free)) g.edges.push_back({i, j});
  return g;
}

double fullShortestPath2D(const FullVisibilityGraph& g, Point2 s, Point2 t) {
  if (outside(g.free, s) || outside(g.free, t)) return INFINITY;
  const int m = static_cast<int>(g.points.size());
  std::vector<RvgEdge> edges;
  for (auto [i, j] : g.edges) edges.push_back({i, j, {distance(g.points[i], g.points[j]), 0.0}});
  for (int i = 0; i < m; ++i) {
    if (segmentVisible(s, g.points[i], g.free)) edges.push_back({m, i, {distance(s, g.points[i]), 0.0}});
    if (segmentVisible(t, g.points[i], g.free)) edges.push_back({m + 1, i, {distance(t, g.points[i]), 0.0}});
  }
  if (segmentVisible(s, t, g.free)) edges.push_back({m, m + 1, {distance(s, t), 0.0}});
  return dijkstra(m + 2, edges, m, 1.0, 0.0)[m + 1];
}

RvgGraph naivePropagate(const std::vector<Layer>& layers, int maxHops) {
  const int n = static_cast<int>(layers.size());
  if (n < 2) throw std::invalid_argument("propagation needs at least two layers");
  std::vector<std::map<Point2, int>> reg(static_cast<std::size_t>(n));  // position -> hops
  for (int l = 0; l < n; ++l)
    for (const Point2& p : layers[l].vertices) reg[l][p] = 0;

  std::map<std::pair<int, Point2>, VisibilityRegion> regions;
  auto regionOf = [&](int l, Point2 p) -> const VisibilityRegion& {
    auto it = regions.find({l, p});
    if (it == regions.end()) it = regions.emplace(std::make_pair(l, p), visibilityQuery(p, layers[l].free)).first;
    return it->second;
  };
  auto sees = [&](int l, Point2 from, Point2 to) {
    return from == to || (regionOf(l, from).contains(to) && isBitangent(from, to, layers[l].free));
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (int l = 0; l < n; ++l) {
      for (int s : {(l + 1) % n, (l + n - 1) % n}) {
        const auto snapshot = reg[s];
        for (const auto& [p, h] : snapshot) {
          if (h >= maxHops) continue;
          auto here = reg[l].find(p);
          if (here != reg[l].end()) {
            if (here->second > h + 1) {
              here->second = h + 1;
              changed = true;
            }
            continue;
          }
          if (layers[l].free.empty() || layers[l].free.classify(p) == Containment::Outside) continue;
          bool ok = false;
          for (const auto& entry : reg[l])
            if (sees(l, entry.first, p)) {
              ok = true;
              break;
            }
          if (ok) {
            reg[l][p] = h + 1;
            changed = true;
          }
        }
      }
    }
  }

  std::vector<RvgVertex> vertices;
  std::vector<std::map<Point2, int>> id(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l)
    for (const auto& [p, h] : reg[l]) {
      id[l][p] = static_cast<int>(vertices.size());
      vertices.push_back({p, l, layers[l].interval, l, -1, h});
    }
  std::vector<RvgEdge> edges;
  for (int l = 0; l < n; ++l) {
    for (auto a = reg[l].begin(); a != reg[l].end(); ++a)
      for (auto b = std::next(a); b != reg[l].end(); ++b)
        if (sees(l, a->first, b->first))
          edges.push_back({id[l][a->first], id[l][b->first], {distance(a->first, b->first), 0.0}});
    const int next = (l + 1) % n;
    if (n == 2 && next == 0) continue;
    for (const auto& [p, h] : reg[l]) {
      auto it = id[next].find(p);
      if (it != id[next].end())
        edges.push_back({id[l][p], it->second,
                         {0.0, circularDistance(layers[l].interval.mean(), layers[next].interval.mean())}});
    }
  }
  return RvgGraph::fromParts(n, std::move(vertices), std::move(edges));
}

namespace {

struct LatticeChecker {
  const Polygon& workspace;
  const std::vector<Polygon>& obstacles;
  const Polygon& robot;
  std::vector<BBox> boxes;

  LatticeChecker(const Polygon& ws, const std::vector<Polygon>& obs, const Polygon& r)
      : workspace(ws), obstacles(obs), robot(r) {
    for (const Polygon& o : obs) boxes.push_back(bbox(o.vertices()));
  }

  bool freeAt(const std::vector<Point2>& local, Point2 t) const {
    std::vector<Point2> pts;
    pts.reserve(local.size());
    for (const Point2& p : local) pts.push_back(p + t);
    const BBox b = bbox(pts);
    const Polygon placed = Polygon::trusted(std::move(pts));
    if (!polygonInside(placed, workspace)) return false;
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const BBox& o = boxes[i];
      if (b.maxx < o.minx || o.maxx < b.minx || b.maxy < o.miny || o.maxy < b.miny) continue;
      if (polygonsIntersect(placed, obstacles[i])) return false;
    }
    return true;
  }

  std::vector<Point2> rotatedRobot(double theta) const { return rotate(robot, theta).vertices(); }

  bool translationFree(const std::vector<Point2>& local, Point2 a, Point2 b, double step) const {
    const int k = std::max(1, static_cast<int>(std::ceil(distance(a, b) / step)));
    for (int i = 1; i < k; ++i)
      if (!freeAt(local, a + (static_cast<double>(i) / k) * (b - a))) return false;
    return true;
  }

  bool rotationFree(Point2 at, double from, double dtheta, double step) const {
    const int k = std::max(1, static_cast<int>(std::ceil(std::fabs(dtheta) / step)));
    for (int i = 1; i < k; ++i)
      if (!freeAt(rotatedRobot(from + dtheta * i / k), at)) return false;
    return true;
  }
};

}  // namespace

QueryResult latticePlan(const Polygon& robot, const Polygon& workspace, const std::vector<Polygon>& obstacles,
                        const QuerySpec& q, const LatticeSpec& spec) {
  if (!(spec.step > 0) || spec.angularSteps < 1) throw std::invalid_argument("invalid lattice spec");
  const double h = spec.step;
  const int K = spec.angularSteps;
  const double dA = kTwoPi / K;
  const double tcheck = spec.translationCheck > 0 ? spec.translationCheck : h / 4;
  const LatticeChecker chk(workspace, obstacles, robot);

  const BBox wb = bbox(workspace.vertices());
  const Point2 s = q.start.pos(), g = q.goal.pos();
  const int i0 = static_cast<int>(std::ceil((wb.minx - s.x) / h)), i1 = static_cast<int>(std::floor((wb.maxx - s.x) / h));
  const int j0 = static_cast<int>(std::ceil((wb.miny - s.y) / h)), j1 = static_cast<int>(std::floor((wb.maxy - s.y) / h));
  const int NX = i1 - i0 + 1, NY = j1 - j0 + 1;
  QueryResult res;
  if (NX <= 0 || NY <= 0) {
    res.reason = "start outside the workspace bounds";
    return res;
  }
  const std::int64_t states = static_cast<std::int64_t>(NX) * NY * K;
  const int goalId = static_cast<int>(states);

  std::vector<std::vector<Point2>> local(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) local[k] = chk.rotatedRobot(q.start.theta + k * dA);
  auto posOf = [&](int i, int j) { return Point2{s.x + (i0 + i) * h, s.y + (j0 + j) * h}; };
  auto idOf = [&](int i, int j, int k) { return (i * NY + j) * K + k; };

  std::vector<signed char> valid(static_cast<std::size_t>(states), -1);
  auto isValid = [&](int i, int j, int k) {
    signed char& c = valid[idOf(i, j, k)];
    if (c < 0) c = chk.freeAt(local[k], posOf(i, j)) ? 1 : 0;
    return c == 1;
  };

  // Final connectors from grid states near the goal.
  std::map<int, double> toGoal;
  std::map<int, double> toGoalTurn;
  {
    const double fi = (g.x - s.x) / h - i0, fj = (g.y - s.y) / h - j0;
    const double rel = std::remainder(q.goal.theta - q.start.theta, kTwoPi);
    const double fk = (rel < 0 ? rel + kTwoPi : rel) / dA;
    for (int i : {static_cast<int>(std::floor(fi)), static_cast<int>(std::ceil(fi))})
      for (int j : {static_cast<int>(std::floor(fj)), static_cast<int>(std::ceil(fj))})
        for (int kk : {static_cast<int>(std::floor(fk)), static_cast<int>(std::ceil(fk))}) {
          if (i < 0 || j < 0 || i >= NX || j >= NY) continue;
          const int k = ((kk % K) + K) % K;
          const double theta = q.start.theta + k * dA;
          const double turn = std::remainder(q.goal.theta - theta, kTwoPi);
          const Point2 c = posOf(i, j);
          if (!isValid(i, j, k) || !chk.translationFree(local[k], c, g, tcheck) || !chk.freeAt(local[k], g) ||
              !chk.rotationFree(g, theta, turn, spec.rotationCheck))
            continue;
          toGoal[idOf(i, j, k)] = q.alpha * distance(c, g) + q.beta * std::fabs(turn);
          toGoalTurn[idOf(i, j, k)] = turn;
        }
  }

  std::vector<double> dist(static_cast<std::size_t>(states) + 1, INFINITY);
  std::vector<int> parent(static_cast<std::size_t>(states) + 1, -1);
  std::vector<char> done(static_cast<std::size_t>(states) + 1, 0);
  auto heur = [&](int i, int j, int k) {
    return q.alpha * distance(posOf(i, j), g) + q.beta * circularDistance(q.start.theta + k * dA, q.goal.theta);
  };
  using Item = std::tuple<double, double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const int si = -i0, sj = -j0;
  if (!isValid(si, sj, 0)) {
    res.reason = "start pose in collision";
    return res;
  }
  const int src = idOf(si, sj, 0);
  dist[src] = 0.0;
  pq.push({heur(si, sj, 0), -0.0, src});
  static const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  auto push = [&](int from, int to, double w, double hv) {
    const double nd = dist[from] + w;
    if (nd < dist[to]) {
      dist[to] = nd;
      parent[to] = from;
      pq.push({nd + hv, -nd, to});
    }
  };

  while (!pq.empty()) {
    const auto [f, ng, u] = pq.top();
    pq.pop();
    if (done[u] || -ng != dist[u]) continue;
    done[u] = 1;
    if (u == goalId) break;
    const int k = u % K, j = (u / K) % NY, i = u / K / NY;
    if (auto it = toGoal.find(u); it != toGoal.end()) push(u, goalId, it->second, 0.0);
    const Point2 p = posOf(i, j);
    for (int m = 0; m < 8; ++m) {
      const int a = i + di[m], b = j + dj[m];
      if (a < 0 || b < 0 || a >= NX || b >= NY) continue;
      const int v = idOf(a, b, k);
      if (done[v] || !isValid(a, b, k)) continue;
      if (!chk.translationFree(local[k], p, posOf(a, b), tcheck)) continue;
      push(u, v, q.alpha * h * (m < 4 ? 1.0 : std::sqrt(2.0)), heur(a, b, k));
    }
    if (K > 1) {
      for (int dk : {1, -1}) {
        const int kk = (k + dk + K) % K;
        const int v = idOf(i, j, kk);
        if (done[v] || !isValid(i, j, kk)) continue;
        if (!chk.rotationFree(p, q.start.theta + k * dA, dk * dA, spec.rotationCheck)) continue;
        push(u, v, q.beta * dA, heur(i, j, kk));
      }
    }
  }

  if (!done[goalId]) {
    res.status = QueryStatus::NoPath;
    res.reason = "goal not reachable on the lattice";
    return res;
  }

  std::vector<int> chain;
  for (int v = parent[goalId]; v != -1; v = parent[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  PathSE2& path = res.path;
  auto poseOf = [&](int v) {
    const int k = v % K, j = (v / K) % NY, i = v / K / NY;
    const Point2 p = posOf(i, j);
    return Pose{p.x, p.y, wrapAngle(q.start.theta + k * dA)};
  };
  path.waypoints.push_back(q.start);
  for (std::size_t c = 1; c < chain.size(); ++c) {
    const Pose a = path.waypoints.back(), b = poseOf(chain[c]);
    if (a.x == b.x && a.y == b.y) {
      const double d = std::remainder(b.theta - a.theta, kTwoPi);
      path.segments.push_back({SegmentKind::Rotate, 0.0, d});
      path.rotationCost += std::fabs(d);
    } else {
      const double len = distance(a.pos(), b.pos());
      path.segments.push_back({SegmentKind::Translate, len, 0.0});
      path.translationCost += len;
    }
    path.waypoints.push_back(b);
  }
  const Pose last = path.waypoints.back();
  if (distance(last.pos(), g) > 0) {
    const double len = distance(last.pos(), g);
    path.segments.push_back({SegmentKind::Translate, len, 0.0});
    path.translationCost += len;
    path.waypoints.push_back({g.x, g.y, last.theta});
  }
  const double turn = toGoalTurn[chain.back()];
  if (turn != 0.0) {
    path.segments.push_back({SegmentKind::Rotate, 0.0, turn});
    path.rotationCost += std::fabs(turn);
    path.waypoints.push_back(q.goal);
  }
  path.totalCost = q.alpha * path.translationCost + q.beta * path.rotationCost;
  res.status = QueryStatus::Ok;
  return res;
}

}  // namespace rvg
