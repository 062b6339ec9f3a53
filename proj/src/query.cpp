#include "rvg/query.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace rvg {

namespace {

double signedTurn(double from, double to) { return std::remainder(to - from, kTwoPi); }

Polygon placedRobot(const Polygon& robot, const Pose& pose) {
  std::vector<Point2> pts;
  pts.reserve(robot.size());
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  for (const Point2& p : robot.vertices()) pts.push_back({c * p.x - s * p.y + pose.x, s * p.x + c * p.y + pose.y});
  return Polygon::trusted(std::move(pts));
}

double robotDiameter(const Polygon& robot) {
  double d = 0.0;
  for (const Point2& a : robot.vertices())
    for (const Point2& b : robot.vertices()) d = std::max(d, distance(a, b));
  return d;
}

bool finitePose(const Pose& p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.theta); }

}  // namespace

bool poseFree(const Pose& pose, const Polygon& robot, const std::vector<Polygon>& obstacles,
              const Polygon& workspace) {
  const Polygon placed = placedRobot(robot, pose);
  if (!polygonInside(placed, workspace)) return false;
  for (const Polygon& o : obstacles)
    if (polygonsIntersect(placed, o)) return false;
  return true;
}

void validateQuery(const QuerySpec& q, const Polygon& robot, const Polygon& workspace,
                   const std::vector<Polygon>& obstacles) {
  if (!std::isfinite(q.alpha) || !std::isfinite(q.beta) || q.alpha < 0 || q.beta < 0)
    throw std::invalid_argument("alpha and beta must be finite and non-negative");
  if (q.alpha == 0 && q.beta == 0) throw std::invalid_argument("alpha and beta cannot both be zero");
  if (!finitePose(q.start)) throw std::invalid_argument("start pose is not finite");
  if (!finitePose(q.goal)) throw std::invalid_argument("goal pose is not finite");
  if (!poseFree(q.start, robot, obstacles, workspace)) throw std::invalid_argument("start pose is in collision");
  if (!poseFree(q.goal, robot, obstacles, workspace)) throw std::invalid_argument("goal pose is in collision");
}

const std::vector<Augmentation::Arc> Augmentation::kNone;

const std::vector<Augmentation::Arc>& Augmentation::extraArcs(int id) const {
  if (id >= base_) return overlayArcs_[id - base_];
  return baseArcs_.empty() ? kNone : baseArcs_[id];
}

int Augmentation::addNode(Node n) {
  nodes_.push_back(n);
  overlayArcs_.emplace_back();
  return base_ + static_cast<int>(nodes_.size()) - 1;
}

void Augmentation::link(int a, int b, EdgeWeight w) {
  auto& la = a >= base_ ? overlayArcs_[a - base_] : baseArcs_[a];
  auto& lb = b >= base_ ? overlayArcs_[b - base_] : baseArcs_[b];
  la.push_back({b, w});
  lb.push_back({a, w});
}

Augmentation addStartGoal(const RvgGraph& g, const std::vector<Layer>& layers, const QuerySpec& q) {
  const int n = static_cast<int>(layers.size());
  if (n != g.resolution()) throw std::invalid_argument("layers do not match graph resolution");
  Augmentation aug;
  aug.base_ = static_cast<int>(g.vertices().size());
  aug.baseArcs_.assign(static_cast<std::size_t>(aug.base_), {});

  auto freeIn = [&](int l, Point2 p) { return !layers[l].free.empty() && layers[l].free.classify(p) != Containment::Outside; };

  struct Chain {
    std::vector<int> node;  // overlay id per layer, -1 when absent
    std::vector<VisibilityRegion> region;
  };

  auto place = [&](const Pose& pose, int& anchor, bool& placed) {
    Chain c;
    c.node.assign(static_cast<std::size_t>(n), -1);
    c.region.resize(static_cast<std::size_t>(n));
    anchor = aug.addNode({pose.pos(), -1, pose.theta});
    std::vector<int> seeds;
    for (int l = 0; l < n; ++l)
      if (layers[l].interval.contains(pose.theta) && freeIn(l, pose.pos())) seeds.push_back(l);
    placed = !seeds.empty();
    std::vector<int> stack = seeds;
    for (int l : seeds) c.node[l] = aug.addNode({pose.pos(), l, layers[l].interval.mean()});
    while (!stack.empty()) {
      const int l = stack.back();
      stack.pop_back();
      for (int s : {(l + 1) % n, (l + n - 1) % n}) {
        if (c.node[s] >= 0 || !freeIn(s, pose.pos())) continue;
        c.node[s] = aug.addNode({pose.pos(), s, layers[s].interval.mean()});
        stack.push_back(s);
      }
    }
    for (int l : seeds) aug.link(anchor, c.node[l], {0.0, circularDistance(pose.theta, layers[l].interval.mean())});
    for (int l = 0; l < n; ++l) {
      const int next = (l + 1) % n;
      if (n == 2 && next < l) continue;
      if (c.node[l] >= 0 && c.node[next] >= 0)
        aug.link(c.node[l], c.node[next],
                 {0.0, circularDistance(layers[l].interval.mean(), layers[next].interval.mean())});
    }
    for (int l = 0; l < n; ++l) {
      if (c.node[l] < 0) continue;
      c.region[l] = visibilityQuery(pose.pos(), layers[l].free);
      for (int v : g.registered(l)) {
        const Point2 p = g.vertices()[v].pos;
        if (c.region[l].contains(p)) aug.link(c.node[l], v, {distance(pose.pos(), p), 0.0});
      }
    }
    return c;
  };

  const Chain s = place(q.start, aug.start_, aug.startPlaced_);
  const Chain t = place(q.goal, aug.goal_, aug.goalPlaced_);
  for (int l = 0; l < n; ++l)
    if (s.node[l] >= 0 && t.node[l] >= 0 && s.region[l].contains(q.goal.pos()))
      aug.link(s.node[l], t.node[l], {distance(q.start.pos(), q.goal.pos()), 0.0});
  return aug;
}

namespace {

struct NodeView {
  Point2 pos;
  double theta;
};

NodeView view(const RvgGraph& g, const Augmentation& aug, int v) {
  if (v < aug.baseSize()) return {g.vertices()[v].pos, g.meanAngle(v)};
  const auto& n = aug.node(v);
  return {n.pos, n.theta};
}

}  // namespace

double heuristic(const RvgGraph& g, const Augmentation& aug, int v, const QuerySpec& q) {
  const NodeView x = view(g, aug, v);
  return q.alpha * distance(x.pos, q.goal.pos()) + q.beta * circularDistance(x.theta, q.goal.theta);
}

QueryResult searchPath(const RvgGraph& g, const Augmentation& aug, const QuerySpec& q) {
  QueryResult res;
  const int total = aug.size();
  // Among equal costs, prefer the smaller value of the component the objective weights less.
  const bool secondaryIsRotation = q.beta == 0.0;
  auto secondary = [&](const EdgeWeight& w) { return secondaryIsRotation ? w.rotation : w.translation; };

  std::vector<double> cost(static_cast<std::size_t>(total), INFINITY), sec(static_cast<std::size_t>(total), INFINITY);
  std::vector<int> parent(static_cast<std::size_t>(total), -1);
  std::vector<EdgeWeight> via(static_cast<std::size_t>(total));
  std::vector<char> closed(static_cast<std::size_t>(total), 0);
  using Entry = std::tuple<double, double, double, int>;  // f, -g, secondary, id
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  const int src = aug.start(), dst = aug.goal();
  cost[src] = 0.0;
  sec[src] = 0.0;
  open.push({heuristic(g, aug, src, q), -0.0, 0.0, src});

  // Costs within rounding of each other count as equal; ties fall to the secondary component, then to
  // the smaller predecessor id.
  auto tol = [](double x) { return 1e-11 * (1.0 + std::fabs(x)); };
  auto relax = [&](int u, int v, const EdgeWeight& w) {
    const double c = cost[u] + edgeCost(w, q.alpha, q.beta);
    const double s2 = sec[u] + secondary(w);
    if (c < cost[v] - tol(c)) {
      if (closed[v]) return;
      cost[v] = c;
      sec[v] = s2;
      parent[v] = u;
      via[v] = w;
      open.push({c + heuristic(g, aug, v, q), -c, s2, v});
    } else if (c <= cost[v] + tol(c) && v != src && edgeCost(w, q.alpha, q.beta) + secondary(w) > 0.0) {
      if (s2 < sec[v] - tol(s2) || (s2 <= sec[v] + tol(s2) && u < parent[v])) {
        sec[v] = s2;
        parent[v] = u;
        via[v] = w;
      }
    }
  };

  // Expansion continues through every entry tied with the goal so that the choice among equal-cost
  // routes does not depend on the order of equal keys in the queue.
  while (!open.empty()) {
    const auto [f, ng, s, u] = open.top();
    if (closed[dst] && f > cost[dst] + tol(cost[dst])) break;
    open.pop();
    if (closed[u] || -ng != cost[u]) continue;
    closed[u] = 1;
    if (u == dst) continue;
    if (u < aug.baseSize()) {
      for (const RvgGraph::Arc& a : g.neighbours(u)) relax(u, a.to, g.edges()[a.edge].weight);
    }
    for (const Augmentation::Arc& a : aug.extraArcs(u)) relax(u, a.to, a.weight);
  }

  if (!closed[dst]) {
    res.status = QueryStatus::NoPath;
    res.reason = "goal not reachable in the roadmap";
    return res;
  }

  std::vector<int> chain;
  for (int v = dst; v != -1; v = parent[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());

  PathSE2& path = res.path;
  path.waypoints.push_back(q.start);
  Pose cur = q.start;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const int v = chain[i];
    const EdgeWeight& w = via[v];
    const NodeView x = view(g, aug, v);
    if (w.translation > 0.0) {
      cur = {x.pos.x, x.pos.y, cur.theta};
      path.segments.push_back({SegmentKind::Translate, w.translation, 0.0});
      path.translationCost += w.translation;
      path.waypoints.push_back(cur);
    } else if (w.rotation > 0.0) {
      const double d = std::copysign(w.rotation, signedTurn(cur.theta, x.theta));
      cur = {cur.x, cur.y, x.theta};
      path.segments.push_back({SegmentKind::Rotate, 0.0, d});
      path.rotationCost += w.rotation;
      path.waypoints.push_back(cur);
    }
  }
  if (path.waypoints.size() > 1) path.waypoints.back() = q.goal;
  path.totalCost = q.alpha * path.translationCost + q.beta * path.rotationCost;
  res.status = QueryStatus::Ok;
  return res;
}

QueryResult plan(const RvgGraph& g, const std::vector<Layer>& layers, const QuerySpec& q) {
  if (q.start == q.goal) {
    QueryResult res;
    res.status = QueryStatus::Ok;
    res.path.waypoints.push_back(q.start);
    return res;
  }
  const Augmentation aug = addStartGoal(g, layers, q);
  if (!aug.startPlaced() || !aug.goalPlaced()) {
    QueryResult res;
    res.status = QueryStatus::InfeasibleAtResolution;
    res.reason = !aug.startPlaced() ? "start position is inside a grown obstacle at this resolution"
                                    : "goal position is inside a grown obstacle at this resolution";
    return res;
  }
  return searchPath(g, aug, q);
}

double pathCost(const PathSE2& p, double alpha, double beta) {
  double t = 0.0, r = 0.0;
  for (const PathSegment& s : p.segments) {
    if (s.kind == SegmentKind::Translate) t += s.length;
    else r += std::fabs(s.dtheta);
  }
  return alpha * t + beta * r;
}

bool validatePath(const PathSE2& p, const Polygon& robot, const std::vector<Polygon>& obstacles,
                  const Polygon& workspace, const ValidationOptions& opts) {
  if (p.waypoints.empty() || p.segments.size() + 1 != p.waypoints.size()) return false;
  const double tstep = opts.translationStep > 0 ? opts.translationStep : 1e-2 * robotDiameter(robot);
  const double rstep = opts.rotationStep;
  if (!(tstep > 0) || !(rstep > 0)) throw std::invalid_argument("validation steps must be positive");
  if (!poseFree(p.waypoints.front(), robot, obstacles, workspace)) return false;
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    const Pose& a = p.waypoints[i];
    const Pose& b = p.waypoints[i + 1];
    const PathSegment& s = p.segments[i];
    if (s.kind == SegmentKind::Translate) {
      if (std::fabs(signedTurn(a.theta, b.theta)) > 1e-9) return false;
      if (std::fabs(distance(a.pos(), b.pos()) - s.length) > 1e-9 * (1.0 + s.length)) return false;
      const int steps = std::max(1, static_cast<int>(std::ceil(s.length / tstep)));
      for (int k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const Pose at{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.theta};
        if (!poseFree(at, robot, obstacles, workspace)) return false;
      }
    } else {
      if (a.x != b.x || a.y != b.y) return false;
      if (std::fabs(signedTurn(a.theta + s.dtheta, b.theta)) > 1e-9) return false;
      const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(s.dtheta) / rstep)));
      for (int k = 1; k <= steps; ++k) {
        const Pose at{a.x, a.y, a.theta + s.dtheta * k / steps};
        if (!poseFree(at, robot, obstacles, workspace)) return false;
      }
    }
  }
  return true;
}

}  // namespace rvg
