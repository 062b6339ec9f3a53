#include "rvg/visibility.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>

namespace rvg {

namespace {

inline int nx(int i) { return i == 2 ? 0 : i + 1; }
inline int pv(int i) { return i == 0 ? 2 : i - 1; }

double angleOf(Point2 q, Point2 p) { return std::atan2(p.y - q.y, p.x - q.x); }

Point2 rayHit(Point2 q, Point2 dirPoint, Point2 e0, Point2 e1) {
  const Point2 d = dirPoint - q;
  const Point2 e = e1 - e0;
  const double den = cross(d, e);
  if (den == 0.0) return distance(q, e0) < distance(q, e1) ? e0 : e1;
  const double t = cross(e0 - q, e) / den;
  return q + t * d;
}

}  // namespace

std::size_t FreeSpaceTriangulation::Hash::operator()(const Point2& p) const {
  const auto a = std::bit_cast<std::uint64_t>(p.x);
  const auto b = std::bit_cast<std::uint64_t>(p.y);
  return std::hash<std::uint64_t>()(a * 0x9E3779B97F4A7C15ULL ^ (b + 0x632BE59BD9B4E019ULL));
}

FreeSpaceTriangulation FreeSpaceTriangulation::fromFreeSpace(PolygonSet free) {
  FreeSpaceTriangulation fs;
  fs.free_ = std::move(free);
  if (fs.free_.empty()) return fs;
  for (const Region& r : fs.free_.regions) {
    fs.rings_.push_back(r.outer.vertices());
    for (const Polygon& h : r.holes) fs.rings_.push_back(h.vertices());
  }
  fs.tri_ = Triangulation::fromRings(fs.rings_);
  fs.info_.assign(static_cast<std::size_t>(fs.tri_.realPointCount()), VertexInfo{});
  std::vector<char> seen(fs.info_.size(), 0);
  for (std::size_t r = 0; r < fs.rings_.size(); ++r) {
    const auto& ring = fs.rings_[r];
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int id = fs.tri_.ringVertex(r, i);
      const bool reflex = orient2d(ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]) < 0;
      if (seen[id]) continue;
      seen[id] = 1;
      VertexInfo& vi = fs.info_[id];
      vi.prev = fs.tri_.ringVertex(r, (i + n - 1) % n);
      vi.next = fs.tri_.ringVertex(r, (i + 1) % n);
      vi.reflex = reflex;
      vi.ref = {static_cast<int>(r), static_cast<int>(i)};
      if (reflex) fs.reflex_.push_back(id);
    }
  }
  for (int v = 0; v < fs.tri_.realPointCount(); ++v) fs.index_.emplace(fs.tri_.points()[v], v);
  return fs;
}

FreeSpaceTriangulation triangulateFreeSpace(const Polygon& workspace, const PolygonSet& obstacles) {
  PolygonSet free = difference(workspace, obstacles);
  if (free.empty()) throw std::runtime_error("free space is empty");
  return FreeSpaceTriangulation::fromFreeSpace(std::move(free));
}

int FreeSpaceTriangulation::vertexAt(Point2 p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

int FreeSpaceTriangulation::locateFree(Point2 p) const {
  if (empty()) return -1;
  const int v = vertexAt(p);
  if (v >= 0) {
    for (int t : tri_.incident(v))
      if (tri_.tris()[t].inside) return t;
    return -1;
  }
  const int t = tri_.locate(p);
  if (t < 0) return -1;
  const auto& tr = tri_.tris()[t];
  if (tr.inside) return t;
  for (int k = 0; k < 3; ++k) {
    if (orient2d(point(tr.v[nx(k)]), point(tr.v[pv(k)]), p) == 0) {
      const int nb = tr.nbr[k];
      if (nb >= 0 && tri_.tris()[nb].inside) return nb;
    }
  }
  return -1;
}

Containment FreeSpaceTriangulation::classify(Point2 p) const {
  const int t = locateFree(p);
  if (t < 0) return Containment::Outside;
  const int v = vertexAt(p);
  if (v >= 0) return info_[v].prev >= 0 ? Containment::OnBoundary : Containment::Inside;
  const auto& tr = tri_.tris()[t];
  for (int k = 0; k < 3; ++k) {
    if (tr.fixed[k] && orient2d(point(tr.v[nx(k)]), point(tr.v[pv(k)]), p) == 0)
      return Containment::OnBoundary;
  }
  return Containment::Inside;
}

bool VisibilityRegion::wedgeContains(const Wedge& w, Point2 p) const {
  if (orient2d(q_, w.right, p) < 0 || orient2d(q_, p, w.left) < 0) return false;
  if (orient2d(q_, w.right, w.left) == 0 && dot(p - q_, w.right - q_) < 0) return false;
  const int oq = orient2d(w.e0, w.e1, q_);
  const int op = orient2d(w.e0, w.e1, p);
  if (oq != 0) return op == 0 || op == oq;
  const Point2 d = w.right - q_;
  return dot(p - q_, d) <= std::min(dot(w.e0 - q_, d), dot(w.e1 - q_, d));
}

bool VisibilityRegion::contains(Point2 p) const {
  if (p == q_) return true;
  if (!mayContain(p)) return false;
  constexpr double kTol = 1e-9;
  const double phi = angleOf(q_, p);
  for (double a : {phi, phi + kTwoPi}) {
    auto it = std::upper_bound(wedges_.begin(), wedges_.end(), a + kTol,
                               [](double x, const Wedge& w) { return x < w.angR; });
    while (it != wedges_.begin()) {
      --it;
      if (reach_[it - wedges_.begin()] < a - kTol) break;
      if (wedgeContains(*it, p)) return true;
    }
  }
  return false;
}

bool VisibilityRegion::seesVertex(int v) const {
  return std::binary_search(visible_.begin(), visible_.end(), v);
}

std::vector<Point2> VisibilityRegion::polygon() const {
  std::vector<Point2> out;
  for (std::size_t k = 0; k < wedges_.size(); ++k) {
    const Wedge& w = wedges_[k];
    const Point2 a = rayHit(q_, w.right, w.e0, w.e1);
    const Point2 b = rayHit(q_, w.left, w.e0, w.e1);
    if (out.empty() || !(out.back() == a)) out.push_back(a);
    if (!(b == a)) out.push_back(b);
    const Wedge& nxt = wedges_[(k + 1) % wedges_.size()];
    double gap = nxt.angR - w.angL;
    if (k + 1 == wedges_.size()) gap += kTwoPi;
    if (gap > 1e-12) out.push_back(q_);
  }
  return out;
}

double VisibilityRegion::area() const {
  double a = 0.0;
  for (const Wedge& w : wedges_) {
    const Point2 p = rayHit(q_, w.right, w.e0, w.e1);
    const Point2 r = rayHit(q_, w.left, w.e0, w.e1);
    a += 0.5 * cross(p - q_, r - q_);
  }
  return a;
}

VisibilityRegion visibilityQuery(Point2 q, const FreeSpaceTriangulation& fs) {
  const int start = fs.locateFree(q);
  if (start < 0) throw std::invalid_argument("visibility query point lies outside free space");
  const Triangulation& T = fs.tri();
  const auto& tris = T.tris();
  const auto& P = T.points();

  VisibilityRegion reg;
  reg.q_ = q;

  struct Task {
    int tri;
    int entry;  // index of the apex opposite the entry edge
    Point2 r, l;
  };
  std::vector<Task> stack;

  auto emitWedge = [&](Point2 r, Point2 l, int a, int b) {
    VisibilityRegion::Wedge w;
    w.right = r;
    w.left = l;
    w.e0 = P[a];
    w.e1 = P[b];
    reg.wedges_.push_back(w);
  };

  // Cone through the edge opposite v[k] of triangle t, where q lies on t's side of that edge.
  auto through = [&](int t, int k, Point2 r, Point2 l) {
    const auto& tr = tris[t];
    const int a = tr.v[nx(k)], b = tr.v[pv(k)];
    const int nb = tr.nbr[k];
    if (tr.fixed[k] || nb < 0 || !tris[nb].inside) {
      emitWedge(r, l, a, b);
      return;
    }
    const int ei = T.edgeIndex(nb, a, b);
    stack.push_back({nb, ei, r, l});
  };

  auto seedEdge = [&](int t, int k) {
    const auto& tr = tris[t];
    const int a = tr.v[nx(k)], b = tr.v[pv(k)];
    reg.visible_.push_back(a);
    reg.visible_.push_back(b);
    through(t, k, P[a], P[b]);
  };

  const int qv = fs.vertexAt(q);
  if (qv >= 0) {
    reg.visible_.push_back(qv);
    for (int t : T.incident(qv)) {
      if (!tris[t].inside) continue;
      int k = 0;
      while (tris[t].v[k] != qv) ++k;
      seedEdge(t, k);
    }
  } else {
    const auto& tr = tris[start];
    int onEdge = -1;
    for (int k = 0; k < 3; ++k)
      if (orient2d(P[tr.v[nx(k)]], P[tr.v[pv(k)]], q) == 0) onEdge = k;
    for (int k = 0; k < 3; ++k)
      if (k != onEdge) seedEdge(start, k);
    if (onEdge >= 0) {
      const int nb = tr.nbr[onEdge];
      if (!tr.fixed[onEdge] && nb >= 0 && tris[nb].inside) {
        const int ke = T.edgeIndex(nb, tr.v[nx(onEdge)], tr.v[pv(onEdge)]);
        for (int k = 0; k < 3; ++k)
          if (k != ke) seedEdge(nb, k);
      }
    }
  }

  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    const auto& tr = tris[task.tri];
    const int i = task.entry;
    const int c = tr.v[i];
    const Point2 pc = P[c];
    const int orc = orient2d(q, task.r, pc);
    const int ocl = orient2d(q, pc, task.l);
    if (orc >= 0 && ocl >= 0) reg.visible_.push_back(c);
    // Right child: edge (R, c), opposite v[nx(i)].
    {
      const Point2 l2 = ocl >= 0 ? pc : task.l;
      if (orient2d(q, task.r, l2) >= 0) through(task.tri, nx(i), task.r, l2);
    }
    // Left child: edge (c, L), opposite v[pv(i)].
    {
      const Point2 r2 = orc >= 0 ? pc : task.r;
      if (orient2d(q, r2, task.l) >= 0) through(task.tri, pv(i), r2, task.l);
    }
  }

  for (auto& w : reg.wedges_) {
    w.angR = angleOf(q, w.right);
    double span = angleOf(q, w.left) - w.angR;
    if (span < 0) span += kTwoPi;
    if (span > kPi) span = 0.0;  // collinear rays reported with opposite rounding
    w.angL = w.angR + span;
  }
  std::sort(reg.wedges_.begin(), reg.wedges_.end(),
            [](const VisibilityRegion::Wedge& a, const VisibilityRegion::Wedge& b) {
              return a.angR < b.angR || (a.angR == b.angR && a.angL < b.angL);
            });
  std::vector<Point2> corners{q};
  for (const auto& w : reg.wedges_) {
    corners.push_back(w.right);
    corners.push_back(w.left);
    corners.push_back(rayHit(q, w.right, w.e0, w.e1));
    corners.push_back(rayHit(q, w.left, w.e0, w.e1));
    if (orient2d(w.e0, w.e1, q) == 0) {
      corners.push_back(w.e0);
      corners.push_back(w.e1);
    }
  }
  reg.bounds_ = bbox(corners);
  const double kPad = 1e-9 * (1.0 + std::max({std::fabs(reg.bounds_.minx), std::fabs(reg.bounds_.maxx),
                                              std::fabs(reg.bounds_.miny), std::fabs(reg.bounds_.maxy)}));
  reg.bounds_.minx -= kPad;
  reg.bounds_.miny -= kPad;
  reg.bounds_.maxx += kPad;
  reg.bounds_.maxy += kPad;
  double reach = -INFINITY;
  for (const auto& w : reg.wedges_) reg.reach_.push_back(reach = std::max(reach, w.angL));
  std::sort(reg.visible_.begin(), reg.visible_.end());
  reg.visible_.erase(std::unique(reg.visible_.begin(), reg.visible_.end()), reg.visible_.end());
  return reg;
}

std::vector<VertexRef> visibleVertices(const VisibilityRegion& region, const FreeSpaceTriangulation& fs) {
  std::vector<VertexRef> out;
  const auto& rings = fs.rings();
  for (std::size_t r = 0; r < rings.size(); ++r) {
    for (std::size_t i = 0; i < rings[r].size(); ++i) {
      if (region.seesVertex(fs.tri().ringVertex(r, i)))
        out.push_back({static_cast<int>(r), static_cast<int>(i)});
    }
  }
  return out;
}

bool isBitangent(Point2 a, Point2 b, const FreeSpaceTriangulation& fs) {
  if (a == b) return true;
  for (int side = 0; side < 2; ++side) {
    const Point2 e = side == 0 ? a : b;
    const Point2 o = side == 0 ? b : a;
    const int v = fs.vertexAt(e);
    if (v < 0) continue;
    const auto& vi = fs.info()[v];
    if (vi.prev < 0) continue;
    if (!vi.reflex) return false;
    const int s1 = orient2d(e, o, fs.point(vi.prev));
    const int s2 = orient2d(e, o, fs.point(vi.next));
    if (s1 * s2 < 0) return false;
  }
  return true;
}

Graph2D reducedVisibilityGraph2D(const FreeSpaceTriangulation& fs) {
  Graph2D g;
  std::vector<VisibilityRegion> regions;
  for (int v : fs.reflexVertices()) {
    g.points.push_back(fs.point(v));
    regions.push_back(visibilityQuery(fs.point(v), fs));
  }
  const int m = static_cast<int>(g.points.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (regions[i].seesVertex(fs.reflexVertices()[j]) && isBitangent(g.points[i], g.points[j], fs))
        g.edges.push_back({i, j});
  return g;
}

double shortestPath2D(const FreeSpaceTriangulation& fs, const Graph2D& g, Point2 s, Point2 t) {
  if (fs.classify(s) == Containment::Outside || fs.classify(t) == Containment::Outside) return INFINITY;
  const int m = static_cast<int>(g.points.size());
  const int src = m, dst = m + 1;
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(m + 2));
  auto link = [&](int a, int b, double w) {
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  };
  for (auto [i, j] : g.edges) link(i, j, distance(g.points[i], g.points[j]));
  const VisibilityRegion rs = visibilityQuery(s, fs), rt = visibilityQuery(t, fs);
  for (int i = 0; i < m; ++i) {
    if (rs.contains(g.points[i])) link(src, i, distance(s, g.points[i]));
    if (rt.contains(g.points[i])) link(dst, i, distance(t, g.points[i]));
  }
  if (rs.contains(t)) link(src, dst, distance(s, t));
  std::vector<double> d(static_cast<std::size_t>(m + 2), INFINITY);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du != d[u]) continue;
    if (u == dst) break;
    for (auto [v, w] : adj[u])
      if (du + w < d[v]) {
        d[v] = du + w;
        pq.push({d[v], v});
      }
  }
  return d[dst];
}

}  // namespace rvg
