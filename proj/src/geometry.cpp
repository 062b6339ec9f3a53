#include "rvg/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include "rvg/triangulation.hpp"

namespace bg = boost::geometry;

namespace rvg {

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPoly = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPoly>;

void appendRing(const std::vector<Point2>& ring, BPoly::ring_type& out) {
  out.clear();
  for (const Point2& p : ring) out.emplace_back(p.x, p.y);
  if (!ring.empty()) out.emplace_back(ring.front().x, ring.front().y);
}

BPoly toBoost(const Polygon& p) {
  BPoly out;
  appendRing(p.vertices(), out.outer());
  bg::correct(out);
  return out;
}

BMulti toBoost(const PolygonSet& s) {
  BMulti out;
  for (const Region& r : s.regions) {
    BPoly bp;
    appendRing(r.outer.vertices(), bp.outer());
    for (const Polygon& h : r.holes) {
      bp.inners().emplace_back();
      appendRing(h.vertices(), bp.inners().back());
    }
    bg::correct(bp);
    out.push_back(std::move(bp));
  }
  return out;
}

// Boost's robust overlay rounds through an integer grid, moving surviving input vertices by a
// few 1e-8 of the extent. Vertices are moved back onto the nearest input vertex.
class Snapper {
 public:
  void add(const Polygon& p) { pts_.insert(pts_.end(), p.vertices().begin(), p.vertices().end()); }
  void add(const PolygonSet& s) {
    for (const Region& r : s.regions) {
      add(r.outer);
      for (const Polygon& h : r.holes) add(h);
    }
  }
  void finish() {
    std::sort(pts_.begin(), pts_.end());
    if (pts_.empty()) return;
    const BBox b = bbox(pts_);
    tol_ = 1e-6 * std::max({1.0, b.maxx - b.minx, b.maxy - b.miny});
  }
  Point2 operator()(Point2 p) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), Point2{p.x - tol_, -std::numeric_limits<double>::infinity()});
    Point2 best = p;
    double bestD = tol_;
    for (; it != pts_.end() && it->x <= p.x + tol_; ++it) {
      const double d = distance(*it, p);
      if (d < bestD) {
        bestD = d;
        best = *it;
      }
    }
    return best;
  }

 private:
  std::vector<Point2> pts_;
  double tol_ = 0.0;
};

std::vector<Point2> fromRing(const BPoly::ring_type& ring, const Snapper* snap) {
  std::vector<Point2> pts;
  pts.reserve(ring.size());
  for (const BPoint& p : ring) pts.push_back(snap ? (*snap)({p.x(), p.y()}) : Point2{p.x(), p.y()});
  if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  return pts;
}

PolygonSet fromBoost(const BMulti& m, const Snapper* snap = nullptr) {
  PolygonSet out;
  for (const BPoly& bp : m) {
    std::vector<Point2> outer = normalizeRing(fromRing(bp.outer(), snap));
    if (outer.size() < 3 || std::fabs(signedArea(outer)) <= kGeomEps * kGeomEps) continue;
    Region r;
    r.outer = Polygon(std::move(outer));
    for (const auto& inner : bp.inners()) {
      std::vector<Point2> h = normalizeRing(fromRing(inner, snap));
      if (h.size() < 3 || std::fabs(signedArea(h)) <= kGeomEps * kGeomEps) continue;
      r.holes.push_back(Polygon::hole(std::move(h)));
    }
    out.regions.push_back(std::move(r));
  }
  return out;
}

double distanceToBoundary(std::span<const Point2> ring, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i)
    best = std::min(best, distancePointSegment(p, ring[i], ring[(i + 1) % ring.size()]));
  return best;
}

// Signed distance of p from the directed line (a, b), positive on the left.
double lineSide(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len = norm(d);
  if (len == 0.0) return 0.0;
  return cross(d, p - a) / len;
}

bool deepCross(Point2 p1, Point2 p2, Point2 q1, Point2 q2, double tol) {
  const double a1 = lineSide(p1, q1, q2), a2 = lineSide(p2, q1, q2);
  if (!((a1 > tol && a2 < -tol) || (a1 < -tol && a2 > tol))) return false;
  const double b1 = lineSide(q1, p1, p2), b2 = lineSide(q2, p1, p2);
  return (b1 > tol && b2 < -tol) || (b1 < -tol && b2 > tol);
}

bool deepInside(std::span<const Point2> ring, Point2 p, double tol) {
  return containsPoint(ring, p) == Containment::Inside && distanceToBoundary(ring, p) > tol;
}

}  // namespace

Point2 makePoint(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("non-finite coordinate");
  return {x, y};
}

double signedArea(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double a = 0.0;
  const Point2 o = ring[0];
  for (std::size_t i = 1; i + 1 < n; ++i) a += cross(ring[i] - o, ring[i + 1] - o);
  return 0.5 * a;
}

std::vector<Point2> normalizeRing(std::vector<Point2> pts, double eps) {
  for (const Point2& p : pts) makePoint(p.x, p.y);
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const Point2& p : pts) {
      if (!out.empty() && distance(out.back(), p) <= eps) {
        changed = true;
        continue;
      }
      out.push_back(p);
    }
    while (out.size() > 1 && distance(out.front(), out.back()) <= eps) {
      out.pop_back();
      changed = true;
    }
    pts.swap(out);
    if (pts.size() < 3) break;
    for (std::size_t i = 0; i < pts.size() && pts.size() >= 3;) {
      const std::size_t n = pts.size();
      const Point2 a = pts[(i + n - 1) % n], b = pts[i], c = pts[(i + 1) % n];
      if (orient2d(a, b, c) == 0 || distancePointSegment(b, a, c) <= eps) {
        pts.erase(pts.begin() + static_cast<long>(i));
        changed = true;
        if (i > 0) --i;
      } else {
        ++i;
      }
    }
  }
  return pts;
}

Polygon::Polygon(std::vector<Point2> pts) {
  v_ = normalizeRing(std::move(pts));
  if (v_.size() < 3) throw std::invalid_argument("polygon needs at least three distinct vertices");
  if (rvg::signedArea(v_) < 0.0) std::reverse(v_.begin(), v_.end());
}

Polygon Polygon::hole(std::vector<Point2> pts) {
  Polygon p(std::move(pts));
  std::reverse(p.v_.begin(), p.v_.end());
  return p;
}

Polygon Polygon::trusted(std::vector<Point2> pts) {
  Polygon p;
  p.v_ = std::move(pts);
  return p;
}

double Region::area() const {
  double a = outer.area();
  for (const Polygon& h : holes) a -= h.area();
  return a;
}

double PolygonSet::area() const {
  double a = 0.0;
  for (const Region& r : regions) a += r.area();
  return a;
}

std::size_t PolygonSet::vertexCount() const {
  std::size_t n = 0;
  for (const Region& r : regions) {
    n += r.outer.size();
    for (const Polygon& h : r.holes) n += h.size();
  }
  return n;
}

BBox bbox(std::span<const Point2> pts) {
  BBox b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point2& p : pts) {
    b.minx = std::min(b.minx, p.x);
    b.miny = std::min(b.miny, p.y);
    b.maxx = std::max(b.maxx, p.x);
    b.maxy = std::max(b.maxy, p.y);
  }
  return b;
}

bool isReflex(const Polygon& poly, std::size_t i) {
  return orient2d(poly.prev(i), poly[i], poly.next(i)) < 0;
}

bool isConvex(const Polygon& poly) {
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (orient2d(poly.prev(i), poly[i], poly.next(i)) < 0) return false;
  return true;
}

bool isSimple(const Polygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = v[i], b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 c = v[j], d = v[(j + 1) % n];
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges may only share their common vertex.
        const Point2 shared = (j == i + 1) ? b : a;
        const Point2 far1 = (j == i + 1) ? a : b;
        const Point2 far2 = (j == i + 1) ? d : c;
        if (orient2d(far1, shared, far2) == 0 && dot(far1 - shared, far2 - shared) > 0) return false;
        continue;
      }
      if (segmentsProperlyCross(a, b, c, d)) return false;
      if (onSegment(c, a, b) || onSegment(d, a, b) || onSegment(a, c, d) || onSegment(b, c, d))
        return false;
    }
  }
  return true;
}

std::vector<Point2> convexHull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient2d(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient2d(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

Polygon translate(const Polygon& p, Point2 d) {
  std::vector<Point2> v;
  v.reserve(p.size());
  for (const Point2& q : p.vertices()) v.push_back(q + d);
  return Polygon::trusted(std::move(v));
}

Polygon rotate(const Polygon& p, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<Point2> v;
  v.reserve(p.size());
  for (const Point2& q : p.vertices()) v.push_back({c * q.x - s * q.y, s * q.x + c * q.y});
  return Polygon::trusted(std::move(v));
}

Point2 centroid(const Polygon& p) {
  const auto& v = p.vertices();
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 u = v[i], w = v[(i + 1) % v.size()];
    const double c = cross(u, w);
    a += c;
    cx += (u.x + w.x) * c;
    cy += (u.y + w.y) * c;
  }
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

Polygon centered(const Polygon& p) { return translate(p, -centroid(p)); }

Polygon invert(const Polygon& p) {
  // Point reflection is a rotation by pi, so the winding is unchanged.
  std::vector<Point2> v;
  v.reserve(p.size());
  for (const Point2& q : p.vertices()) v.push_back(-q);
  return Polygon::trusted(std::move(v));
}

std::vector<Point2> minkowskiSumConvexPoints(std::span<const Point2> a, std::span<const Point2> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Point2> sums;
  sums.reserve(a.size() * b.size());
  for (const Point2& p : a)
    for (const Point2& q : b) sums.push_back(p + q);
  return convexHull(std::move(sums));
}

Polygon minkowskiSumConvex(const Polygon& a, const Polygon& b) {
  if (a.size() < 3 || b.size() < 3) throw std::invalid_argument("minkowskiSumConvex: degenerate input");
  if (!isConvex(a) || !isConvex(b) || !a.isCcw() || !b.isCcw())
    throw std::invalid_argument("minkowskiSumConvex: input must be convex and counterclockwise");
  auto lowest = [](const Polygon& p) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i].y < p[k].y || (p[i].y == p[k].y && p[i].x < p[k].x)) k = i;
    return k;
  };
  const std::size_t n = a.size(), m = b.size();
  const std::size_t ia = lowest(a), ib = lowest(b);
  std::vector<Point2> out;
  out.reserve(n + m);
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    out.push_back(a.at(ia + i) + b.at(ib + j));
    const Point2 ea = a.at(ia + i + 1) - a.at(ia + i);
    const Point2 eb = b.at(ib + j + 1) - b.at(ib + j);
    if (i == n) {
      ++j;
      continue;
    }
    if (j == m) {
      ++i;
      continue;
    }
    const double c = cross(ea, eb);
    if (c > 0) {
      ++i;
    } else if (c < 0) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  std::vector<Point2> norm = normalizeRing(std::move(out), 0.0);
  return Polygon::trusted(std::move(norm));
}

PolygonSet minkowskiSumGeneral(const Polygon& a, const Polygon& b) {
  if (a.size() < 3 || b.size() < 3 || a.area() <= 0.0 || b.area() <= 0.0)
    throw std::invalid_argument("minkowskiSumGeneral: degenerate input");
  const std::vector<Polygon> pa = isConvex(a) ? std::vector<Polygon>{a} : triangulatePolygon(a);
  const std::vector<Polygon> pb = isConvex(b) ? std::vector<Polygon>{b} : triangulatePolygon(b);
  std::vector<Polygon> pieces;
  pieces.reserve(pa.size() * pb.size());
  for (const Polygon& x : pa)
    for (const Polygon& y : pb) pieces.push_back(minkowskiSumConvex(x, y));
  return unionMerge(pieces);
}

PolygonSet unionMerge(const std::vector<Polygon>& polys) {
  std::vector<BMulti> level;
  level.reserve(polys.size());
  for (const Polygon& p : polys) {
    if (p.size() < 3) continue;
    BMulti m;
    m.push_back(toBoost(p));
    level.push_back(std::move(m));
  }
  if (level.empty()) return {};
  Snapper snap;
  for (const Polygon& p : polys) snap.add(p);
  snap.finish();
  while (level.size() > 1) {
    std::vector<BMulti> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      BMulti u;
      bg::union_(level[i], level[i + 1], u);
      next.push_back(std::move(u));
    }
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level.swap(next);
  }
  return fromBoost(level.front(), &snap);
}

PolygonSet difference(const Polygon& a, const PolygonSet& b) {
  BMulti ma;
  ma.push_back(toBoost(a));
  const BMulti mb = toBoost(b);
  BMulti out;
  bg::difference(ma, mb, out);
  Snapper snap;
  snap.add(a);
  snap.add(b);
  snap.finish();
  return fromBoost(out, &snap);
}

PolygonSet intersection(const PolygonSet& a, const PolygonSet& b) {
  BMulti out;
  bg::intersection(toBoost(a), toBoost(b), out);
  Snapper snap;
  snap.add(a);
  snap.add(b);
  snap.finish();
  return fromBoost(out, &snap);
}

PolygonSet toSet(const Polygon& p) {
  PolygonSet s;
  s.regions.push_back({p, {}});
  return s;
}

Containment containsPoint(std::span<const Point2> ring, Point2 p) {
  const std::size_t n = ring.size();
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i], b = ring[(i + 1) % n];
    const int o = orient2d(a, b, p);
    if (o == 0 && onSegment(p, a, b)) return Containment::OnBoundary;
    if (a.y <= p.y) {
      if (b.y > p.y && o > 0) ++winding;
    } else if (b.y <= p.y && o < 0) {
      --winding;
    }
  }
  return winding != 0 ? Containment::Inside : Containment::Outside;
}

Containment containsPoint(const Polygon& poly, Point2 p) { return containsPoint(poly.vertices(), p); }

Containment containsPoint(const Region& r, Point2 p) {
  const Containment c = containsPoint(r.outer, p);
  if (c != Containment::Inside) return c;
  for (const Polygon& h : r.holes) {
    const Containment ch = containsPoint(h, p);
    if (ch == Containment::OnBoundary) return ch;
    if (ch == Containment::Inside) return Containment::Outside;
  }
  return Containment::Inside;
}

Containment containsPoint(const PolygonSet& s, Point2 p) {
  bool boundary = false;
  for (const Region& r : s.regions) {
    const Containment c = containsPoint(r, p);
    if (c == Containment::Inside) return c;
    if (c == Containment::OnBoundary) boundary = true;
  }
  return boundary ? Containment::OnBoundary : Containment::Outside;
}

double distancePointSegment(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(p, a + t * d);
}

bool onSegment(Point2 p, Point2 a, Point2 b) {
  if (orient2d(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segmentsProperlyCross(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  const int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool polygonsIntersect(const Polygon& a, const Polygon& b, double tol) {
  const BBox ba = bbox(a.vertices()), bb = bbox(b.vertices());
  if (ba.maxx < bb.minx + tol || bb.maxx < ba.minx + tol || ba.maxy < bb.miny + tol ||
      bb.maxy < ba.miny + tol)
    return false;
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const Point2 p1 = va[i], p2 = va[(i + 1) % va.size()];
    for (std::size_t j = 0; j < vb.size(); ++j) {
      if (deepCross(p1, p2, vb[j], vb[(j + 1) % vb.size()], tol)) return true;
    }
  }
  for (const Point2& p : va)
    if (deepInside(vb, p, tol)) return true;
  for (const Point2& p : vb)
    if (deepInside(va, p, tol)) return true;
  // Coincident outlines: probe just inside each edge.
  constexpr double kProbe = 1e-7;
  auto probe = [&](const std::vector<Point2>& own, const std::vector<Point2>& other) {
    const double sgn = signedArea(own) >= 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < own.size(); ++i) {
      const Point2 p = own[i], q = own[(i + 1) % own.size()];
      const Point2 d = q - p;
      const double len = norm(d);
      if (len == 0.0) continue;
      const Point2 inward = Point2{-d.y, d.x} * (sgn * kProbe / len);
      if (deepInside(other, 0.5 * (p + q) + inward, tol)) return true;
    }
    return false;
  };
  return probe(va, vb) || probe(vb, va);
}

bool polygonInside(const Polygon& a, const Polygon& container, double tol) {
  const auto& va = a.vertices();
  const auto& vc = container.vertices();
  for (const Point2& p : va) {
    if (containsPoint(vc, p) == Containment::Outside && distanceToBoundary(vc, p) > tol) return false;
  }
  for (std::size_t i = 0; i < va.size(); ++i) {
    const Point2 p1 = va[i], p2 = va[(i + 1) % va.size()];
    for (std::size_t j = 0; j < vc.size(); ++j)
      if (deepCross(p1, p2, vc[j], vc[(j + 1) % vc.size()], tol)) return false;
  }
  return true;
}

std::vector<Polygon> triangulatePolygon(const Polygon& p) {
  const Triangulation t = Triangulation::fromRings({p.vertices()});
  std::vector<Polygon> out;
  for (const auto& tr : t.tris()) {
    if (!tr.inside) continue;
    out.push_back(Polygon::trusted({t.points()[tr.v[0]], t.points()[tr.v[1]], t.points()[tr.v[2]]}));
  }
  return out;
}

}  // namespace rvg
