#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "rvg/geometry.hpp"
#include "rvg/triangulation.hpp"

namespace rvg {

struct VertexRef {
  int ring = -1;
  int index = -1;
  friend bool operator==(VertexRef a, VertexRef b) { return a.ring == b.ring && a.index == b.index; }
};

// Triangulated free space plus the boundary topology needed for reflex and tangency tests.
class FreeSpaceTriangulation {
 public:
  struct VertexInfo {
    int prev = -1;
    int next = -1;
    bool reflex = false;
    VertexRef ref;
  };

  FreeSpaceTriangulation() = default;
  static FreeSpaceTriangulation fromFreeSpace(PolygonSet free);

  bool empty() const { return free_.empty(); }
  const PolygonSet& freeSpace() const { return free_; }
  const Triangulation& tri() const { return tri_; }
  const std::vector<std::vector<Point2>>& rings() const { return rings_; }
  const std::vector<VertexInfo>& info() const { return info_; }
  // Reflex boundary vertices as triangulation vertex ids, in ring order.
  const std::vector<int>& reflexVertices() const { return reflex_; }
  const Point2& point(int v) const { return tri_.points()[v]; }

  int vertexAt(Point2 p) const;
  // Triangle containing p in the closed free space, or -1.
  int locateFree(Point2 p) const;
  Containment classify(Point2 p) const;

 private:
  PolygonSet free_;
  Triangulation tri_;
  std::vector<std::vector<Point2>> rings_;
  std::vector<VertexInfo> info_;
  std::vector<int> reflex_;
  struct Hash {
    std::size_t operator()(const Point2& p) const;
  };
  std::unordered_map<Point2, int, Hash> index_;
};

FreeSpaceTriangulation triangulateFreeSpace(const Polygon& workspace, const PolygonSet& obstacles);

// Star-shaped region seen from origin: a fan of wedges, each bounded by two rays and a
// constrained edge.
class VisibilityRegion {
 public:
  struct Wedge {
    Point2 right, left;  // points on the bounding rays, right is clockwise of left
    Point2 e0, e1;       // blocking edge
    double angR = 0, angL = 0;
  };

  const Point2& origin() const { return q_; }
  const std::vector<Wedge>& wedges() const { return wedges_; }
  // Triangulation vertex ids visible from the origin.
  const std::vector<int>& visible() const { return visible_; }
  bool contains(Point2 p) const;
  // Axis-aligned box enclosing the region; points outside it are never contained.
  const BBox& bounds() const { return bounds_; }
  bool mayContain(Point2 p) const {
    return p.x >= bounds_.minx && p.x <= bounds_.maxx && p.y >= bounds_.miny && p.y <= bounds_.maxy;
  }
  bool seesVertex(int v) const;
  std::vector<Point2> polygon() const;
  double area() const;

 private:
  Point2 q_;
  std::vector<Wedge> wedges_;
  std::vector<double> reach_;
  BBox bounds_;  // running maximum of angL over the sorted wedges
  std::vector<int> visible_;
  bool wedgeContains(const Wedge& w, Point2 p) const;
  friend VisibilityRegion visibilityQuery(Point2 v, const FreeSpaceTriangulation& fs);
};

VisibilityRegion visibilityQuery(Point2 v, const FreeSpaceTriangulation& fs);

std::vector<VertexRef> visibleVertices(const VisibilityRegion& region, const FreeSpaceTriangulation& fs);

// Locally tangent at both endpoints against the boundary of fs. Endpoints that are not boundary
// vertices of fs impose no condition; a boundary vertex that is not reflex fails.
bool isBitangent(Point2 a, Point2 b, const FreeSpaceTriangulation& fs);

// Reduced visibility graph of a planar free space: reflex vertices joined by bitangent, mutually
// visible segments.
struct Graph2D {
  std::vector<Point2> points;
  std::vector<std::pair<int, int>> edges;
};
Graph2D reducedVisibilityGraph2D(const FreeSpaceTriangulation& fs);

// Shortest collision-free distance for a point robot, or +inf when t is unreachable.
double shortestPath2D(const FreeSpaceTriangulation& fs, const Graph2D& g, Point2 s, Point2 t);

}  // namespace rvg
