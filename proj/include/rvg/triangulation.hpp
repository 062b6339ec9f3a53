#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rvg/geometry.hpp"

namespace rvg {

// Constrained triangulation of a set of closed rings. Triangles with odd ring-crossing
// parity are flagged inside. The enclosing super triangle is kept so that point
// location is total.
class Triangulation {
 public:
  struct Tri {
    std::array<int, 3> v{};    // counterclockwise
    std::array<int, 3> nbr{};  // nbr[i] lies across the edge opposite v[i]; -1 if none
    std::array<std::uint8_t, 3> fixed{};
    bool inside = false;
  };

  static Triangulation fromRings(const std::vector<std::vector<Point2>>& rings);

  const std::vector<Point2>& points() const { return pts_; }
  const std::vector<Tri>& tris() const { return tris_; }
  int realPointCount() const { return nReal_; }
  bool isSuper(int v) const { return v >= nReal_; }

  // Vertex id for an exact coordinate, or -1.
  int vertexAt(Point2 p) const;
  // Index of ring vertex (ring, i) after deduplication.
  int ringVertex(std::size_t ring, std::size_t i) const { return ringIds_[ring][i]; }
  const std::vector<std::vector<int>>& ringIds() const { return ringIds_; }

  // Some triangle whose closed region contains p.
  int locate(Point2 p, int hint = -1) const;
  // Triangles incident to v, in counterclockwise order around v.
  std::vector<int> incident(int v) const;
  int edgeIndex(int t, int a, int b) const;  // index i such that the edge opposite v[i] is {a, b}
  std::size_t insideCount() const;
  double insideArea() const;

 private:
  std::vector<Point2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> vtri_;
  std::vector<std::vector<int>> ringIds_;
  int nReal_ = 0;

  friend class TriangulationBuilder;
};

}  // namespace rvg
