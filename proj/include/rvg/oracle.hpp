#pragma once

#include <utility>
#include <vector>

#include "rvg/geometry.hpp"
#include "rvg/layers.hpp"
#include "rvg/query.hpp"
#include "rvg/rvg.hpp"

namespace rvg {

// Brute force: true iff segment (a, b) stays in the closed set `free` (boundary tolerance kGeomEps).
bool segmentVisible(Point2 a, Point2 b, const PolygonSet& free);

// Single-source costs under alpha * translation + beta * rotation; +inf when unreachable.
std::vector<double> dijkstra(int vertexCount, const std::vector<RvgEdge>& edges, int source, double alpha,
                             double beta);

// Every boundary vertex of the free space, joined whenever the segment between them is free.
struct FullVisibilityGraph {
  PolygonSet free;
  std::vector<Point2> points;
  std::vector<std::pair<int, int>> edges;
};
FullVisibilityGraph fullVisibilityGraph2D(const Polygon& workspace, const std::vector<Polygon>& obstacles);

double fullShortestPath2D(const FullVisibilityGraph& g, Point2 s, Point2 t);

// Repeats all-pairs neighbour-slice checks until nothing changes. Vertices carry the same hop depth
// semantics as PropagationOptions::maxHops.
RvgGraph naivePropagate(const std::vector<Layer>& layers, int maxHops);

struct LatticeSpec {
  double step = 0.0;        // grid spacing h
  int angularSteps = 72;    // the angular step is 2*pi / angularSteps
  double rotationCheck = 1e-2;
  double translationCheck = 0.0;  // 0 selects step / 4
};

// Dijkstra over an 8-connected translation grid crossed with a cyclic angle grid, with true-robot
// collision checks. Start sits on the lattice; the goal is reached by one final translate and rotate.
QueryResult latticePlan(const Polygon& robot, const Polygon& workspace, const std::vector<Polygon>& obstacles,
                        const QuerySpec& q, const LatticeSpec& spec);

}  // namespace rvg
