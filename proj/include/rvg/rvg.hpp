#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "rvg/geometry.hpp"
#include "rvg/layers.hpp"

namespace rvg {

namespace detail {
class Propagator;
}

struct EdgeWeight {
  double translation = 0.0;
  double rotation = 0.0;
};

// alpha * translation + beta * rotation; throws on negative weights or coefficients.
double edgeCost(const EdgeWeight& w, double alpha, double beta);

struct RvgVertex {
  Point2 pos;
  int layer = 0;
  AngleInterval interval;
  int originLayer = 0;  // layer where the reflex vertex was generated
  int originIndex = 0;  // its index in that layer
  int hops = 0;         // slices between this copy and its origin along the propagation chain
  bool native() const { return hops == 0; }
};

struct PropagationOptions {
  // Maximum number of slices a vertex travels from its origin; substitutes at this depth are not
  // propagated further.
  int maxHops = 1;
  static constexpr int kUnlimited = 1 << 30;
};

struct RvgEdge {
  int a = 0, b = 0;
  EdgeWeight weight;
};

struct PropagationStats {
  std::int64_t eligibilityChecks = 0;
  std::int64_t substitutes = 0;
  std::int64_t crossConnections = 0;  // accepted (v, v') pairs, each realised as two edges
};

class RvgGraph {
 public:
  int resolution() const { return n_; }
  const std::vector<RvgVertex>& vertices() const { return vertices_; }
  const std::vector<RvgEdge>& edges() const { return edges_; }
  // Vertex ids registered in layer l (the D entry of l).
  const std::vector<int>& registered(int l) const { return D_[l]; }
  std::vector<std::pair<int, int>> dictionary(int l) const;
  int vertexAt(int layer, Point2 p) const;
  double meanAngle(int v) const { return vertices_[v].interval.mean(); }
  const PropagationStats& stats() const { return stats_; }

  // Adjacency as (neighbour, edge id) pairs, sorted by neighbour id.
  struct Arc {
    int to;
    int edge;
  };
  std::span<const Arc> neighbours(int v) const {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }

  // Assembles a graph from raw parts (used by deserialisation).
  static RvgGraph fromParts(int n, std::vector<RvgVertex> vertices, std::vector<RvgEdge> edges);

 private:
  int n_ = 0;
  std::vector<RvgVertex> vertices_;
  std::vector<RvgEdge> edges_;
  std::vector<std::vector<int>> D_;
  std::vector<std::map<Point2, int>> index_;
  std::vector<int> offsets_;
  std::vector<Arc> arcs_;
  PropagationStats stats_;

  void buildIndex();
  void buildAdjacency();
  friend class detail::Propagator;
};

// True iff v lies in the visibility region (within `target`) of the vertex at vPrime and the pair
// is bitangent against target's grown obstacles. Identical positions are always eligible.
bool crossLayerEligible(Point2 v, Point2 vPrime, const Layer& target, const VisibilityRegion& regionOfVPrime);

// Stitches the layers into one graph. Vertices propagate to adjacent slices until no further
// registration is possible; translation edges connect every eligible pair registered in a slice.
RvgGraph propagate(const std::vector<Layer>& layers, const PropagationOptions& options = {});

}  // namespace rvg
