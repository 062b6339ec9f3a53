#pragma once

#include <string>
#include <vector>

#include "rvg/geometry.hpp"
#include "rvg/layers.hpp"
#include "rvg/rvg.hpp"

namespace rvg {

struct Pose {
  double x = 0.0, y = 0.0, theta = 0.0;
  Point2 pos() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct QuerySpec {
  Pose start, goal;
  double alpha = 1.0, beta = 0.0;
};

enum class SegmentKind { Translate, Rotate };

struct PathSegment {
  SegmentKind kind = SegmentKind::Translate;
  double length = 0.0;  // Translate
  double dtheta = 0.0;  // Rotate, signed
};

struct PathSE2 {
  std::vector<Pose> waypoints;
  std::vector<PathSegment> segments;
  double totalCost = 0.0;
  double translationCost = 0.0;
  double rotationCost = 0.0;
};

enum class QueryStatus { Ok, NoPath, InfeasibleAtResolution };

struct QueryResult {
  QueryStatus status = QueryStatus::NoPath;
  PathSE2 path;
  std::string reason;
};

// Throws std::invalid_argument when alpha/beta are invalid or a pose is in collision.
void validateQuery(const QuerySpec& q, const Polygon& robot, const Polygon& workspace,
                   const std::vector<Polygon>& obstacles);

// Per-query overlay on a shared base graph. Nodes with id >= base size belong to the overlay.
class Augmentation {
 public:
  struct Node {
    Point2 pos;
    int layer = -1;  // -1 for the exact start and goal poses
    double theta = 0.0;
  };
  struct Arc {
    int to;
    EdgeWeight weight;
  };

  int baseSize() const { return base_; }
  int size() const { return base_ + static_cast<int>(nodes_.size()); }
  int start() const { return start_; }
  int goal() const { return goal_; }
  bool startPlaced() const { return startPlaced_; }
  bool goalPlaced() const { return goalPlaced_; }
  const Node& node(int id) const { return nodes_[id - base_]; }
  const std::vector<Arc>& extraArcs(int id) const;

 private:
  int base_ = 0;
  int start_ = -1, goal_ = -1;
  bool startPlaced_ = false, goalPlaced_ = false;
  std::vector<Node> nodes_;
  std::vector<std::vector<Arc>> overlayArcs_;
  std::vector<std::vector<Arc>> baseArcs_;  // indexed by base id; empty for untouched vertices
  std::vector<int> touched_;
  static const std::vector<Arc> kNone;

  int addNode(Node n);
  void link(int a, int b, EdgeWeight w);
  friend Augmentation addStartGoal(const RvgGraph&, const std::vector<Layer>&, const QuerySpec&);
};

// Links start and goal into every slice whose closed interval contains their angle, then continues
// in place through adjacent slices while the position stays free.
Augmentation addStartGoal(const RvgGraph& g, const std::vector<Layer>& layers, const QuerySpec& q);

double heuristic(const RvgGraph& g, const Augmentation& aug, int v, const QuerySpec& q);

QueryResult searchPath(const RvgGraph& g, const Augmentation& aug, const QuerySpec& q);

// Convenience: augmentation plus search, with the resolution-infeasible outcome.
QueryResult plan(const RvgGraph& g, const std::vector<Layer>& layers, const QuerySpec& q);

double pathCost(const PathSE2& p, double alpha, double beta);

struct ValidationOptions {
  double translationStep = 0.0;  // 0 selects 1e-2 of the robot diameter
  double rotationStep = 1e-3;
};

bool validatePath(const PathSE2& p, const Polygon& robot, const std::vector<Polygon>& obstacles,
                  const Polygon& workspace, const ValidationOptions& opts = {});

bool poseFree(const Pose& pose, const Polygon& robot, const std::vector<Polygon>& obstacles,
              const Polygon& workspace);

}  // namespace rvg
