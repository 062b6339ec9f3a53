#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rvg/geometry.hpp"
#include "rvg/query.hpp"
#include "rvg/rvg.hpp"

namespace rvg {

struct Scene {
  std::string name;
  Polygon workspace;
  std::vector<Polygon> obstacles;
  Polygon robot;
  int n = 36;
  double alpha = 1.0, beta = 0.0;
  std::vector<QuerySpec> queries;
  std::optional<std::uint64_t> seed;
};

bool operator==(const Scene& a, const Scene& b);

// Schema violation; path names the offending field, e.g. "obstacles[2][1]".
class SceneError : public std::runtime_error {
 public:
  SceneError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

Scene parseScene(std::string_view json);
std::string serializeScene(const Scene& s);
void validateScene(const Scene& s);  // throws SceneError
Scene loadScene(const std::string& path);
void saveScene(const std::string& path, const Scene& s);

struct MapParams {
  double width = 100.0, height = 100.0;
  int count = 15;
  double minRadius = 3.0, maxRadius = 9.0;
  std::uint64_t seed = 0;
  Polygon robot = Polygon({{-1.5, -0.5}, {1.5, -0.5}, {1.5, 0.5}, {-1.5, 0.5}});
};

MapParams simplePreset(std::uint64_t seed);
MapParams hardPreset(std::uint64_t seed);
// 10x10 desk-scale maps with a 2 x 0.8 robot, sized for the lattice oracle.
MapParams smallPreset(std::uint64_t seed);

// Convex hulls of 5 to 9 points in random disks, overlapping ones merged. Throws
// std::runtime_error when the free area drops below four robot areas.
Scene generateRandomMap(const MapParams& p);

// Bar robot between start and goal separated by a wall: a short route through a slot that forces the
// bar upright, and a long route around the wall end that needs no rotation.
Scene twoRouteScene();

// Unit square robot (turned by pi/8) in a straight corridor of width diagonal * (1 + margin). The
// start and goal poses put a diagonal across the corridor.
Scene corridorScene(double margin);
inline constexpr double kCorridorTheta = kPi / 8;

struct BenchRecord {
  std::string scene;
  int n = 0;
  double buildSeconds = 0.0, searchSeconds = 0.0;
  double cost = 0.0, translationCost = 0.0, rotationCost = 0.0;
  long long nv = 0, ne = 0;
};

inline constexpr std::string_view kBenchHeader = "scene,n,build_s,search_s,cost,trans_cost,rot_cost,nv,ne";

std::string writeBenchCsv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> parseBenchCsv(std::string_view csv);

struct SvgOptions {
  double width = 800.0;
  bool showRotationEdges = false;
};

std::string renderSvg(const Scene& scene, const RvgGraph* graph = nullptr, const PathSE2* path = nullptr,
                      const SvgOptions& opts = {});

std::string pathToJson(const QueryResult& r, const QuerySpec& q);

inline constexpr std::string_view kGraphMagic = "rvg-graph";
inline constexpr int kGraphVersion = 1;

// The scene is embedded so that slices can be rebuilt when the graph is loaded for queries.
std::string serializeGraph(const Scene& scene, const RvgGraph& g);
struct LoadedGraph {
  Scene scene;
  RvgGraph graph;
};
LoadedGraph parseGraph(std::string_view json);  // throws std::runtime_error on a bad header or version

}  // namespace rvg
