#include "rvg/io_scenes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rvg/layers.hpp"

namespace rvg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SceneError(path, msg); }

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void onlyKeys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "(root)" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) fail(at(path, it.key()), "unknown field");
  }
}

const json& need(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(at(path, key), "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

Point2 point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
}

Pose pose(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected [x, y, theta]");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1)), number(j[2], at(path, 2))};
}

Polygon polygon(const json& j, const std::string& path, bool normalize) {
  if (!j.is_array()) fail(path, "expected an array of points");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point(j[i], at(path, i)));
  if (pts.size() < 3) fail(path, "a polygon needs at least three points");
  Polygon p = normalize ? Polygon(pts) : Polygon::trusted(pts);
  if (!normalize && !p.isCcw()) p = Polygon(pts);
  if (p.size() < 3 || p.area() <= 0.0) fail(path, "degenerate polygon");
  if (!isSimple(p)) fail(path, "polygon is not simple");
  return p;
}

json toJson(const Polygon& p) {
  json a = json::array();
  for (const Point2& v : p.vertices()) a.push_back({v.x, v.y});
  return a;
}

json toJson(const Pose& p) { return json::array({p.x, p.y, p.theta}); }

json sceneJson(const Scene& s) {
  json j;
  j["name"] = s.name;
  j["workspace"] = toJson(s.workspace);
  j["obstacles"] = json::array();
  for (const Polygon& o : s.obstacles) j["obstacles"].push_back(toJson(o));
  j["robot"] = toJson(s.robot);
  j["defaults"] = {{"n", s.n}, {"alpha", s.alpha}, {"beta", s.beta}};
  j["queries"] = json::array();
  for (const QuerySpec& q : s.queries)
    j["queries"].push_back({{"start", toJson(q.start)}, {"goal", toJson(q.goal)}, {"alpha", q.alpha}, {"beta", q.beta}});
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

Scene sceneFrom(const json& j, const std::string& root) {
  onlyKeys(j, root, {"name", "workspace", "obstacles", "robot", "defaults", "queries", "seed"});
  Scene s;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) fail(at(root, "name"), "expected a string");
    s.name = it->get<std::string>();
  }
  s.workspace = polygon(need(j, root, "workspace"), at(root, "workspace"), true);
  if (auto it = j.find("obstacles"); it != j.end()) {
    if (!it->is_array()) fail(at(root, "obstacles"), "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      s.obstacles.push_back(polygon((*it)[i], at(at(root, "obstacles"), i), true));
  }
  s.robot = polygon(need(j, root, "robot"), at(root, "robot"), false);
  if (auto it = j.find("defaults"); it != j.end()) {
    const std::string p = at(root, "defaults");
    onlyKeys(*it, p, {"n", "alpha", "beta"});
    if (auto n = it->find("n"); n != it->end()) {
      if (!n->is_number_integer()) fail(at(p, "n"), "expected an integer");
      s.n = n->get<int>();
    }
    if (auto a = it->find("alpha"); a != it->end()) s.alpha = number(*a, at(p, "alpha"));
    if (auto b = it->find("beta"); b != it->end()) s.beta = number(*b, at(p, "beta"));
  }
  if (auto it = j.find("queries"); it != j.end()) {
    if (!it->is_array()) fail(at(root, "queries"), "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = at(at(root, "queries"), i);
      const json& q = (*it)[i];
      onlyKeys(q, p, {"start", "goal", "alpha", "beta"});
      QuerySpec spec;
      spec.start = pose(need(q, p, "start"), at(p, "start"));
      spec.goal = pose(need(q, p, "goal"), at(p, "goal"));
      spec.alpha = q.contains("alpha") ? number(q["alpha"], at(p, "alpha")) : s.alpha;
      spec.beta = q.contains("beta") ? number(q["beta"], at(p, "beta")) : s.beta;
      s.queries.push_back(spec);
    }
  }
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) fail(at(root, "seed"), "expected a non-negative integer");
    s.seed = it->get<std::uint64_t>();
  }
  validateScene(s);
  return s;
}

json parseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail("(root)", std::string("malformed JSON: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

bool operator==(const Scene& a, const Scene& b) {
  if (a.name != b.name || !(a.workspace == b.workspace) || a.obstacles != b.obstacles || !(a.robot == b.robot))
    return false;
  if (a.n != b.n || a.alpha != b.alpha || a.beta != b.beta || a.seed != b.seed) return false;
  if (a.queries.size() != b.queries.size()) return false;
  for (std::size_t i = 0; i < a.queries.size(); ++i) {
    const QuerySpec &p = a.queries[i], &q = b.queries[i];
    if (!(p.start == q.start) || !(p.goal == q.goal) || p.alpha != q.alpha || p.beta != q.beta) return false;
  }
  return true;
}

void validateScene(const Scene& s) {
  if (s.n < 2) fail("defaults.n", "resolution must be at least 2");
  if (!(s.alpha >= 0) || !(s.beta >= 0) || s.alpha + s.beta <= 0) fail("defaults", "alpha and beta must be >= 0 with a positive sum");
  for (std::size_t i = 0; i < s.obstacles.size(); ++i)
    if (!polygonInside(s.obstacles[i], s.workspace)) fail(at("obstacles", i), "obstacle is not inside the workspace");
  const BBox w = bbox(s.workspace.vertices()), r = bbox(s.robot.vertices());
  if (r.maxx - r.minx > w.maxx - w.minx || r.maxy - r.miny > w.maxy - w.miny) fail("robot", "robot does not fit in the workspace");
  for (std::size_t i = 0; i < s.queries.size(); ++i) {
    const QuerySpec& q = s.queries[i];
    if (!(q.alpha >= 0) || !(q.beta >= 0) || q.alpha + q.beta <= 0)
      fail(at("queries", i), "alpha and beta must be >= 0 with a positive sum");
  }
}

Scene parseScene(std::string_view text) { return sceneFrom(parseJson(text), ""); }

std::string serializeScene(const Scene& s) { return sceneJson(s).dump(2) + "\n"; }

Scene loadScene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scene file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseScene(ss.str());
}

void saveScene(const std::string& path, const Scene& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write scene file " + path);
  out << serializeScene(s);
}

MapParams simplePreset(std::uint64_t seed) {
  MapParams p;
  p.count = 15;
  p.minRadius = 4.0;
  p.maxRadius = 10.0;
  p.seed = seed;
  return p;
}

MapParams hardPreset(std::uint64_t seed) {
  MapParams p;
  p.count = 100;
  p.minRadius = 1.5;
  p.maxRadius = 4.5;
  p.seed = seed;
  return p;
}

MapParams smallPreset(std::uint64_t seed) {
  MapParams p;
  p.width = p.height = 10.0;
  p.count = 6;
  p.minRadius = 0.8;
  p.maxRadius = 1.8;
  p.seed = seed;
  p.robot = Polygon({{-1.0, -0.4}, {1.0, -0.4}, {1.0, 0.4}, {-1.0, 0.4}});
  return p;
}

Scene generateRandomMap(const MapParams& p) {
  if (!(p.width > 0) || !(p.height > 0) || p.count < 0 || !(p.minRadius > 0) || p.maxRadius < p.minRadius)
    throw std::invalid_argument("invalid map parameters");
  if (2 * p.maxRadius >= std::min(p.width, p.height)) throw std::invalid_argument("obstacles larger than the workspace");
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pointCount(5, 9);
  std::vector<Polygon> raw;
  while (static_cast<int>(raw.size()) < p.count) {
    const double r = p.minRadius + (p.maxRadius - p.minRadius) * u(rng);
    const Point2 c{r + (p.width - 2 * r) * u(rng), r + (p.height - 2 * r) * u(rng)};
    std::vector<Point2> pts;
    const int m = pointCount(rng);
    for (int i = 0; i < m; ++i) {
      const double rho = r * std::sqrt(u(rng)), phi = kTwoPi * u(rng);
      pts.push_back({c.x + rho * std::cos(phi), c.y + rho * std::sin(phi)});
    }
    std::vector<Point2> hull = convexHull(pts);
    if (hull.size() < 3) continue;
    Polygon poly(hull);
    if (poly.size() < 3 || poly.area() < 1e-6 * r * r) continue;
    raw.push_back(std::move(poly));
  }

  Scene s;
  s.name = "random-" + std::to_string(p.seed);
  s.seed = p.seed;
  s.workspace = Polygon({{0, 0}, {p.width, 0}, {p.width, p.height}, {0, p.height}});
  s.robot = p.robot;
  // Holes enclosed by merged obstacles are unreachable and are filled.
  for (const Region& reg : unionMerge(raw).regions) s.obstacles.push_back(reg.outer);
  std::sort(s.obstacles.begin(), s.obstacles.end(), [](const Polygon& a, const Polygon& b) {
    return a.vertices().front() < b.vertices().front();
  });
  double blocked = 0.0;
  for (const Polygon& o : s.obstacles) blocked += o.area();
  if (p.width * p.height - blocked < 4.0 * p.robot.area()) throw std::runtime_error("workspace saturated by obstacles");

  auto sample = [&](double x0, double x1) -> std::optional<Pose> {
    for (int attempt = 0; attempt < 20000; ++attempt) {
      const Pose q{p.width * (x0 + (x1 - x0) * u(rng)), p.height * (0.05 + 0.9 * u(rng)), kTwoPi * u(rng)};
      if (poseFree(q, s.robot, s.obstacles, s.workspace)) return q;
    }
    return std::nullopt;
  };
  const auto a = sample(0.03, 0.2), b = sample(0.8, 0.97);
  if (a && b) s.queries.push_back({*a, *b, s.alpha, s.beta});
  validateScene(s);
  return s;
}

Scene twoRouteScene() {
  Scene s;
  s.name = "two-route";
  s.workspace = Polygon({{0, 0}, {40, 0}, {40, 20}, {0, 20}});
  s.obstacles = {Polygon({{0, 9}, {11.3, 9}, {11.3, 11}, {0, 11}}), Polygon({{12.7, 9}, {32, 9}, {32, 11}, {12.7, 11}})};
  s.robot = Polygon({{-1.5, -0.3}, {1.5, -0.3}, {1.5, 0.3}, {-1.5, 0.3}});
  s.queries.push_back({{12, 4, 0}, {12, 16, 0}, 1.0, 0.0});
  validateScene(s);
  return s;
}

Scene corridorScene(double margin) {
  if (!(margin > 0)) throw std::invalid_argument("corridor margin must be positive");
  Scene s;
  char buf[48];
  std::snprintf(buf, sizeof buf, "corridor-%g", margin);
  s.name = buf;
  std::vector<Point2> sq;
  for (int k = 0; k < 4; ++k) {
    const double a = kPi / 4 + kCorridorTheta + k * kPi / 2;
    sq.push_back({std::sqrt(0.5) * std::cos(a), std::sqrt(0.5) * std::sin(a)});
  }
  s.robot = Polygon(sq);
  const double w = std::sqrt(2.0) * (1.0 + margin);
  s.workspace = Polygon({{0, 0}, {8, 0}, {8, w}, {0, w}});
  s.queries.push_back({{1.5, w / 2, kCorridorTheta}, {6.5, w / 2, kCorridorTheta}, 1.0, 0.0});
  validateScene(s);
  return s;
}

std::string writeBenchCsv(const std::vector<BenchRecord>& records) {
  std::string out(kBenchHeader);
  out += '\n';
  for (const BenchRecord& r : records) {
    std::string name = r.scene;
    std::replace(name.begin(), name.end(), ',', '_');
    out += name + ',' + std::to_string(r.n) + ',' + fmt(r.buildSeconds) + ',' + fmt(r.searchSeconds) + ',' + fmt(r.cost) +
           ',' + fmt(r.translationCost) + ',' + fmt(r.rotationCost) + ',' + std::to_string(r.nv) + ',' +
           std::to_string(r.ne) + '\n';
  }
  return out;
}

std::vector<BenchRecord> parseBenchCsv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != kBenchHeader) throw std::runtime_error("bad bench CSV header");
  std::vector<BenchRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 9) throw std::runtime_error("bench CSV row with " + std::to_string(f.size()) + " fields");
    BenchRecord r;
    r.scene = f[0];
    r.n = std::stoi(f[1]);
    r.buildSeconds = std::stod(f[2]);
    r.searchSeconds = std::stod(f[3]);
    r.cost = std::stod(f[4]);
    r.translationCost = std::stod(f[5]);
    r.rotationCost = std::stod(f[6]);
    r.nv = std::stoll(f[7]);
    r.ne = std::stoll(f[8]);
    out.push_back(r);
  }
  return out;
}

std::string renderSvg(const Scene& scene, const RvgGraph* graph, const PathSE2* path, const SvgOptions& opts) {
  const BBox b = bbox(scene.workspace.vertices());
  const double s = opts.width / std::max(b.maxx - b.minx, 1e-12);
  const double height = (b.maxy - b.miny) * s;
  auto X = [&](Point2 p) { return fmt((p.x - b.minx) * s) + "," + fmt((b.maxy - p.y) * s); };
  auto points = [&](const std::vector<Point2>& pts) {
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? " " : "") + X(pts[i]);
    return out;
  };
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(opts.width) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(opts.width) + " " + fmt(height) + "\">\n";
  out += "<g id=\"workspace\"><polygon points=\"" + points(scene.workspace.vertices()) +
         "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1\"/></g>\n";
  out += "<g id=\"obstacles\" fill=\"#606060\" stroke=\"#303030\" stroke-width=\"0.5\">\n";
  for (const Polygon& o : scene.obstacles) out += "<polygon points=\"" + points(o.vertices()) + "\"/>\n";
  out += "</g>\n";
  if (graph) {
    std::set<std::pair<Point2, Point2>> drawn;
    out += "<g id=\"graph\" stroke=\"#4a90d9\" stroke-width=\"0.3\" stroke-opacity=\"0.5\">\n";
    for (const RvgEdge& e : graph->edges()) {
      Point2 p = graph->vertices()[e.a].pos, q = graph->vertices()[e.b].pos;
      if (p == q) continue;
      if (q < p) std::swap(p, q);
      if (!drawn.insert({p, q}).second) continue;
      out += "<line x1=\"" + fmt((p.x - b.minx) * s) + "\" y1=\"" + fmt((b.maxy - p.y) * s) + "\" x2=\"" +
             fmt((q.x - b.minx) * s) + "\" y2=\"" + fmt((b.maxy - q.y) * s) + "\"/>\n";
    }
    out += "</g>\n";
  }
  if (path && !path->waypoints.empty()) {
    out += "<g id=\"footprints\" fill=\"none\" stroke=\"#f5a623\" stroke-width=\"0.5\">\n";
    for (const Pose& w : path->waypoints) {
      std::vector<Point2> pts;
      for (const Point2& v : scene.robot.vertices()) pts.push_back(rotated(v, w.theta) + w.pos());
      out += "<polygon points=\"" + points(pts) + "\"/>\n";
    }
    out += "</g>\n";
    std::vector<Point2> line;
    for (const Pose& w : path->waypoints) line.push_back(w.pos());
    out += "<g id=\"path\"><polyline points=\"" + points(line) +
           "\" fill=\"none\" stroke=\"#d0021b\" stroke-width=\"2\"/></g>\n";
    const Point2 a = path->waypoints.front().pos(), z = path->waypoints.back().pos();
    out += "<g id=\"markers\">\n";
    out += "<circle class=\"start\" cx=\"" + fmt((a.x - b.minx) * s) + "\" cy=\"" + fmt((b.maxy - a.y) * s) +
           "\" r=\"4\" fill=\"#2e7d32\"/>\n";
    out += "<circle class=\"goal\" cx=\"" + fmt((z.x - b.minx) * s) + "\" cy=\"" + fmt((b.maxy - z.y) * s) +
           "\" r=\"4\" fill=\"#c62828\"/>\n";
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string pathToJson(const QueryResult& r, const QuerySpec& q) {
  json j;
  j["alpha"] = q.alpha;
  j["beta"] = q.beta;
  switch (r.status) {
    case QueryStatus::Ok: j["status"] = "ok"; break;
    case QueryStatus::NoPath: j["status"] = "no_path"; break;
    case QueryStatus::InfeasibleAtResolution: j["status"] = "infeasible_at_resolution"; break;
  }
  if (r.status != QueryStatus::Ok) {
    j["reason"] = r.reason;
    return j.dump(2) + "\n";
  }
  const PathSE2& p = r.path;
  j["cost"] = p.totalCost;
  j["translation_cost"] = p.translationCost;
  j["rotation_cost"] = p.rotationCost;
  j["waypoints"] = json::array();
  for (const Pose& w : p.waypoints) j["waypoints"].push_back(toJson(w));
  j["segments"] = json::array();
  for (const PathSegment& s : p.segments) {
    if (s.kind == SegmentKind::Translate) j["segments"].push_back({{"type", "translate"}, {"length", s.length}});
    else j["segments"].push_back({{"type", "rotate"}, {"dtheta", s.dtheta}});
  }
  return j.dump(2) + "\n";
}

std::string serializeGraph(const Scene& scene, const RvgGraph& g) {
  json j;
  j["magic"] = kGraphMagic;
  j["version"] = kGraphVersion;
  j["n"] = g.resolution();
  j["scene"] = sceneJson(scene);
  json vs = json::array();
  for (const RvgVertex& v : g.vertices()) vs.push_back({v.pos.x, v.pos.y, v.layer, v.originLayer, v.originIndex, v.hops});
  j["vertices"] = std::move(vs);
  json es = json::array();
  for (const RvgEdge& e : g.edges()) es.push_back({e.a, e.b, e.weight.translation, e.weight.rotation});
  j["edges"] = std::move(es);
  return j.dump() + "\n";
}

LoadedGraph parseGraph(std::string_view text) {
  const json j = parseJson(text);
  if (!j.is_object() || j.value("magic", std::string()) != kGraphMagic) throw std::runtime_error("not an rvg graph file");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kGraphVersion)
    throw std::runtime_error("unsupported graph file version (expected " + std::to_string(kGraphVersion) + ")");
  try {
    const int n = j.at("n").get<int>();
    Scene scene = sceneFrom(j.at("scene"), "scene");
    std::vector<RvgVertex> vertices;
    for (const json& v : j.at("vertices")) {
      const int layer = v.at(2).get<int>();
      if (layer < 0 || layer >= n) throw std::runtime_error("vertex layer out of range");
      vertices.push_back({{v.at(0).get<double>(), v.at(1).get<double>()},
                          layer,
                          AngleInterval::slice(layer, n),
                          v.at(3).get<int>(),
                          v.at(4).get<int>(),
                          v.at(5).get<int>()});
    }
    std::vector<RvgEdge> edges;
    for (const json& e : j.at("edges"))
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), {e.at(2).get<double>(), e.at(3).get<double>()}});
    return {std::move(scene), RvgGraph::fromParts(n, std::move(vertices), std::move(edges))};
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed graph file: ") + e.what());
  }
}

}  // namespace rvg
