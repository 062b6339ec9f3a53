// Command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 invalid input, 3 no path, 4 infeasible at this resolution.

#include <glob.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rvg/io_scenes.hpp"
#include "rvg/layers.hpp"
#include "rvg/query.hpp"
#include "rvg/rvg.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds(Clock::time_point a, Clock::time_point b) { return std::chrono::duration<double>(b - a).count(); }

rvg::Pose parsePose(const std::string& text, const char* flag) {
  std::stringstream ss(text);
  std::vector<double> v;
  for (std::string cell; std::getline(ss, cell, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw InputError(std::string(flag) + ": expected x,y,theta");
    }
  }
  if (v.size() != 3) throw InputError(std::string(flag) + ": expected x,y,theta");
  return {v[0], v[1], v[2]};
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

rvg::Scene loadSceneFile(const std::string& path) {
  return rvg::parseScene(readFile(path));
}

rvg::LoadedGraph loadGraphFile(const std::string& path) {
  try {
    return rvg::parseGraph(readFile(path));
  } catch (const rvg::SceneError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

struct Built {
  std::vector<rvg::Layer> layers;
  rvg::RvgGraph graph;
  double seconds = 0.0;
};

Built buildAll(const rvg::Scene& s, int n, int maxHops) {
  if (n < 2) throw InputError("--n must be at least 2");
  const auto t0 = Clock::now();
  Built b;
  b.layers = rvg::buildLayers(s.robot, n, s.workspace, s.obstacles);
  b.graph = rvg::propagate(b.layers, {maxHops});
  b.seconds = seconds(t0, Clock::now());
  return b;
}

std::vector<std::string> expandScenes(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const std::string& p : patterns) {
    glob_t g{};
    if (glob(p.c_str(), 0, nullptr, &g) == 0)
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    globfree(&g);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

rvg::QuerySpec resolveQuery(const rvg::Scene& s, const std::string& start, const std::string& goal,
                            const CLI::Option* alphaOpt, double alpha, const CLI::Option* betaOpt, double beta) {
  rvg::QuerySpec q;
  if (!start.empty() || !goal.empty()) {
    if (start.empty() || goal.empty()) throw InputError("--start and --goal must be given together");
    q.start = parsePose(start, "--start");
    q.goal = parsePose(goal, "--goal");
    q.alpha = s.alpha;
    q.beta = s.beta;
  } else if (!s.queries.empty()) {
    q = s.queries.front();
  } else {
    throw InputError("no --start/--goal given and the scene has no queries");
  }
  if (alphaOpt->count()) q.alpha = alpha;
  if (betaOpt->count()) q.beta = beta;
  return q;
}

int statusCode(rvg::QueryStatus s) {
  switch (s) {
    case rvg::QueryStatus::Ok: return 0;
    case rvg::QueryStatus::NoPath: return 3;
    case rvg::QueryStatus::InfeasibleAtResolution: return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation-stacked reduced visibility graph planner"};
  app.require_subcommand(1);

  std::string scenePath, graphPath, outPath, svgPath, start, goal, preset = "simple";
  int n = 0, maxHops = 1;
  double alpha = 1.0, beta = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> sweep{8, 18, 36, 72, 90, 180, 360};
  std::vector<std::string> scenePatterns;

  auto* build = app.add_subcommand("build", "Build and save a graph");
  build->add_option("--scene", scenePath, "Scene JSON")->required();
  build->add_option("--n", n, "Number of rotation slices");
  build->add_option("--out", outPath, "Graph file")->required();
  build->add_option("--max-hops", maxHops, "Propagation depth");

  auto* query = app.add_subcommand("query", "Plan one query; path JSON on stdout");
  query->add_option("--scene", scenePath, "Scene JSON");
  query->add_option("--graph", graphPath, "Graph file from build");
  query->add_option("--n", n, "Number of rotation slices");
  auto* qa = query->add_option("--alpha", alpha, "Translation weight");
  auto* qb = query->add_option("--beta", beta, "Rotation weight");
  query->add_option("--start", start, "x,y,theta");
  query->add_option("--goal", goal, "x,y,theta");
  query->add_option("--svg", svgPath, "Write an SVG rendering");
  query->add_option("--max-hops", maxHops, "Propagation depth");

  auto* bench = app.add_subcommand("bench", "Resolution sweep; CSV on stdout");
  bench->add_option("--scene", scenePatterns, "Scene files or glob patterns")->required();
  bench->add_option("--sweep", sweep, "Resolutions")->delimiter(',');
  auto* ba = bench->add_option("--alpha", alpha, "Translation weight");
  auto* bb = bench->add_option("--beta", beta, "Rotation weight");
  bench->add_option("--out", outPath, "CSV file instead of stdout");
  bench->add_option("--max-hops", maxHops, "Propagation depth");

  auto* gen = app.add_subcommand("gen", "Generate a random scene");
  gen->add_option("--preset", preset, "simple, hard or small")->check(CLI::IsMember({"simple", "hard", "small"}));
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", outPath, "Scene file instead of stdout");

  auto* render = app.add_subcommand("render", "Render a scene, optionally with graph and path");
  render->add_option("--scene", scenePath, "Scene JSON")->required();
  render->add_option("--n", n, "Build and draw the graph at this resolution");
  render->add_option("--start", start, "x,y,theta");
  render->add_option("--goal", goal, "x,y,theta");
  auto* ra = render->add_option("--alpha", alpha, "Translation weight");
  auto* rb = render->add_option("--beta", beta, "Rotation weight");
  render->add_option("--svg", svgPath, "SVG file instead of stdout");
  render->add_option("--max-hops", maxHops, "Propagation depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*build) {
      const rvg::Scene s = loadSceneFile(scenePath);
      const Built b = buildAll(s, n ? n : s.n, maxHops);
      writeFile(outPath, rvg::serializeGraph(s, b.graph));
      std::fprintf(stderr, "build_s=%.6g nv=%zu ne=%zu\n", b.seconds, b.graph.vertices().size(), b.graph.edges().size());
      return 0;
    }

    if (*query) {
      if (scenePath.empty() == graphPath.empty()) throw InputError("give exactly one of --scene or --graph");
      rvg::Scene s;
      Built b;
      if (!graphPath.empty()) {
        rvg::LoadedGraph loaded = loadGraphFile(graphPath);
        s = std::move(loaded.scene);
        b.graph = std::move(loaded.graph);
        b.layers = rvg::buildLayers(s.robot, b.graph.resolution(), s.workspace, s.obstacles);
      } else {
        s = loadSceneFile(scenePath);
        b = buildAll(s, n ? n : s.n, maxHops);
      }
      const rvg::QuerySpec q = resolveQuery(s, start, goal, qa, alpha, qb, beta);
      rvg::validateQuery(q, s.robot, s.workspace, s.obstacles);
      const auto t0 = Clock::now();
      const rvg::QueryResult r = rvg::plan(b.graph, b.layers, q);
      std::fprintf(stderr, "search_s=%.6g\n", seconds(t0, Clock::now()));
      std::cout << rvg::pathToJson(r, q);
      if (!svgPath.empty())
        writeFile(svgPath, rvg::renderSvg(s, &b.graph, r.status == rvg::QueryStatus::Ok ? &r.path : nullptr));
      return statusCode(r.status);
    }

    if (*bench) {
      std::vector<rvg::BenchRecord> records;
      for (const std::string& file : expandScenes(scenePatterns)) {
        rvg::Scene s;
        try {
          s = loadSceneFile(file);
        } catch (const std::exception& e) {
          std::fprintf(stderr, "%s: %s\n", file.c_str(), e.what());
          continue;
        }
        const std::string id = s.name.empty() ? file : s.name;
        for (int res : sweep) {
          rvg::BenchRecord rec;
          rec.scene = id;
          rec.n = res;
          rec.cost = rec.translationCost = rec.rotationCost = NAN;
          try {
            const Built b = buildAll(s, res, maxHops);
            rec.buildSeconds = b.seconds;
            rec.nv = static_cast<long long>(b.graph.vertices().size());
            rec.ne = static_cast<long long>(b.graph.edges().size());
            if (!s.queries.empty()) {
              rvg::QuerySpec q = s.queries.front();
              if (ba->count()) q.alpha = alpha;
              if (bb->count()) q.beta = beta;
              rvg::validateQuery(q, s.robot, s.workspace, s.obstacles);
              const auto t0 = Clock::now();
              const rvg::QueryResult r = rvg::plan(b.graph, b.layers, q);
              rec.searchSeconds = seconds(t0, Clock::now());
              if (r.status == rvg::QueryStatus::Ok) {
                rec.cost = r.path.totalCost;
                rec.translationCost = r.path.translationCost;
                rec.rotationCost = r.path.rotationCost;
              }
            }
          } catch (const std::exception& e) {
            std::fprintf(stderr, "%s n=%d: %s\n", id.c_str(), res, e.what());
          }
          records.push_back(rec);
        }
      }
      const std::string csv = rvg::writeBenchCsv(records);
      if (outPath.empty()) std::cout << csv;
      else writeFile(outPath, csv);
      return 0;
    }

    if (*gen) {
      const rvg::MapParams params = preset == "hard"    ? rvg::hardPreset(seed)
                                    : preset == "small" ? rvg::smallPreset(seed)
                                                        : rvg::simplePreset(seed);
      const rvg::Scene s = rvg::generateRandomMap(params);
      if (outPath.empty()) std::cout << rvg::serializeScene(s);
      else rvg::saveScene(outPath, s);
      return 0;
    }

    if (*render) {
      const rvg::Scene s = loadSceneFile(scenePath);
      std::optional<Built> b;
      std::optional<rvg::QueryResult> r;
      if (n || !start.empty()) b = buildAll(s, n ? n : s.n, maxHops);
      if (!start.empty() || !goal.empty()) {
        const rvg::QuerySpec q = resolveQuery(s, start, goal, ra, alpha, rb, beta);
        rvg::validateQuery(q, s.robot, s.workspace, s.obstacles);
        r = rvg::plan(b->graph, b->layers, q);
      }
      const std::string svg = rvg::renderSvg(s, n && b ? &b->graph : nullptr,
                                             r && r->status == rvg::QueryStatus::Ok ? &r->path : nullptr);
      if (svgPath.empty()) std::cout << svg;
      else writeFile(svgPath, svg);
      return 0;
    }
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const rvg::SceneError& e) {
    std::fprintf(stderr, "invalid scene: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
