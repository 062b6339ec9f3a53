#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <memory>

#include "rvg/io_scenes.hpp"
#include "rvg/layers.hpp"
#include "rvg/oracle.hpp"
#include "rvg/query.hpp"
#include "rvg/rvg.hpp"

namespace py = pybind11;
using namespace rvg;

namespace {

using XY = std::pair<double, double>;
using XYT = std::tuple<double, double, double>;

std::vector<XY> ring(const Polygon& p) {
  std::vector<XY> out;
  for (const Point2& v : p.vertices()) out.emplace_back(v.x, v.y);
  return out;
}

Pose pose(const XYT& t) { return {std::get<0>(t), std::get<1>(t), std::get<2>(t)}; }

const char* statusName(QueryStatus s) {
  switch (s) {
    case QueryStatus::Ok: return "ok";
    case QueryStatus::NoPath: return "no_path";
    case QueryStatus::InfeasibleAtResolution: return "infeasible_at_resolution";
  }
  return "unknown";
}

struct Result {
  QueryResult result;
  QuerySpec spec;
};

class Planner {
 public:
  Planner(Scene scene, int n, int maxHops) : scene_(std::move(scene)) {
    py::gil_scoped_release release;
    const auto t0 = std::chrono::steady_clock::now();
    layers_ = buildLayers(scene_.robot, n, scene_.workspace, scene_.obstacles);
    graph_ = propagate(layers_, {maxHops});
    buildSeconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  Result plan(const XYT& start, const XYT& goal, double alpha, double beta) const {
    const QuerySpec q{pose(start), pose(goal), alpha, beta};
    validateQuery(q, scene_.robot, scene_.workspace, scene_.obstacles);
    py::gil_scoped_release release;
    return {rvg::plan(graph_, layers_, q), q};
  }

  const Scene& scene() const { return scene_; }
  const RvgGraph& graph() const { return graph_; }
  double buildSeconds() const { return buildSeconds_; }

 private:
  Scene scene_;
  std::vector<Layer> layers_;
  RvgGraph graph_;
  double buildSeconds_ = 0.0;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rotation-stacked reduced visibility graph planner";

  py::register_exception<SceneError>(m, "SceneError", PyExc_ValueError);

  py::class_<Scene>(m, "Scene")
      .def_readwrite("name", &Scene::name)
      .def_readwrite("n", &Scene::n)
      .def_readwrite("alpha", &Scene::alpha)
      .def_readwrite("beta", &Scene::beta)
      .def_property_readonly("workspace", [](const Scene& s) { return ring(s.workspace); })
      .def_property_readonly("robot", [](const Scene& s) { return ring(s.robot); })
      .def_property_readonly("obstacles",
                             [](const Scene& s) {
                               std::vector<std::vector<XY>> out;
                               for (const Polygon& o : s.obstacles) out.push_back(ring(o));
                               return out;
                             })
      .def_property_readonly("queries",
                             [](const Scene& s) {
                               py::list out;
                               for (const QuerySpec& q : s.queries)
                                 out.append(py::make_tuple(XYT{q.start.x, q.start.y, q.start.theta},
                                                           XYT{q.goal.x, q.goal.y, q.goal.theta}, q.alpha, q.beta));
                               return out;
                             })
      .def("to_json", &serializeScene)
      .def("__eq__", [](const Scene& a, const Scene& b) { return a == b; });

  m.def("parse_scene", &parseScene, py::arg("text"));
  m.def("load_scene", &loadScene, py::arg("path"));
  m.def("save_scene", &saveScene, py::arg("path"), py::arg("scene"));
  m.def(
      "generate_map",
      [](const std::string& preset, std::uint64_t seed) {
        if (preset == "simple") return generateRandomMap(simplePreset(seed));
        if (preset == "hard") return generateRandomMap(hardPreset(seed));
        if (preset == "small") return generateRandomMap(smallPreset(seed));
        throw py::value_error("preset must be simple, hard or small");
      },
      py::arg("preset"), py::arg("seed"));
  m.def("two_route_scene", &twoRouteScene);
  m.def("corridor_scene", &corridorScene, py::arg("margin"));

  py::class_<Result>(m, "Result")
      .def_property_readonly("status", [](const Result& r) { return statusName(r.result.status); })
      .def_property_readonly("reason", [](const Result& r) { return r.result.reason; })
      .def_property_readonly("cost", [](const Result& r) { return r.result.path.totalCost; })
      .def_property_readonly("translation_cost", [](const Result& r) { return r.result.path.translationCost; })
      .def_property_readonly("rotation_cost", [](const Result& r) { return r.result.path.rotationCost; })
      .def_property_readonly("waypoints",
                             [](const Result& r) {
                               std::vector<XYT> out;
                               for (const Pose& p : r.result.path.waypoints) out.emplace_back(p.x, p.y, p.theta);
                               return out;
                             })
      .def("to_json", [](const Result& r) { return pathToJson(r.result, r.spec); });

  py::class_<Planner>(m, "Planner")
      .def(py::init<Scene, int, int>(), py::arg("scene"), py::arg("n") = 36, py::arg("max_hops") = 1)
      .def("plan", &Planner::plan, py::arg("start"), py::arg("goal"), py::arg("alpha") = 1.0, py::arg("beta") = 0.0)
      .def_property_readonly("scene", &Planner::scene)
      .def_property_readonly("resolution", [](const Planner& p) { return p.graph().resolution(); })
      .def_property_readonly("vertex_count", [](const Planner& p) { return p.graph().vertices().size(); })
      .def_property_readonly("edge_count", [](const Planner& p) { return p.graph().edges().size(); })
      .def_property_readonly("build_seconds", &Planner::buildSeconds)
      .def("to_graph_json", [](const Planner& p) { return serializeGraph(p.scene(), p.graph()); })
      .def(
          "render_svg",
          [](const Planner& p, const Result* path, bool rotationEdges) {
            SvgOptions opts;
            opts.showRotationEdges = rotationEdges;
            return renderSvg(p.scene(), &p.graph(), path ? &path->result.path : nullptr, opts);
          },
          py::arg("path") = nullptr, py::arg("rotation_edges") = false);

  m.def(
      "validate_path",
      [](const Scene& s, const Result& r) {
        return r.result.status == QueryStatus::Ok && validatePath(r.result.path, s.robot, s.obstacles, s.workspace);
      },
      py::arg("scene"), py::arg("result"));
  m.def(
      "lattice_plan",
      [](const Scene& s, const XYT& start, const XYT& goal, double step, int angularSteps, double alpha, double beta) {
        const QuerySpec q{pose(start), pose(goal), alpha, beta};
        LatticeSpec spec;
        spec.step = step;
        spec.angularSteps = angularSteps;
        py::gil_scoped_release release;
        return Result{latticePlan(s.robot, s.workspace, s.obstacles, q, spec), q};
      },
      py::arg("scene"), py::arg("start"), py::arg("goal"), py::arg("step"), py::arg("angular_steps") = 72,
      py::arg("alpha") = 1.0, py::arg("beta") = 0.0);
  m.def(
      "render_scene_svg", [](const Scene& s) { return renderSvg(s); }, py::arg("scene"));
}
