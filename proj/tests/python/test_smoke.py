import json
import math
from pathlib import Path

import pytest

import rvg

SCENES = Path(__file__).resolve().parents[2] / "scenes"


def test_scene_round_trip():
    s = rvg.load_scene(str(SCENES / "simple_01.json"))
    assert rvg.parse_scene(s.to_json()) == s
    assert len(s.workspace) == 4
    assert s.queries


def test_scene_errors_are_value_errors():
    with pytest.raises(ValueError, match="colour"):
        rvg.parse_scene('{"workspace": [[0,0],[1,0],[1,1]], "robot": [[0,0],[1,0],[1,1]], "colour": 1}')


def test_plan_two_route_weightings():
    scene = rvg.two_route_scene()
    planner = rvg.Planner(scene, n=36)
    start, goal, _, _ = scene.queries[0]
    slot = planner.plan(start, goal, alpha=1.0, beta=0.0)
    around = planner.plan(start, goal, alpha=0.0, beta=1.0)
    assert slot.status == around.status == "ok"
    assert slot.translation_cost < around.translation_cost
    assert around.rotation_cost == pytest.approx(2 * math.pi / 36, abs=1e-12)
    assert rvg.validate_path(scene, slot)
    doc = json.loads(slot.to_json())
    assert doc["status"] == "ok"
    assert doc["cost"] == pytest.approx(slot.cost, rel=1e-6)
    assert slot.waypoints[0] == pytest.approx(start)


def test_infeasible_at_coarse_resolution():
    scene = rvg.corridor_scene(0.02)
    start, goal, _, _ = scene.queries[0]
    assert rvg.Planner(scene, n=8).plan(start, goal).status == "infeasible_at_resolution"
    assert rvg.Planner(scene, n=72).plan(start, goal).status == "ok"


def test_rejects_colliding_pose():
    scene = rvg.two_route_scene()
    planner = rvg.Planner(scene, n=8)
    with pytest.raises(ValueError):
        planner.plan((5, 10, 0), (12, 16, 0))


def test_generator_and_svg():
    a = rvg.generate_map("small", 3)
    assert a == rvg.generate_map("small", 3)
    planner = rvg.Planner(a, n=12)
    assert planner.vertex_count > 0 and planner.edge_count > 0
    start, goal, _, _ = a.queries[0]
    svg = planner.render_svg(planner.plan(start, goal))
    assert svg.startswith("<?xml") and "</svg>" in svg
    assert json.loads(planner.to_graph_json())["magic"] == "rvg-graph"


def test_lattice_oracle():
    scene = rvg.two_route_scene()
    start, goal, _, _ = scene.queries[0]
    r = rvg.lattice_plan(scene, start, goal, step=0.25, angular_steps=36)
    assert r.status == "ok"
    assert rvg.validate_path(scene, r)
