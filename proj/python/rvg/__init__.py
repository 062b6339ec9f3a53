"""Rotation-stacked reduced visibility graph planner."""

from ._core import (
    Planner,
    Result,
    Scene,
    SceneError,
    corridor_scene,
    generate_map,
    lattice_plan,
    load_scene,
    parse_scene,
    render_scene_svg,
    save_scene,
    two_route_scene,
    validate_path,
)

__all__ = [
    "Planner",
    "Result",
    "Scene",
    "SceneError",
    "corridor_scene",
    "generate_map",
    "lattice_plan",
    "load_scene",
    "parse_scene",
    "render_scene_svg",
    "save_scene",
    "two_route_scene",
    "validate_path",
]
