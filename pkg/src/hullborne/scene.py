"""Scene files: one rigid body made of meshes, dropped into water.

Scenes are INI files read with :mod:`configparser`. Sections::

    [fluid]    rho_water, g
    [water]    base_level, waves (bool), amplitude, frequency, phase
    [sim]      dt, duration, method, clip_mode, centroid_mode, resort_interval,
               linear_damping, angular_damping, dz, record_timing
    [body]     position, orientation (w,x,y,z) or euler_deg, velocity,
               angular_velocity, mass or density, inertia
    [mesh.*]   source (OBJ path relative to the scene, or a primitive spec
               such as box:0.1,0.1,0.1), offset, euler_deg, mass, inertia
    [output]   trace, plot, report

Mesh offsets are relative to the body's centre of gravity. ``inertia`` takes
3 values (diagonal) or 9 (row-major); when omitted, box primitives get the
solid-box tensor and anything else is an error.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field

import numpy as np

from . import rotation
from .buoyancy import FluidParams
from .dynamics import RigidState, SimConfig, box_inertia
from .mesh_io import MeshError, TriMesh, load_obj, mesh_total_volume
from .primitives import builtin_primitive
from .water import WaterSurface


class SceneError(ValueError):
    """Invalid scene; ``problems`` lists every offending field."""

    def __init__(self, problems: list[str]):
        super().__init__("invalid scene:\n  " + "\n  ".join(problems))
        self.problems = problems


@dataclass
class MeshSpec:
    name: str
    source: str
    offset: np.ndarray
    euler_deg: np.ndarray
    mass: float | None
    inertia: np.ndarray | None
    mesh: TriMesh | None = None


@dataclass
class SceneConfig:
    meshes: list[MeshSpec]
    fluid: FluidParams
    surface: WaterSurface
    sim: SimConfig
    initial_state: RigidState
    outputs: dict[str, str] = field(default_factory=dict)

    @property
    def assembly(self) -> list[TriMesh]:
        return [m.mesh for m in self.meshes]

    @property
    def body_height(self) -> float:
        z = np.concatenate([m.vertices[:, 2] for m in self.assembly])
        return float(z.max() - z.min())


def _vec(text: str, n: int) -> np.ndarray:
    vals = [float(x) for x in text.replace(",", " ").split()]
    if len(vals) != n:
        raise ValueError(f"expected {n} numbers, got {len(vals)}")
    return np.array(vals)


def _inertia(text: str) -> np.ndarray:
    vals = [float(x) for x in text.replace(",", " ").split()]
    if len(vals) == 3:
        return np.diag(vals)
    if len(vals) == 9:
        return np.array(vals).reshape(3, 3)
    raise ValueError("inertia needs 3 (diagonal) or 9 values")


def _box_dims(source: str):
    kind, _, args = source.partition(":")
    if kind.strip().lower() != "box":
        return None
    vals = [float(a) for a in args.split(",")]
    return vals * 3 if len(vals) == 1 else vals


class _Reader:
    """Typed getters that record problems instead of raising on the first one."""

    def __init__(self, cp: configparser.ConfigParser):
        self.cp = cp
        self.problems: list[str] = []

    def get(self, section, key, conv, default=None, required=False):
        if not self.cp.has_option(section, key):
            if required:
                self.problems.append(f"[{section}] {key}: missing")
            return default
        raw = self.cp.get(section, key)
        try:
            return conv(raw)
        except (ValueError, TypeError) as exc:
            self.problems.append(f"[{section}] {key} = {raw!r}: {exc}")
            return default

    def boolean(self, section, key, default):
        try:
            return self.cp.getboolean(section, key, fallback=default)
        except ValueError as exc:
            self.problems.append(f"[{section}] {key}: {exc}")
            return default

    def build(self, what, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, TypeError) as exc:
            self.problems.append(f"[{what}] {exc}")
            return None


def load_scene(path: str | os.PathLike) -> SceneConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    path = os.fspath(path)
    if not cp.read(path, encoding="utf-8"):
        raise SceneError([f"{path}: cannot read scene file"])
    return parse_scene(cp, os.path.dirname(os.path.abspath(path)))


def parse_scene(cp: configparser.ConfigParser, base_dir: str = ".") -> SceneConfig:
    r = _Reader(cp)
    known = {"fluid", "water", "sim", "body", "output"}
    for sec in cp.sections():
        if sec not in known and not sec.startswith("mesh."):
            r.problems.append(f"[{sec}]: unknown section")

    fluid = r.build("fluid", FluidParams,
                    rho_water=r.get("fluid", "rho_water", float, 1000.0),
                    g=r.get("fluid", "g", float, 9.81)) or FluidParams()

    surface = r.build("water", WaterSurface,
                      base_level=r.get("water", "base_level", float, 0.0),
                      amplitude=r.get("water", "amplitude", float, 0.3),
                      frequency=r.get("water", "frequency", float, 0.5),
                      phase=r.get("water", "phase", float, 0.0),
                      enabled=r.boolean("water", "waves", False)) or WaterSurface()

    sim = r.build("sim", SimConfig,
                  dt=r.get("sim", "dt", float, 0.01),
                  duration=r.get("sim", "duration", float, 5.0),
                  method=r.get("sim", "method", str, "hull"),
                  clip_mode=r.get("sim", "clip_mode", str, "clipped"),
                  centroid_mode=r.get("sim", "centroid_mode", str, "volumetric"),
                  resort_interval=r.get("sim", "resort_interval", int, 10),
                  linear_damping=r.get("sim", "linear_damping", float, 0.0),
                  angular_damping=r.get("sim", "angular_damping", float, 0.0),
                  fluid=fluid,
                  dz=r.get("sim", "dz", float, None),
                  record_timing=r.boolean("sim", "record_timing", True)) or SimConfig()

    specs: list[MeshSpec] = []
    for sec in cp.sections():
        if not sec.startswith("mesh."):
            continue
        name = sec[len("mesh."):]
        source = r.get(sec, "source", str, required=True)
        spec = MeshSpec(
            name=name,
            source=source or "",
            offset=r.get(sec, "offset", lambda s: _vec(s, 3), np.zeros(3)),
            euler_deg=r.get(sec, "euler_deg", lambda s: _vec(s, 3), np.zeros(3)),
            mass=r.get(sec, "mass", float, None),
            inertia=r.get(sec, "inertia", _inertia, None),
        )
        if source:
            spec.mesh = _load_mesh(r, sec, source, base_dir, name)
            if spec.mesh is not None:
                q = rotation.from_euler(*np.radians(spec.euler_deg))
                m = spec.mesh.transformed(rotation.to_matrix(q), spec.offset)
                spec.mesh = TriMesh(m.vertices, m.faces, name)
        specs.append(spec)
    if not specs:
        r.problems.append("[mesh.*]: at least one mesh section is required")

    state = _body_state(r, specs)
    outputs = dict(cp.items("output")) if cp.has_section("output") else {}
    for k in list(outputs):
        outputs[k] = os.path.join(base_dir, outputs[k])

    if r.problems:
        raise SceneError(r.problems)
    return SceneConfig(specs, fluid, surface, sim, state, outputs)


def _load_mesh(r: _Reader, sec: str, source: str, base_dir: str, name: str):
    path = os.path.join(base_dir, source)
    try:
        if os.path.exists(path):
            return load_obj(path)
        if ":" in source:
            return builtin_primitive(source)
        r.problems.append(f"[{sec}] source = {source!r}: file not found")
    except MeshError as exc:
        r.problems.append(f"[{sec}] source = {source!r}: {exc}")
    except ValueError as exc:
        r.problems.append(f"[{sec}] source = {source!r}: {exc}")
    return None


def _body_state(r: _Reader, specs: list[MeshSpec]):
    b = "body"
    position = r.get(b, "position", lambda s: _vec(s, 3), np.zeros(3))
    if r.cp.has_option(b, "euler_deg"):
        orientation = rotation.from_euler(*np.radians(r.get(b, "euler_deg", lambda s: _vec(s, 3), np.zeros(3))))
    else:
        orientation = r.get(b, "orientation", lambda s: _vec(s, 4), rotation.IDENTITY.copy())
    velocity = r.get(b, "velocity", lambda s: _vec(s, 3), np.zeros(3))
    omega = r.get(b, "angular_velocity", lambda s: _vec(s, 3), np.zeros(3))

    loaded = [s for s in specs if s.mesh is not None]
    mass = r.get(b, "mass", float, None)
    density = r.get(b, "density", float, None)
    if mass is None and density is not None and loaded:
        mass = density * sum(mesh_total_volume(s.mesh) for s in loaded)
    if mass is None and specs and all(s.mass is not None for s in specs):
        mass = sum(s.mass for s in specs)
    if mass is None:
        r.problems.append("[body] mass: give mass, density, or a mass for every mesh")
        return None

    inertia = r.get(b, "inertia", _inertia, None)
    if inertia is None and loaded:
        inertia = _combined_inertia(r, specs, mass)
    if inertia is None:
        return None
    return r.build("body", RigidState, position=position, orientation=orientation,
                   linear_velocity=velocity, angular_velocity=omega, mass=mass, inertia=inertia)


def _combined_inertia(r: _Reader, specs: list[MeshSpec], body_mass: float):
    """Parallel-axis sum of per-mesh tensors about the body origin."""
    masses = [s.mass for s in specs]
    if any(m is None for m in masses):
        if len(specs) != 1:
            r.problems.append("[mesh.*] mass: required per mesh to build a multi-mesh inertia")
            return None
        masses = [body_mass]
    total = np.zeros((3, 3))
    for s, m in zip(specs, masses):
        local = s.inertia
        if local is None:
            dims = _box_dims(s.source)
            if dims is None:
                r.problems.append(f"[mesh.{s.name}] inertia: required for non-box meshes")
                return None
            local = box_inertia(m, *dims)
        rot = rotation.to_matrix(rotation.from_euler(*np.radians(s.euler_deg)))
        d = np.asarray(s.offset, dtype=float)
        total += rot @ local @ rot.T + m * (d @ d * np.eye(3) - np.outer(d, d))
    return total


def format_scene_summary(scene: SceneConfig) -> str:
    s = scene.initial_state
    lines = [
        f"meshes: {', '.join(m.name for m in scene.meshes)}",
        f"mass: {s.mass:.6g} kg  weight: {s.mass * scene.fluid.g:.6g} N",
        f"steps: {scene.sim.n_steps} x {scene.sim.dt:g} s  method: {scene.sim.method.value}",
    ]
    if scene.surface.enabled:
        lines.append(f"waves: {scene.surface.amplitude:g} m at {scene.surface.frequency:g} Hz")
    return "\n".join(lines)


def equilibrium_draft_fraction(scene: SceneConfig) -> float:
    vol = sum(mesh_total_volume(m) for m in scene.assembly)
    return scene.initial_state.mass / (scene.fluid.rho_water * vol)
