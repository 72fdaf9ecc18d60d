"""Rigid-body flotation: gravity at the CoG, buoyancy at the centre of buoyancy.

Integration is semi-implicit Euler: velocities are updated from the forces,
then the pose from the new velocities, with the orientation advanced by the
exponential map and renormalized every step.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import rotation
from .buoyancy import BuoyancyReport, FluidParams, assembly_buoyancy
from .mesh_io import TriMesh
from .submersion import (
    ClipMode,
    Method,
    VertexTracker,
    empty_region,
    submerged_region,
    update_vertex_tracker,
    world_vertices,
)
from .water import WaterSurface, level_at

TRACE_COLUMNS = ("t", "z_cog", "x_cog", "y_cog", "volume", "fb", "eta",
                 "roll", "pitch", "yaw", "step_ms")


class NumericalAbort(RuntimeError):
    def __init__(self, message: str, state: "RigidState", t: float):
        super().__init__(f"{message} at t={t:.6g}: {state.describe()}")
        self.state = state
        self.t = t


@dataclass
class RigidState:
    position: np.ndarray
    orientation: np.ndarray = field(default_factory=lambda: rotation.IDENTITY.copy())
    linear_velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    angular_velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    mass: float = 1.0
    inertia: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        self.orientation = rotation.normalize(np.asarray(self.orientation, dtype=float).reshape(4))
        self.linear_velocity = np.asarray(self.linear_velocity, dtype=float).reshape(3)
        self.angular_velocity = np.asarray(self.angular_velocity, dtype=float).reshape(3)
        self.inertia = np.asarray(self.inertia, dtype=float).reshape(3, 3)
        if not self.mass > 0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        if not np.allclose(self.inertia, self.inertia.T):
            raise ValueError("inertia tensor must be symmetric")
        if np.linalg.eigvalsh(self.inertia).min() <= 0:
            raise ValueError("inertia tensor must be positive definite")

    def copy(self) -> "RigidState":
        return replace(self)

    def describe(self) -> str:
        return (f"position={self.position.tolist()} orientation={self.orientation.tolist()} "
                f"v={self.linear_velocity.tolist()} w={self.angular_velocity.tolist()}")


def box_inertia(mass: float, sx: float, sy: float, sz: float) -> np.ndarray:
    return mass / 12.0 * np.diag([sy * sy + sz * sz, sx * sx + sz * sz, sx * sx + sy * sy])


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.01
    duration: float = 5.0
    method: Method = Method.HULL
    clip_mode: ClipMode = ClipMode.CLIPPED
    centroid_mode: str = "volumetric"
    resort_interval: int = 10
    linear_damping: float = 0.0
    angular_damping: float = 0.0
    fluid: FluidParams = FluidParams()
    dz: float | None = None
    record_timing: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not self.duration >= self.dt:
            raise ValueError(f"duration must be >= dt, got {self.duration}")
        if self.centroid_mode not in ("volumetric", "vertex_mean"):
            raise ValueError(f"unknown centroid_mode {self.centroid_mode!r}")
        if self.linear_damping < 0 or self.angular_damping < 0:
            raise ValueError("damping coefficients must be >= 0")
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "clip_mode", ClipMode(self.clip_mode))

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


def _mesh_ids(assembly: Sequence[TriMesh]) -> list[str]:
    seen: dict[str, int] = {}
    ids = []
    for m in assembly:
        k = seen.get(m.name, 0)
        seen[m.name] = k + 1
        ids.append(m.name if k == 0 else f"{m.name}#{k}")
    return ids


def buoyancy_at(state: RigidState, assembly: Sequence[TriMesh], surface: WaterSurface,
                config: SimConfig, t: float, trackers: list[VertexTracker] | None = None) -> BuoyancyReport:
    level = level_at(surface, t)
    regions = []
    for i, (mid, mesh) in enumerate(zip(_mesh_ids(assembly), assembly)):
        if trackers is not None:
            _, reject = update_vertex_tracker(trackers[i], mesh, state, level)
            if reject:
                regions.append((mid, empty_region(config.method, config.clip_mode, level, 0)))
                continue
        regions.append((mid, submerged_region(mesh, state, surface, t, config.method,
                                              config.clip_mode, config.dz)))
    return assembly_buoyancy(regions, config.fluid, config.centroid_mode)


def net_wrench(state: RigidState, report: BuoyancyReport, config: SimConfig):
    """World-frame force and torque about the CoG."""
    g = config.fluid.g
    force = np.array([0.0, 0.0, -state.mass * g]) + report.total_force
    torque = np.zeros(3)
    if report.defined:
        torque = np.cross(report.application_point - state.position, report.total_force)
    force = force - config.linear_damping * state.linear_velocity
    torque = torque - config.angular_damping * state.angular_velocity
    return force, torque


def integrate(state: RigidState, force, torque, dt: float) -> RigidState:
    rot = rotation.to_matrix(state.orientation)
    inertia_w = rot @ state.inertia @ rot.T
    w = state.angular_velocity
    alpha = np.linalg.solve(inertia_w, torque - np.cross(w, inertia_w @ w))
    v_new = state.linear_velocity + force / state.mass * dt
    w_new = w + alpha * dt
    q_new = rotation.normalize(rotation.multiply(rotation.exp_map(w_new, dt), state.orientation))
    return RigidState(
        position=state.position + v_new * dt,
        orientation=q_new,
        linear_velocity=v_new,
        angular_velocity=w_new,
        mass=state.mass,
        inertia=state.inertia,
    )


def step(state: RigidState, assembly: Sequence[TriMesh], surface: WaterSurface, config: SimConfig,
         t: float, trackers: list[VertexTracker] | None = None):
    """Advance one ``config.dt``; returns ``(new_state, report)``.

    ``report`` is the buoyancy evaluated at the incoming pose and time ``t``.
    """
    report = buoyancy_at(state, assembly, surface, config, t, trackers)
    force, torque = net_wrench(state, report, config)
    new = integrate(state, force, torque, config.dt)
    if not (np.isfinite(new.position).all() and np.isfinite(new.orientation).all()
            and np.isfinite(new.linear_velocity).all() and np.isfinite(new.angular_velocity).all()):
        raise NumericalAbort("non-finite state", state, t)
    return new, report


@dataclass
class Trace:
    rows: list[tuple] = field(default_factory=list)
    final_state: RigidState | None = None

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        k = TRACE_COLUMNS.index(name)
        return np.array([r[k] for r in self.rows])

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in self.rows:
            w.writerow([f"{x:.10g}" for x in r])
        return buf.getvalue() if fh is None else ""

    def write(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            self.to_csv(fh)


def run_drop(assembly: Sequence[TriMesh], surface: WaterSurface, config: SimConfig,
             initial_state: RigidState) -> Trace:
    n = config.n_steps
    if n < 2:
        raise ValueError("duration/dt must give at least 2 steps")
    trackers = [VertexTracker.for_mesh(m, config.resort_interval) for m in assembly]
    state = initial_state.copy()
    trace = Trace()
    for k in range(n):
        t = k * config.dt
        t0 = time.perf_counter()
        new, report = step(state, assembly, surface, config, t, trackers)
        ms = (time.perf_counter() - t0) * 1e3 if config.record_timing else 0.0
        roll, pitch, yaw = rotation.to_euler(state.orientation)
        trace.rows.append((t, state.position[2], state.position[0], state.position[1],
                           report.volume, report.magnitude, level_at(surface, t),
                           roll, pitch, yaw, ms))
        state = new
    trace.final_state = state
    return trace


# trace analysis

def draft(state: RigidState, assembly: Sequence[TriMesh], level: float) -> float:
    """Depth of the lowest vertex below ``level``."""
    zmin = min(float(world_vertices(m, state)[:, 2].min()) for m in assembly)
    return level - zmin


def dominant_frequency(t: np.ndarray, z: np.ndarray, t_start: float = 0.0) -> float:
    """Oscillation frequency from mean-level crossings after ``t_start``.

    Same-direction crossings are one period apart regardless of any offset in
    the mean, so rising and falling crossings are timed separately (with
    linear interpolation) and the two estimates averaged.
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    sel = t > t_start
    t, z = t[sel], z[sel]
    y = z - z.mean()
    estimates = []
    for sign in (1, -1):
        s = sign * y
        idx = np.flatnonzero((s[:-1] < 0) & (s[1:] >= 0))
        if len(idx) < 2:
            continue
        tc = t[idx] - s[idx] * (t[idx + 1] - t[idx]) / (s[idx + 1] - s[idx])
        estimates.append((len(tc) - 1) / (tc[-1] - tc[0]))
    if not estimates:
        return math.nan
    return float(np.mean(estimates))


def zero_crossings(z: np.ndarray) -> int:
    y = np.asarray(z, dtype=float)
    y = y - y.mean()
    return int(np.count_nonzero(np.signbit(y[:-1]) != np.signbit(y[1:])))
