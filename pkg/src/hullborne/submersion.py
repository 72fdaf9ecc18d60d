"""Submerged volume of a posed mesh below the water plane.

Two estimators share one result type:

* hull: convex hull of the submerged vertices (optionally closed with the
  edge/water-plane intersection points), volume and centroids from the hull;
* sliced: horizontal cross-sections every ``dz``, each measured as the area
  of the 2D hull of the edge/plane intersections, integrated by trapezoids.

Both report a primitive operation count used by the bench.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numba
import numpy as np

from . import rotation
from .hull import DegenerateHull, hull_volume, quickhull, vertex_mean_centroid, volumetric_centroid
from .mesh_io import TriMesh
from .water import WaterSurface, level_at


class ClipMode(str, Enum):
    VERTICES_ONLY = "vertices_only"
    CLIPPED = "clipped"


class Method(str, Enum):
    HULL = "hull"
    SLICED = "sliced"


def _clip_mode(mode) -> ClipMode:
    if isinstance(mode, ClipMode):
        return mode
    if mode in ("vertices", "vertices_only"):
        return ClipMode.VERTICES_ONLY
    return ClipMode(mode)


def world_vertices(mesh: TriMesh, pose=None) -> np.ndarray:
    """Mesh vertices in the world frame. ``pose`` needs ``position`` and ``orientation``."""
    if pose is None:
        return np.array(mesh.vertices)
    rot = rotation.to_matrix(pose.orientation)
    return mesh.vertices @ rot.T + np.asarray(pose.position, dtype=float)


@dataclass
class SubmergedRegion:
    submerged_points: np.ndarray
    volume: float
    centroid_vertex_mean: np.ndarray
    centroid_volumetric: np.ndarray
    method: Method
    clip_mode: ClipMode | None
    level: float
    ops: int = 0
    defined: bool = True

    def centroid(self, mode: str = "volumetric") -> np.ndarray:
        if mode == "vertex_mean":
            return self.centroid_vertex_mean
        return self.centroid_volumetric


def empty_region(method, clip_mode, level, ops, points=None) -> SubmergedRegion:
    pts = np.empty((0, 3)) if points is None else points
    if len(pts):
        c = pts.mean(axis=0)
        defined = True
    else:
        c = np.full(3, np.nan)
        defined = False
    return SubmergedRegion(pts, 0.0, c, c.copy(), method, clip_mode, level, ops, defined)


# ---------------------------------------------------------------------------
# lowest-vertex tracking

@dataclass
class VertexTracker:
    """Cached ascending world-z order of a mesh's vertices.

    The order is refreshed every ``resort_interval`` updates. Between resorts
    the body may have rotated, so the reject test widens by the worst-case
    change in relative heights (mesh diameter times the rotation angle since
    the last sort). That way it never skips a mesh that is actually wet.
    """

    sorted_z_indices: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))
    steps_since_resort: int = 0
    resort_interval: int = 10
    lowest_vertex_index: int = -1
    diameter: float = 0.0
    sorted_orientation: np.ndarray = field(default_factory=lambda: rotation.IDENTITY.copy())
    resorts: int = 0

    @classmethod
    def for_mesh(cls, mesh: TriMesh, resort_interval: int = 10) -> "VertexTracker":
        if resort_interval < 1:
            raise ValueError("resort_interval must be >= 1")
        v = mesh.vertices
        c = v.mean(axis=0)
        diameter = 2.0 * float(np.linalg.norm(v - c, axis=1).max())
        return cls(resort_interval=resort_interval, diameter=diameter)

    @property
    def initialized(self) -> bool:
        return self.lowest_vertex_index >= 0

    def candidates(self):
        """Vertex indices in ascending world z as of the last resort."""
        return iter(self.sorted_z_indices)


def update_vertex_tracker(tracker: VertexTracker, mesh: TriMesh, pose, level: float):
    """Advance the tracker one step; returns ``(tracker, quick_reject)``.

    ``quick_reject`` is True only when no vertex can be below ``level``.
    """
    q = rotation.IDENTITY if pose is None else np.asarray(pose.orientation, dtype=float)
    if not tracker.initialized or tracker.steps_since_resort + 1 >= tracker.resort_interval:
        z = world_vertices(mesh, pose)[:, 2]
        tracker.sorted_z_indices = np.argsort(z, kind="stable")
        tracker.lowest_vertex_index = int(tracker.sorted_z_indices[0])
        tracker.sorted_orientation = q.copy()
        tracker.steps_since_resort = 0
        tracker.resorts += 1
        return tracker, bool(z[tracker.lowest_vertex_index] >= level)

    tracker.steps_since_resort += 1
    rot = rotation.to_matrix(q)
    pos = np.zeros(3) if pose is None else np.asarray(pose.position, dtype=float)
    z_low = float((rot @ mesh.vertices[tracker.lowest_vertex_index] + pos)[2])
    slack = tracker.diameter * rotation.angle_between(q, tracker.sorted_orientation)
    return tracker, bool(z_low - slack >= level)


# ---------------------------------------------------------------------------
# submerged point sets and the hull estimator

def _submerged_points(vw: np.ndarray, edges: np.ndarray, level: float, clip: ClipMode):
    below = vw[:, 2] < level
    pts = vw[below]
    ops = len(vw)
    if clip is ClipMode.CLIPPED:
        ops += len(edges)
        ba = below[edges[:, 0]]
        bb = below[edges[:, 1]]
        cross = edges[ba != bb]
        if len(cross):
            pa = vw[cross[:, 0]]
            pb = vw[cross[:, 1]]
            t = (level - pa[:, 2]) / (pb[:, 2] - pa[:, 2])
            ip = pa + t[:, None] * (pb - pa)
            ip[:, 2] = level
            pts = np.vstack([pts, ip])
    return pts, ops


def submerged_point_set(mesh: TriMesh, pose, surface: WaterSurface, t: float = 0.0,
                        clip_mode=ClipMode.CLIPPED) -> np.ndarray:
    """World-frame vertices strictly below the water level at time ``t``.

    In clipped mode every edge with exactly one endpoint below the level adds
    its intersection with the water plane.
    """
    level = level_at(surface, t)
    pts, _ = _submerged_points(world_vertices(mesh, pose), mesh.edges, level, _clip_mode(clip_mode))
    return pts


def hull_region_from_points(pts: np.ndarray, level: float, clip: ClipMode, ops: int = 0) -> SubmergedRegion:
    if len(pts) < 4:
        return empty_region(Method.HULL, clip, level, ops, pts)
    try:
        hull = quickhull(pts)
    except DegenerateHull:
        return empty_region(Method.HULL, clip, level, ops, pts)
    ops += hull.point_plane_tests
    vol = hull_volume(hull)
    if vol <= 0.0:
        return empty_region(Method.HULL, clip, level, ops, pts)
    return SubmergedRegion(
        submerged_points=pts,
        volume=vol,
        centroid_vertex_mean=vertex_mean_centroid(hull),
        centroid_volumetric=volumetric_centroid(hull),
        method=Method.HULL,
        clip_mode=clip,
        level=level,
        ops=ops,
    )


def hull_submerged_volume(mesh: TriMesh, pose, surface: WaterSurface, t: float = 0.0,
                          clip_mode=ClipMode.CLIPPED) -> SubmergedRegion:
    clip = _clip_mode(clip_mode)
    level = level_at(surface, t)
    pts, ops = _submerged_points(world_vertices(mesh, pose), mesh.edges, level, clip)
    return hull_region_from_points(pts, level, clip, ops)


# ---------------------------------------------------------------------------
# cross-section slicing

@numba.njit(cache=True, nogil=True)
def _slice_areas(xy, starts, counts):
    """Area and centroid of the 2D hull of each point group.

    Groups are contiguous runs of ``xy`` already sorted by (x, y). Returns
    areas, centroids (G, 2) and the number of orientation tests.
    """
    g = starts.shape[0]
    areas = np.zeros(g)
    cents = np.zeros((g, 2))
    tests = 0
    hull = np.empty((2 * xy.shape[0] + 2, 2))
    for k in range(g):
        s = starts[k]
        m = counts[k]
        if m == 0:
            continue
        h = 0
        # lower chain, then upper chain
        for i in range(m):
            px = xy[s + i, 0]
            py = xy[s + i, 1]
            while h >= 2:
                tests += 1
                cr = (hull[h - 1, 0] - hull[h - 2, 0]) * (py - hull[h - 2, 1]) - (
                    hull[h - 1, 1] - hull[h - 2, 1]) * (px - hull[h - 2, 0])
                if cr > 0.0:
                    break
                h -= 1
            hull[h, 0] = px
            hull[h, 1] = py
            h += 1
        low = h + 1
        for i in range(m - 2, -1, -1):
            px = xy[s + i, 0]
            py = xy[s + i, 1]
            while h >= low:
                tests += 1
                cr = (hull[h - 1, 0] - hull[h - 2, 0]) * (py - hull[h - 2, 1]) - (
                    hull[h - 1, 1] - hull[h - 2, 1]) * (px - hull[h - 2, 0])
                if cr > 0.0:
                    break
                h -= 1
            hull[h, 0] = px
            hull[h, 1] = py
            h += 1
        h -= 1  # last point repeats the first
        if h < 3:
            continue
        a2 = 0.0
        cx = 0.0
        cy = 0.0
        for i in range(h):
            j = (i + 1) % h
            cr = hull[i, 0] * hull[j, 1] - hull[j, 0] * hull[i, 1]
            a2 += cr
            cx += (hull[i, 0] + hull[j, 0]) * cr
            cy += (hull[i, 1] + hull[j, 1]) * cr
        areas[k] = 0.5 * a2
        if a2 > 0.0:
            cents[k, 0] = cx / (3.0 * a2)
            cents[k, 1] = cy / (3.0 * a2)
    return areas, cents, tests


def cross_sections(vw: np.ndarray, edges: np.ndarray, levels: np.ndarray):
    """Areas and (x, y) centroids of the convex cross-sections at each level.

    Returns ``(areas, centroids, ops)`` where ops counts edge span checks,
    edge/plane intersections, 2D orientation tests and area evaluations.
    """
    za = vw[edges[:, 0], 2]
    zb = vw[edges[:, 1], 2]
    ops = len(edges)
    keep = za != zb
    e = edges[keep]
    za, zb = za[keep], zb[keep]
    lo = np.minimum(za, zb)
    hi = np.maximum(za, zb)
    # levels are sorted, so each edge meets a contiguous run of them
    i_lo = np.searchsorted(levels, lo, side="left")
    i_hi = np.searchsorted(levels, hi, side="right")
    cnt = np.maximum(i_hi - i_lo, 0)
    total = int(cnt.sum())
    ops += total
    eidx = np.repeat(np.arange(len(e)), cnt)
    offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    sidx = np.repeat(i_lo, cnt) + offs
    pa = vw[e[eidx, 0]]
    pb = vw[e[eidx, 1]]
    tt = (levels[sidx] - pa[:, 2]) / (pb[:, 2] - pa[:, 2])
    xy = pa[:, :2] + tt[:, None] * (pb[:, :2] - pa[:, :2])
    order = np.lexsort((xy[:, 1], xy[:, 0], sidx))
    xy = np.ascontiguousarray(xy[order])
    counts = np.bincount(sidx, minlength=len(levels)).astype(np.int64)
    starts = (np.cumsum(counts) - counts).astype(np.int64)
    areas, cents, tests = _slice_areas(xy, starts, counts)
    ops += tests + len(levels)
    return areas, cents, ops


def _trapezoid(y: np.ndarray, x: np.ndarray) -> float:
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


def default_dz(mesh: TriMesh, pose=None) -> float:
    z = world_vertices(mesh, pose)[:, 2]
    return float(z.max() - z.min()) / 100.0


def sliced_submerged_volume(mesh: TriMesh, pose, surface: WaterSurface, t: float = 0.0,
                            dz: float | None = None) -> SubmergedRegion:
    vw = world_vertices(mesh, pose)
    if dz is None:
        dz = float(vw[:, 2].max() - vw[:, 2].min()) / 100.0
    if not dz > 0:
        raise ValueError(f"slice spacing dz must be > 0, got {dz}")
    level = level_at(surface, t)
    z = vw[:, 2]
    zmin = float(z.min())
    top = min(level, float(z.max()))
    below = z < level
    if top <= zmin:
        return empty_region(Method.SLICED, None, level, len(z))
    n_int = max(1, math.ceil((top - zmin) / dz - 1e-9))
    levels = zmin + dz * np.arange(n_int + 1)
    levels[-1] = top
    areas, cents, ops = cross_sections(vw, mesh.edges, levels)
    ops += len(z)
    vol = _trapezoid(areas, levels)
    # top section points close the region like the clipped hull mode does
    pts = np.vstack([vw[below], _section_points(vw, mesh.edges, top)])
    if vol <= 0.0:
        return empty_region(Method.SLICED, None, level, ops, pts)
    cx = _trapezoid(areas * cents[:, 0], levels) / vol
    cy = _trapezoid(areas * cents[:, 1], levels) / vol
    cz = _trapezoid(areas * levels, levels) / vol
    return SubmergedRegion(
        submerged_points=pts,
        volume=vol,
        centroid_vertex_mean=pts.mean(axis=0),
        centroid_volumetric=np.array([cx, cy, cz]),
        method=Method.SLICED,
        clip_mode=None,
        level=level,
        ops=ops,
    )


def _section_points(vw, edges, level):
    za = vw[edges[:, 0], 2]
    zb = vw[edges[:, 1], 2]
    hit = (np.minimum(za, zb) <= level) & (np.maximum(za, zb) >= level) & (za != zb)
    e = edges[hit]
    pa, pb = vw[e[:, 0]], vw[e[:, 1]]
    t = (level - pa[:, 2]) / (pb[:, 2] - pa[:, 2])
    p = pa + t[:, None] * (pb - pa)
    p[:, 2] = level
    return p


def submerged_region(mesh: TriMesh, pose, surface: WaterSurface, t: float = 0.0,
                     method=Method.HULL, clip_mode=ClipMode.CLIPPED,
                     dz: float | None = None) -> SubmergedRegion:
    if Method(method) is Method.SLICED:
        return sliced_submerged_volume(mesh, pose, surface, t, dz)
    return hull_submerged_volume(mesh, pose, surface, t, clip_mode)


def volume_draft_curve(mesh: TriMesh, pose=None, method=Method.HULL, n_levels: int = 50,
                       clip_mode=ClipMode.CLIPPED, dz: float | None = None) -> np.ndarray:
    """Sweep a still water plane from the lowest to the highest vertex.

    Returns an (n_levels, 4) array of ``draft, level, volume, centroid_z``;
    centroid_z is NaN where nothing is submerged.
    """
    if n_levels < 2:
        raise ValueError("n_levels must be >= 2")
    z = world_vertices(mesh, pose)[:, 2]
    zmin, zmax = float(z.min()), float(z.max())
    if dz is None:
        dz = (zmax - zmin) / 100.0
    rows = []
    for level in np.linspace(zmin, zmax, n_levels):
        reg = submerged_region(mesh, pose, WaterSurface.still(float(level)), 0.0, method, clip_mode, dz)
        cz = reg.centroid_volumetric[2] if reg.volume > 0 else math.nan
        rows.append((level - zmin, level, reg.volume, cz))
    return np.array(rows)
