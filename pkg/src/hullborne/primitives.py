"""Closed, outward-wound primitive meshes with closed-form volumes.

These are the oracle shapes used by the tests, the acceptance suite and the
bench: box, icosphere, cylinder, cone and the two-cone hourglass.
"""

from __future__ import annotations

import math

import numpy as np

from .mesh_io import TriMesh


def _check_positive(**dims):
    for k, v in dims.items():
        if not (v > 0):
            raise ValueError(f"{k} must be > 0, got {v}")


def _check_segments(segments: int):
    if int(segments) != segments or segments < 3:
        raise ValueError(f"segments must be an integer >= 3, got {segments}")


def box(sx: float = 1.0, sy: float = 1.0, sz: float = 1.0, center=(0.0, 0.0, 0.0),
        name: str = "box") -> TriMesh:
    _check_positive(sx=sx, sy=sy, sz=sz)
    c = np.asarray(center, dtype=float)
    h = np.array([sx, sy, sz]) / 2.0
    v = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)], float) * h + c
    # index = 4*ix + 2*iy + iz
    quads = [
        (0, 1, 3, 2),  # -x
        (4, 6, 7, 5),  # +x
        (0, 4, 5, 1),  # -y
        (2, 3, 7, 6),  # +y
        (0, 2, 6, 4),  # -z
        (1, 5, 7, 3),  # +z
    ]
    f = []
    for a, b, cc, d in quads:
        f += [(a, b, cc), (a, cc, d)]
    return TriMesh(v, np.array(f), name)


def unit_cube(name: str = "cube") -> TriMesh:
    """Axis-aligned cube spanning [0, 1]^3."""
    return box(1, 1, 1, center=(0.5, 0.5, 0.5), name=name)


def icosphere(radius: float = 1.0, subdivisions: int = 4, center=(0.0, 0.0, 0.0),
              name: str = "icosphere") -> TriMesh:
    _check_positive(radius=radius)
    if subdivisions < 0:
        raise ValueError("subdivisions must be >= 0")
    t = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    v = [np.array(p, float) / np.linalg.norm(p) for p in verts]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def mid(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in cache:
                m = v[i] + v[j]
                v.append(m / np.linalg.norm(m))
                cache[key] = len(v) - 1
            return cache[key]

        nxt = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            nxt += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = nxt
    return TriMesh(np.array(v) * radius + np.asarray(center, float), np.array(faces), name)


def _ring(radius, z, segments):
    a = 2.0 * math.pi * np.arange(segments) / segments
    return np.column_stack([radius * np.cos(a), radius * np.sin(a), np.full(segments, z)])


def cylinder(radius: float = 0.5, height: float = 1.0, segments: int = 64,
             center=(0.0, 0.0, 0.0), name: str = "cylinder") -> TriMesh:
    """Capped prism with a regular ``segments``-gon cross-section, axis along z."""
    _check_positive(radius=radius, height=height)
    _check_segments(segments)
    n = segments
    v = np.vstack([
        _ring(radius, -height / 2, n),
        _ring(radius, height / 2, n),
        [[0, 0, -height / 2], [0, 0, height / 2]],
    ]) + np.asarray(center, float)
    bot, top = 2 * n, 2 * n + 1
    f = []
    for i in range(n):
        j = (i + 1) % n
        f += [(i, j, n + j), (i, n + j, n + i), (bot, j, i), (top, n + i, n + j)]
    return TriMesh(v, np.array(f), name)


def cone(radius: float = 1.0, height: float = 1.0, segments: int = 64, base_z: float = 0.0,
         apex_up: bool = True, name: str = "cone") -> TriMesh:
    """Right circular cone (polygonal base) with its base plane at ``base_z``."""
    _check_positive(radius=radius, height=height)
    _check_segments(segments)
    n = segments
    apex_z = base_z + height if apex_up else base_z - height
    v = np.vstack([_ring(radius, base_z, n), [[0, 0, apex_z], [0, 0, base_z]]])
    apex, cen = n, n + 1
    f = []
    for i in range(n):
        j = (i + 1) % n
        f += [(i, j, apex), (cen, j, i)]
    f = np.array(f)
    if not apex_up:
        f = f[:, ::-1]
    return TriMesh(v, f, name)


def hourglass_polygons(radius: float = 0.5, cone_height: float = 1.0, segments: int = 64):
    """Vertices and polygon faces (0-based) of two cones meeting apex to apex.

    Each cone is a ring plus its own apex vertex; the two apexes coincide at
    the waist. Caps are single ``segments``-gons, so the OBJ form exercises
    polygon triangulation. Spans z in [0, 2*cone_height].
    """
    _check_positive(radius=radius, cone_height=cone_height)
    _check_segments(segments)
    n = segments
    h = cone_height
    v = np.vstack([
        _ring(radius, 0.0, n), [[0, 0, h]],
        _ring(radius, 2 * h, n), [[0, 0, h]],
    ])
    lo_apex, hi_apex = n, 2 * n + 1
    polys = []
    for i in range(n):
        j = (i + 1) % n
        polys.append((i, j, lo_apex))
        polys.append((n + 1 + j, n + 1 + i, hi_apex))
    polys.append(tuple(range(n - 1, -1, -1)))
    polys.append(tuple(range(n + 1, 2 * n + 1)))
    return v, polys


def hourglass(radius: float = 0.5, cone_height: float = 1.0, segments: int = 64,
              name: str = "hourglass") -> TriMesh:
    v, polys = hourglass_polygons(radius, cone_height, segments)
    tris = []
    for p in polys:
        for i in range(1, len(p) - 1):
            tris.append((p[0], p[i], p[i + 1]))
    return TriMesh(v, np.array(tris), name)


# closed forms for the polygonal shapes above

def polygon_area(radius: float, segments: int) -> float:
    return 0.5 * segments * radius**2 * math.sin(2.0 * math.pi / segments)


def spherical_cap_volume(radius: float, depth: float) -> float:
    h = min(max(depth, 0.0), 2.0 * radius)
    return math.pi * h * h * (3.0 * radius - h) / 3.0


def hourglass_volume_below(z: float, radius: float = 0.5, cone_height: float = 1.0,
                           segments: int | None = None) -> float:
    """Exact volume of the two-cone hourglass below height ``z`` (base at z = 0).

    ``segments`` None gives round cones; otherwise the regular-polygon version.
    """
    h = cone_height
    area = (math.pi * radius**2) if segments is None else polygon_area(radius, segments)
    z = min(max(z, 0.0), 2 * h)

    # cross-section area is area*(1 - s/h)^2 below the waist, area*((s-h)/h)^2 above
    def lower(zz):
        return area * h / 3.0 * (1.0 - (1.0 - zz / h) ** 3)

    if z <= h:
        return lower(z)
    return lower(h) + area * h / 3.0 * ((z - h) / h) ** 3


def builtin_primitive(spec: str) -> TriMesh:
    """Build a primitive from a compact spec string.

    ``box:SX,SY,SZ``, ``icosphere:R,SUBDIV``, ``cylinder:R,H[,SEG]``,
    ``cone:R,H[,SEG]``, ``hourglass:R,H[,SEG]`` (H is the height of one cone).
    """
    kind, _, args = spec.strip().partition(":")
    kind = kind.strip().lower()
    try:
        vals = [float(a) for a in args.split(",")] if args.strip() else []
    except ValueError:
        raise ValueError(f"bad primitive arguments in {spec!r}") from None

    def seg(i, default=64):
        if len(vals) <= i:
            return default
        if vals[i] != int(vals[i]):
            raise ValueError(f"segment count must be an integer in {spec!r}")
        return int(vals[i])

    if kind == "box":
        if len(vals) == 1:
            vals *= 3
        if len(vals) != 3:
            raise ValueError(f"box needs 1 or 3 sizes: {spec!r}")
        return box(*vals)
    if kind in ("icosphere", "sphere"):
        if len(vals) not in (1, 2):
            raise ValueError(f"icosphere needs R[,SUBDIV]: {spec!r}")
        return icosphere(vals[0], seg(1, 4))
    if kind in ("cylinder", "cone", "hourglass"):
        if len(vals) not in (2, 3):
            raise ValueError(f"{kind} needs R,H[,SEG]: {spec!r}")
        fn = {"cylinder": cylinder, "cone": cone, "hourglass": hourglass}[kind]
        return fn(vals[0], vals[1], seg(2))
    raise ValueError(f"unknown primitive {kind!r}")
