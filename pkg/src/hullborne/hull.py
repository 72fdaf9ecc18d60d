"""3D convex hulls by Quickhull, plus hull volume and centroids.

The construction loop is compiled with numba; everything else is numpy.
Faces are stored as flat arrays with explicit edge adjacency so the horizon
search is a graph walk rather than a scan over all faces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np


class DegenerateHull(ValueError):
    """Fewer than 4 points, or all points coplanar/collinear/coincident."""


DEFAULT_REL_EPS = 1e-10


def default_eps(points: np.ndarray, rel: float = DEFAULT_REL_EPS) -> float:
    if len(points) == 0:
        return 0.0
    diag = float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
    return rel * diag if diag > 0 else 0.0


@numba.njit(cache=True, nogil=True)
def _plane(pts, a, b, c):
    ux = pts[b, 0] - pts[a, 0]
    uy = pts[b, 1] - pts[a, 1]
    uz = pts[b, 2] - pts[a, 2]
    vx = pts[c, 0] - pts[a, 0]
    vy = pts[c, 1] - pts[a, 1]
    vz = pts[c, 2] - pts[a, 2]
    nx = uy * vz - uz * vy
    ny = uz * vx - ux * vz
    nz = ux * vy - uy * vx
    ln = np.sqrt(nx * nx + ny * ny + nz * nz)
    if ln > 0.0:
        nx /= ln
        ny /= ln
        nz /= ln
    return nx, ny, nz, nx * pts[a, 0] + ny * pts[a, 1] + nz * pts[a, 2]


@numba.njit(cache=True, nogil=True)
def _grow2(arr, cap):
    out = np.empty((cap, arr.shape[1]), arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@numba.njit(cache=True, nogil=True)
def _grow1(arr, cap, fill):
    out = np.full(cap, fill, arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@numba.njit(cache=True, nogil=True)
def _quickhull(pts, eps):
    """Return (faces, status, tests). status 1 = degenerate input.

    ``tests`` counts every point-to-plane signed distance evaluation.
    """
    n = pts.shape[0]
    tests = 0
    empty = np.empty((0, 3), np.int64)
    if n < 4:
        return empty, 1, tests

    # initial simplex from the six axis-extreme points
    ext = np.empty(6, np.int64)
    for ax in range(3):
        lo = 0
        hi = 0
        for i in range(n):
            if pts[i, ax] < pts[lo, ax]:
                lo = i
            if pts[i, ax] > pts[hi, ax]:
                hi = i
        ext[2 * ax] = lo
        ext[2 * ax + 1] = hi
    best = -1.0
    i0 = 0
    i1 = 0
    for p in range(6):
        for q in range(p + 1, 6):
            d = 0.0
            for ax in range(3):
                t = pts[ext[p], ax] - pts[ext[q], ax]
                d += t * t
            if d > best:
                best = d
                i0 = ext[p]
                i1 = ext[q]
    if np.sqrt(best) <= eps:
        return empty, 1, tests

    # farthest from the line i0-i1
    dx = pts[i1, 0] - pts[i0, 0]
    dy = pts[i1, 1] - pts[i0, 1]
    dz = pts[i1, 2] - pts[i0, 2]
    dl = np.sqrt(dx * dx + dy * dy + dz * dz)
    best = -1.0
    i2 = 0
    for i in range(n):
        px = pts[i, 0] - pts[i0, 0]
        py = pts[i, 1] - pts[i0, 1]
        pz = pts[i, 2] - pts[i0, 2]
        cx = py * dz - pz * dy
        cy = pz * dx - px * dz
        cz = px * dy - py * dx
        d = np.sqrt(cx * cx + cy * cy + cz * cz) / dl
        if d > best:
            best = d
            i2 = i
    if best <= eps:
        return empty, 1, tests

    # farthest from the plane i0-i1-i2
    nx, ny, nz, off = _plane(pts, i0, i1, i2)
    best = -1.0
    i3 = 0
    for i in range(n):
        d = abs(nx * pts[i, 0] + ny * pts[i, 1] + nz * pts[i, 2] - off)
        tests += 1
        if d > best:
            best = d
            i3 = i
    if best <= eps:
        return empty, 1, tests

    cap = 8 * n + 16
    fv = np.empty((cap, 3), np.int64)
    fn = np.empty((cap, 4), np.float64)
    fadj = np.full((cap, 3), -1, np.int64)
    falive = np.zeros(cap, np.bool_)
    fhead = np.full(cap, -1, np.int64)
    ffar = np.full(cap, -1, np.int64)
    ffard = np.zeros(cap, np.float64)
    fmark = np.zeros(cap, np.int64)
    pnext = np.full(n, -1, np.int64)

    cx = (pts[i0, 0] + pts[i1, 0] + pts[i2, 0] + pts[i3, 0]) / 4.0
    cy = (pts[i0, 1] + pts[i1, 1] + pts[i2, 1] + pts[i3, 1]) / 4.0
    cz = (pts[i0, 2] + pts[i1, 2] + pts[i2, 2] + pts[i3, 2]) / 4.0
    simplex = np.array([i0, i1, i2, i3])
    nf = 0
    for skip in range(4):
        tri = np.empty(3, np.int64)
        k = 0
        for j in range(4):
            if j != skip:
                tri[k] = simplex[j]
                k += 1
        nx, ny, nz, off = _plane(pts, tri[0], tri[1], tri[2])
        if nx * cx + ny * cy + nz * cz - off > 0.0:
            t = tri[1]
            tri[1] = tri[2]
            tri[2] = t
            nx, ny, nz, off = -nx, -ny, -nz, -off
        fv[nf, 0] = tri[0]
        fv[nf, 1] = tri[1]
        fv[nf, 2] = tri[2]
        fn[nf, 0] = nx
        fn[nf, 1] = ny
        fn[nf, 2] = nz
        fn[nf, 3] = off
        falive[nf] = True
        nf += 1
    for f in range(4):
        for k in range(3):
            a = fv[f, k]
            b = fv[f, (k + 1) % 3]
            for g in range(4):
                if g == f:
                    continue
                for m in range(3):
                    if fv[g, m] == b and fv[g, (m + 1) % 3] == a:
                        fadj[f, k] = g

    # outside sets: each point joins the first face it is strictly above
    for i in range(n):
        if i == i0 or i == i1 or i == i2 or i == i3:
            continue
        for f in range(4):
            d = fn[f, 0] * pts[i, 0] + fn[f, 1] * pts[i, 1] + fn[f, 2] * pts[i, 2] - fn[f, 3]
            tests += 1
            if d > eps:
                pnext[i] = fhead[f]
                fhead[f] = i
                if d > ffard[f]:
                    ffard[f] = d
                    ffar[f] = i
                break

    stack = np.empty(cap, np.int64)
    visible = np.empty(cap, np.int64)
    hor_a = np.empty(n + 3, np.int64)
    hor_b = np.empty(n + 3, np.int64)
    hor_f = np.empty(n + 3, np.int64)
    by_a = np.full(n, -1, np.int64)
    by_b = np.full(n, -1, np.int64)
    stamp = 0

    fi = 0
    while fi < nf:
        if not falive[fi] or fhead[fi] == -1:
            fi += 1
            continue
        eye = ffar[fi]
        ex = pts[eye, 0]
        ey = pts[eye, 1]
        ez = pts[eye, 2]
        stamp += 2
        # visible region by graph walk from fi; mark = stamp visible, stamp+1 not
        nvis = 0
        nh = 0
        sp = 0
        stack[sp] = fi
        sp += 1
        fmark[fi] = stamp
        while sp > 0:
            sp -= 1
            f = stack[sp]
            visible[nvis] = f
            nvis += 1
            for k in range(3):
                g = fadj[f, k]
                if fmark[g] == stamp:
                    continue
                if fmark[g] != stamp + 1:
                    d = fn[g, 0] * ex + fn[g, 1] * ey + fn[g, 2] * ez - fn[g, 3]
                    tests += 1
                    if d > eps:
                        fmark[g] = stamp
                        stack[sp] = g
                        sp += 1
                        continue
                    fmark[g] = stamp + 1
                hor_a[nh] = fv[f, k]
                hor_b[nh] = fv[f, (k + 1) % 3]
                hor_f[nh] = g
                nh += 1

        if nf + nh > cap:
            ncap = max(2 * cap, nf + nh + 16)
            fv = _grow2(fv, ncap)
            fn = _grow2(fn, ncap)
            fadj = _grow2(fadj, ncap)
            falive = _grow1(falive, ncap, False)
            fhead = _grow1(fhead, ncap, -1)
            ffar = _grow1(ffar, ncap, -1)
            ffard = _grow1(ffard, ncap, 0.0)
            fmark = _grow1(fmark, ncap, 0)
            stack = _grow1(stack, ncap, 0)
            visible = _grow1(visible, ncap, 0)
            cap = ncap

        first_new = nf
        for h in range(nh):
            a = hor_a[h]
            b = hor_b[h]
            g = hor_f[h]
            f = nf
            nf += 1
            fv[f, 0] = a
            fv[f, 1] = b
            fv[f, 2] = eye
            nx, ny, nz, off = _plane(pts, a, b, eye)
            fn[f, 0] = nx
            fn[f, 1] = ny
            fn[f, 2] = nz
            fn[f, 3] = off
            falive[f] = True
            fhead[f] = -1
            ffar[f] = -1
            ffard[f] = 0.0
            fmark[f] = 0
            fadj[f, 0] = g
            for m in range(3):
                if fv[g, m] == b and fv[g, (m + 1) % 3] == a:
                    fadj[g, m] = f
            by_a[a] = f
            by_b[b] = f
        for f in range(first_new, nf):
            a = fv[f, 0]
            b = fv[f, 1]
            fadj[f, 1] = by_a[b]
            fadj[f, 2] = by_b[a]

        # re-home the outside points of the faces being removed
        for v in range(nvis):
            f = visible[v]
            falive[f] = False
            p = fhead[f]
            fhead[f] = -1
            while p != -1:
                nxt = pnext[p]
                if p != eye:
                    for g in range(first_new, nf):
                        d = fn[g, 0] * pts[p, 0] + fn[g, 1] * pts[p, 1] + fn[g, 2] * pts[p, 2] - fn[g, 3]
                        tests += 1
                        if d > eps:
                            pnext[p] = fhead[g]
                            fhead[g] = p
                            if d > ffard[g]:
                                ffard[g] = d
                                ffar[g] = p
                            break
                p = nxt
        fi += 1

    m = 0
    for f in range(nf):
        if falive[f]:
            m += 1
    out = np.empty((m, 3), np.int64)
    m = 0
    for f in range(nf):
        if falive[f]:
            out[m] = fv[f]
            m += 1
    return out, 0, tests


@dataclass(frozen=True, eq=False)
class ConvexHull:
    """Hull of ``source_count`` input points.

    ``hull_faces`` index into ``hull_vertices`` and are wound so their normals
    point outward. ``vertex_indices`` maps hull vertices back to input rows.
    """

    hull_vertices: np.ndarray
    hull_faces: np.ndarray
    vertex_indices: np.ndarray
    source_count: int
    eps: float
    point_plane_tests: int = 0

    @property
    def n_vertices(self) -> int:
        return len(self.hull_vertices)

    @property
    def n_faces(self) -> int:
        return len(self.hull_faces)

    def edges(self) -> np.ndarray:
        f = self.hull_faces
        e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    def planes(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit outward normals (F, 3) and offsets (F,) with n.x - d = signed distance."""
        v = self.hull_vertices
        a, b, c = v[self.hull_faces[:, 0]], v[self.hull_faces[:, 1]], v[self.hull_faces[:, 2]]
        nrm = np.cross(b - a, c - a)
        nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
        return nrm, np.einsum("ij,ij->i", nrm, a)

    def signed_distances(self, points) -> np.ndarray:
        """(P, F) signed distances of points to every face plane; > 0 is outside."""
        nrm, off = self.planes()
        return np.asarray(points, dtype=float) @ nrm.T - off

    def contains(self, points, tol: float | None = None) -> np.ndarray:
        tol = self.eps if tol is None else tol
        return (self.signed_distances(points) <= tol).all(axis=1)


def quickhull(points, eps: float | None = None) -> ConvexHull:
    """Convex hull of a 3D point set.

    Raises DegenerateHull for fewer than 4 points or a flat/collinear/point
    set. Points within ``eps`` of a face plane count as inside, so coplanar
    points never become hull vertices unless they are needed as corners.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 3)
    if eps is None:
        eps = default_eps(pts)
    faces, status, tests = _quickhull(pts, float(eps))
    if status:
        raise DegenerateHull(f"{len(pts)} points do not span a volume")
    used, inverse = np.unique(faces, return_inverse=True)
    return ConvexHull(
        hull_vertices=pts[used],
        hull_faces=inverse.reshape(-1, 3).astype(np.int64),
        vertex_indices=used,
        source_count=len(pts),
        eps=float(eps),
        point_plane_tests=int(tests),
    )


def _tetra(hull: ConvexHull):
    v = hull.hull_vertices
    v0 = v.mean(axis=0)
    a = v[hull.hull_faces[:, 0]] - v0
    b = v[hull.hull_faces[:, 1]] - v0
    c = v[hull.hull_faces[:, 2]] - v0
    vol = np.abs(np.einsum("ij,ij->i", a, np.cross(b, c))) / 6.0
    return v0, a, b, c, vol


def hull_volume(hull: ConvexHull) -> float:
    # apex at the vertex mean, which is interior, so per-tetrahedron |.| is exact
    if hull.n_faces == 0:
        return 0.0
    return float(_tetra(hull)[4].sum())


def vertex_mean_centroid(hull: ConvexHull) -> np.ndarray:
    """Unweighted mean of the hull vertices."""
    return hull.hull_vertices.mean(axis=0)


def volumetric_centroid(hull: ConvexHull) -> np.ndarray:
    """Centroid of the solid enclosed by the hull."""
    v0, a, b, c, vol = _tetra(hull)
    total = vol.sum()
    if total <= 0.0:
        raise DegenerateHull("hull encloses no volume")
    centers = (a + b + c) / 4.0
    return v0 + (vol[:, None] * centers).sum(axis=0) / total
