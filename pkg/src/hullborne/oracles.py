"""Reference answers that do not go through either estimator."""

from __future__ import annotations

import numpy as np

from .mesh_io import TriMesh
from .submersion import world_vertices


def _lerp(p, q, level):
    t = (level - p[:, 2]) / (q[:, 2] - p[:, 2])
    out = p + t[:, None] * (q - p)
    out[:, 2] = level
    return out


def clipped_triangles(vw: np.ndarray, faces: np.ndarray, level: float) -> np.ndarray:
    """Parts of every face at or below ``level`` as a (K, 3, 3) triangle array.

    Windings are preserved, so the pieces plus the (implicit) water-plane cap
    bound the submerged solid of a closed mesh.
    """
    tri = vw[faces]
    below = tri[:, :, 2] <= level
    nb = below.sum(axis=1)
    out = [tri[nb == 3]]

    one = nb == 1
    if one.any():
        t = tri[one]
        k = np.argmax(below[one], axis=1)  # the single vertex below
        r = np.stack([np.take_along_axis(t, ((k + s) % 3)[:, None, None].repeat(3, 2), 1)[:, 0]
                      for s in range(3)], axis=1)
        a, b, c = r[:, 0], r[:, 1], r[:, 2]
        out.append(np.stack([a, _lerp(a, b, level), _lerp(a, c, level)], axis=1))

    two = nb == 2
    if two.any():
        t = tri[two]
        k = np.argmin(below[two], axis=1)  # the single vertex above
        r = np.stack([np.take_along_axis(t, ((k + s) % 3)[:, None, None].repeat(3, 2), 1)[:, 0]
                      for s in range(3)], axis=1)
        a, b, c = r[:, 0], r[:, 1], r[:, 2]
        ab = _lerp(b, a, level)
        ac = _lerp(c, a, level)
        out.append(np.stack([ab, b, c], axis=1))
        out.append(np.stack([ab, c, ac], axis=1))
    return np.concatenate(out) if out else np.empty((0, 3, 3))


def exact_submerged(mesh: TriMesh, pose=None, level: float = 0.0) -> tuple[float, np.ndarray]:
    """Exact volume and centroid of a closed mesh below a horizontal plane.

    Tetrahedra are fanned from a point on the water plane, so the cap's
    contribution vanishes and no cap polygon is needed. Works for non-convex
    meshes as long as they are watertight and consistently wound.
    """
    vw = world_vertices(mesh, pose)
    tris = clipped_triangles(vw, mesh.faces, level)
    if len(tris) == 0:
        return 0.0, np.full(3, np.nan)
    apex = np.array([vw[:, 0].mean(), vw[:, 1].mean(), level])
    a = tris[:, 0] - apex
    b = tris[:, 1] - apex
    c = tris[:, 2] - apex
    vol = np.einsum("ij,ij->i", a, np.cross(b, c)) / 6.0
    total = float(vol.sum())
    if total == 0.0:
        return 0.0, np.full(3, np.nan)
    centroid = apex + (vol[:, None] * (a + b + c) / 4.0).sum(axis=0) / total
    if total < 0:
        total = -total
    return total, centroid


def exact_submerged_volume(mesh: TriMesh, pose=None, level: float = 0.0) -> float:
    return exact_submerged(mesh, pose, level)[0]
