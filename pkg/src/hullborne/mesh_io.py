"""Triangle meshes and a minimal Wavefront OBJ reader/writer.

Only ``v`` and ``f`` records are honored. Polygons are fan-triangulated from
their first corner; texture coordinates, normals, materials, groups and
comments are skipped.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, TextIO, Union

import numpy as np


class MeshError(ValueError):
    """Base class for mesh input problems."""


class ObjParseError(MeshError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class MeshValidationError(MeshError):
    pass


class DegenerateMeshError(MeshError):
    pass


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Vertices (N, 3) in meters, body frame, z up; faces (M, 3) 0-based."""

    vertices: np.ndarray
    faces: np.ndarray
    name: str = field(default="mesh")

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        f = np.ascontiguousarray(self.faces, dtype=np.int64).reshape(-1, 3)
        v.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @cached_property
    def edges(self) -> np.ndarray:
        """Unique undirected edges as an (E, 2) array, lower index first."""
        f = self.faces
        e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    def __eq__(self, other):
        if not isinstance(other, TriMesh):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.vertices, other.vertices)
            and np.array_equal(self.faces, other.faces)
        )

    __hash__ = None

    def transformed(self, rotation: np.ndarray, translation) -> "TriMesh":
        v = self.vertices @ np.asarray(rotation, dtype=float).T + np.asarray(translation, dtype=float)
        return TriMesh(v, self.faces, self.name)

    def scaled(self, s: float) -> "TriMesh":
        return TriMesh(self.vertices * s, self.faces, self.name)

    def flipped(self) -> "TriMesh":
        return TriMesh(self.vertices, self.faces[:, ::-1], self.name)


def validate(mesh: TriMesh, min_vertices: int = 4) -> TriMesh:
    n = mesh.vertex_count
    if n < min_vertices:
        raise DegenerateMeshError(
            f"mesh '{mesh.name}' has {n} vertices; at least {min_vertices} required"
        )
    f = mesh.faces
    if len(f):
        if f.min() < 0 or f.max() >= n:
            bad = int(np.flatnonzero((f < 0).any(axis=1) | (f >= n).any(axis=1))[0])
            raise MeshValidationError(
                f"face {bad} {f[bad].tolist()} references a vertex outside [0, {n})"
            )
        rep = (f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 0] == f[:, 2])
        if rep.any():
            bad = int(np.flatnonzero(rep)[0])
            raise MeshValidationError(f"face {bad} {f[bad].tolist()} repeats a vertex")
    return mesh


def _lines(source) -> Iterable[str]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        return io.StringIO(source)
    return (ln.decode("utf-8") if isinstance(ln, bytes) else ln for ln in source)


def parse_obj(source: Union[str, bytes, TextIO, Iterable], name: str | None = None) -> TriMesh:
    """Parse OBJ text (str, bytes, or a line iterable) into a validated TriMesh.

    The first ``o`` record names the mesh unless ``name`` is given.
    """
    obj_name = None
    verts: list[tuple[float, float, float]] = []
    faces: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(_lines(source), start=1):
        toks = raw.split()
        if not toks:
            continue
        key = toks[0]
        if key == "o" and obj_name is None and len(toks) > 1:
            obj_name = toks[1]
        elif key == "v":
            if len(toks) < 4:
                raise ObjParseError(lineno, f"vertex needs 3 coordinates: {raw.strip()!r}")
            try:
                verts.append((float(toks[1]), float(toks[2]), float(toks[3])))
            except ValueError:
                raise ObjParseError(lineno, f"non-numeric coordinate: {raw.strip()!r}") from None
        elif key == "f":
            if len(toks) < 4:
                raise ObjParseError(lineno, f"face needs at least 3 corners: {raw.strip()!r}")
            idx = []
            for tok in toks[1:]:
                try:
                    k = int(tok.split("/")[0])
                except ValueError:
                    raise ObjParseError(lineno, f"bad face index {tok!r}") from None
                if k == 0:
                    raise MeshValidationError(f"line {lineno}: OBJ indices are 1-based, got 0")
                # negative indices count back from the vertices seen so far
                idx.append(k - 1 if k > 0 else len(verts) + k)
            for i in range(1, len(idx) - 1):
                faces.append((idx[0], idx[i], idx[i + 1]))
    mesh = TriMesh(
        np.array(verts, dtype=float).reshape(-1, 3),
        np.array(faces, dtype=np.int64).reshape(-1, 3),
        name or obj_name or "mesh",
    )
    return validate(mesh)


def load_obj(path: Union[str, os.PathLike]) -> TriMesh:
    with open(path, "r", encoding="utf-8") as fh:
        mesh = parse_obj(fh)
    if mesh.name == "mesh":
        stem = os.path.splitext(os.path.basename(os.fspath(path)))[0]
        mesh = TriMesh(mesh.vertices, mesh.faces, stem)
    return mesh


def dump_obj(mesh: TriMesh, polygons: Iterable[Iterable[int]] | None = None) -> str:
    """Serialize to OBJ text. ``polygons`` overrides the triangle list (0-based)."""
    out = [f"o {mesh.name}"]
    out += [f"v {x!r} {y!r} {z!r}" for x, y, z in mesh.vertices.tolist()]
    faces = mesh.faces.tolist() if polygons is None else polygons
    out += ["f " + " ".join(str(i + 1) for i in poly) for poly in faces]
    return "\n".join(out) + "\n"


def save_obj(mesh: TriMesh, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_obj(mesh))


def signed_volume(vertices: np.ndarray, faces: np.ndarray) -> float:
    a = vertices[faces[:, 0]]
    b = vertices[faces[:, 1]]
    c = vertices[faces[:, 2]]
    return float(np.einsum("ij,ij->", a, np.cross(b, c)) / 6.0)


def mesh_total_volume(mesh: TriMesh) -> float:
    """Enclosed volume of a watertight, consistently wound mesh.

    Sums signed tetrahedra against the origin and takes the absolute value of
    the total, so globally flipped windings give the same answer. Open meshes
    produce a meaningless number; nothing checks for that.
    """
    # centering first keeps the sum well conditioned far from the origin
    v = mesh.vertices - mesh.vertices.mean(axis=0)
    return abs(signed_volume(v, mesh.faces))
