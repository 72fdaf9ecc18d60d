import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hullborne import rotation
from hullborne.mesh_io import (
    DegenerateMeshError,
    MeshValidationError,
    ObjParseError,
    TriMesh,
    dump_obj,
    load_obj,
    mesh_total_volume,
    parse_obj,
    save_obj,
)
from hullborne.primitives import box, hourglass_polygons, icosphere, unit_cube

TET = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 2 3\nf 1 2 4\nf 1 3 4\nf 2 3 4"


def test_minimal_tetrahedron():
    m = parse_obj(TET)
    assert m.vertex_count == 4
    assert m.face_count == 4
    assert m.faces.min() == 0 and m.faces.max() == 3


def test_quad_is_fan_triangulated():
    text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 0 0 1\nf 1 2 3 4\nf 1 2 5\n"
    m = parse_obj(text)
    assert m.faces[:2].tolist() == [[0, 1, 2], [0, 2, 3]]


def test_ignored_records_and_slashed_indices():
    text = """# comment
mtllib x.mtl
o thing
v 0 0 0
v 1 0 0
v 0 1 0
v 0 0 1
vt 0 0
vn 0 0 1
g grp
usemtl m
s off
f 1/1/1 3//1 2
f 1/1 2 4
f 1 4 3
f 2 3 4
"""
    m = parse_obj(text)
    assert m.name == "thing"
    assert m.vertex_count == 4 and m.face_count == 4
    assert m.faces[0].tolist() == [0, 2, 1]


def test_negative_indices_are_relative():
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf -4 -3 -2\nf 1 2 4\nf 1 3 4\nf 2 3 4\n"
    assert parse_obj(text).faces[0].tolist() == [0, 1, 2]


def test_bytes_and_stream_input():
    a = parse_obj(TET.encode())
    b = parse_obj(io.StringIO(TET))
    assert a == b


def test_hourglass_obj_has_130_vertices():
    v, polys = hourglass_polygons(0.5, 1.0, 64)
    text = dump_obj(TriMesh(v, [p[:3] for p in polys], "hourglass"), polygons=polys)
    assert sum(1 for ln in text.splitlines() if ln.startswith("v ")) == 130
    m = parse_obj(text)
    assert m.vertex_count == 130
    # two 64-gon caps fan into 62 triangles each, plus 128 side triangles
    assert m.face_count == 128 + 2 * 62


def test_malformed_vertex_reports_line():
    with pytest.raises(ObjParseError) as exc:
        parse_obj("v 0 0 0\nv 1 zero 0\n")
    assert exc.value.lineno == 2
    assert "line 2" in str(exc.value)


@pytest.mark.parametrize("face", ["f 1 2 9", "f 0 1 2", "f -9 1 2"])
def test_out_of_range_index(face):
    with pytest.raises(MeshValidationError):
        parse_obj(TET + "\n" + face)


def test_repeated_vertex_in_face():
    with pytest.raises(MeshValidationError):
        parse_obj(TET + "\nf 1 1 2")


def test_too_few_vertices():
    with pytest.raises(DegenerateMeshError):
        parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n")


def test_unit_cube_volume():
    assert mesh_total_volume(unit_cube()) == pytest.approx(1.0, rel=1e-12)


def test_regular_tetrahedron_volume():
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    v *= 1.0 / (2 * math.sqrt(2))  # edge length 1
    m = TriMesh(v, [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
    assert mesh_total_volume(m) == pytest.approx(1 / (6 * math.sqrt(2)), rel=1e-12)


def test_flipped_cube_volume():
    assert mesh_total_volume(unit_cube().flipped()) == pytest.approx(1.0, rel=1e-12)


def test_round_trip(tmp_path):
    m = icosphere(0.7, 2, name="ball")
    again = parse_obj(dump_obj(m))
    assert again == m
    assert again.name == "ball"
    path = tmp_path / "ball.obj"
    save_obj(m, path)
    assert load_obj(path) == m


def test_load_obj_uses_stem_when_unnamed(tmp_path):
    p = tmp_path / "wedge.obj"
    p.write_text(TET)
    assert load_obj(p).name == "wedge"


def test_arrays_are_read_only():
    m = unit_cube()
    with pytest.raises(ValueError):
        m.vertices[0, 0] = 5.0


angles = st.floats(-math.pi, math.pi)
offsets = st.floats(-100, 100)


@settings(max_examples=50, deadline=None)
@given(angles, angles, angles, offsets, offsets, offsets)
def test_volume_rigid_invariance(a, b, c, x, y, z):
    m = icosphere(1.0, 2)
    ref = mesh_total_volume(m)
    moved = m.transformed(rotation.to_matrix(rotation.from_euler(a, b, c)), (x, y, z))
    assert mesh_total_volume(moved) == pytest.approx(ref, rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-3, 1e3))
def test_volume_scales_cubically(s):
    m = box(1.0, 2.0, 0.5)
    assert mesh_total_volume(m.scaled(s)) == pytest.approx(s ** 3 * 1.0, rel=1e-9)
