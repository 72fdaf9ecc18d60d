import math

import numpy as np
import pytest

from hullborne.mesh_io import mesh_total_volume
from hullborne.primitives import (
    box,
    builtin_primitive,
    cone,
    cylinder,
    hourglass,
    hourglass_polygons,
    hourglass_volume_below,
    icosphere,
    polygon_area,
)


def euler_characteristic(m):
    return m.vertex_count - len(m.edges) + m.face_count


def test_box_volume_exact():
    assert mesh_total_volume(box(1, 1, 1)) == 1.0
    assert mesh_total_volume(box(0.1, 0.2, 0.3)) == pytest.approx(0.006, rel=1e-12)


def test_icosphere_volume():
    m = icosphere(1.0, 4)
    assert m.vertex_count == 2562
    assert mesh_total_volume(m) == pytest.approx(4 * math.pi / 3, rel=0.005)
    assert icosphere(1.0, 5).vertex_count == 10242


def test_hourglass_volume_and_shape():
    m = hourglass(0.5, 1.0, 64)
    assert m.vertex_count == 130
    assert mesh_total_volume(m) == pytest.approx(2 * math.pi * 0.25 / 3, rel=0.01)
    assert m.vertices[:, 2].min() == 0.0 and m.vertices[:, 2].max() == 2.0
    v, polys = hourglass_polygons(0.5, 1.0, 64)
    assert len(v) == 130 and sum(len(p) == 64 for p in polys) == 2


def test_prism_and_cone_volumes_match_polygon_area():
    a = polygon_area(0.5, 64)
    assert mesh_total_volume(cylinder(0.5, 1.0, 64)) == pytest.approx(a, rel=1e-12)
    assert mesh_total_volume(cone(0.5, 1.0, 64)) == pytest.approx(a / 3, rel=1e-12)


@pytest.mark.parametrize("mesh", [box(1, 2, 3), icosphere(1, 2), cylinder(), cone(), cone(apex_up=False)])
def test_closed_and_outward(mesh):
    assert euler_characteristic(mesh) == 2
    v = mesh.vertices
    tri = v[mesh.faces]
    signed = np.einsum("ij,ij->i", tri[:, 0], np.cross(tri[:, 1], tri[:, 2])).sum() / 6
    assert signed > 0


def test_hourglass_is_two_spheres_joined_at_a_vertex():
    # the shared apex pinches the surface into two spheres touching at a point
    m = hourglass()
    assert euler_characteristic(m) == 4


def test_hourglass_volume_below_closed_form():
    r, h = 0.5, 1.0
    full = hourglass_volume_below(2.0, r, h)
    assert full == pytest.approx(2 * math.pi * r * r * h / 3, rel=1e-12)
    assert hourglass_volume_below(1.0, r, h) == pytest.approx(full / 2, rel=1e-12)
    # lower cone below z is the whole cone minus the smaller cone above z
    z = 0.5
    expected = math.pi * h / 3 * r * r - math.pi * (h - z) / 3 * (r * (h - z) / h) ** 2
    assert hourglass_volume_below(z, r, h) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("spec,volume", [
    ("box:1,1,1", 1.0),
    ("box:2", 8.0),
    ("cylinder:0.5,1,64", polygon_area(0.5, 64)),
    ("cone:0.5,1", polygon_area(0.5, 64) / 3),
])
def test_builtin_primitive_specs(spec, volume):
    assert mesh_total_volume(builtin_primitive(spec)) == pytest.approx(volume, rel=1e-12)


@pytest.mark.parametrize("spec", ["box:-1,1,1", "cylinder:0.5,1,2", "teapot:1", "icosphere:0"])
def test_builtin_primitive_rejects(spec):
    with pytest.raises(ValueError):
        builtin_primitive(spec)
