"""Acceptance criteria 1-12, each at its stated tolerance.

Every test records a one-line verdict that is printed at the end of the
pytest run. Run ``python -m pytest tests/test_acceptance.py -v`` to see them.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from hullborne import rotation
from hullborne.bench import REFERENCE_RATIO, run_bench
from hullborne.buoyancy import FluidParams, assembly_buoyancy, buoyant_force_magnitude
from hullborne.dynamics import RigidState, SimConfig, dominant_frequency, draft, run_drop, step
from hullborne.hull import hull_volume, quickhull
from hullborne.mesh_io import mesh_total_volume
from hullborne.primitives import box, cylinder, hourglass, icosphere
from hullborne.scene import load_scene
from hullborne.submersion import (
    ClipMode,
    Method,
    SubmergedRegion,
    hull_submerged_volume,
    sliced_submerged_volume,
)
from hullborne.water import WaterSurface

from oracles import (
    brute_force_hull_vertices,
    monte_carlo_hull_volume,
    prism_submerged_mc,
    sphere_cap,
)

ROOT = Path(__file__).resolve().parents[1]
SCENES = ROOT / "scenes"
GOLDEN = ROOT / "tests" / "golden"
DRAFTS = [0.1 * k for k in range(1, 10)]


@pytest.fixture(scope="module")
def compiled():
    """Compile the numba kernels once; returns the compile wall time in seconds."""
    t0 = time.perf_counter()
    cube = box(1, 1, 1)
    hull_submerged_volume(cube, None, WaterSurface.still(0.0))
    sliced_submerged_volume(cube, None, WaterSurface.still(0.0))
    return time.perf_counter() - t0


@pytest.fixture(autouse=True)
def _default_fail(request, record):
    # a criterion that errors out before recording still shows up as FAIL
    k = int(request.node.name.split("_")[1])
    record(k, False, "did not complete")


def test_01_volume_accuracy(record, compiled):
    t0 = time.perf_counter()
    sphere = icosphere(1.0, 4)
    cyl = cylinder(0.5, 1.0, 64)
    errs = []
    for f in DRAFTS:
        d = 2.0 * f
        v = hull_submerged_volume(sphere, None, WaterSurface.still(-1.0 + d)).volume
        errs.append(abs(v - sphere_cap(1.0, d)) / sphere_cap(1.0, d))
        d = 1.0 * f
        v = hull_submerged_volume(cyl, None, WaterSurface.still(-0.5 + d)).volume
        exact = math.pi * 0.25 * d
        errs.append(abs(v - exact) / exact)
    elapsed = time.perf_counter() - t0
    worst = max(errs)
    ok = worst < 0.03 and elapsed < 5.0
    record(1, ok, f"max error {100 * worst:.3f}% over 18 cases (< 3%), {elapsed:.2f} s (< 5 s; "
                  f"one-off JIT compile {compiled:.2f} s excluded)")
    assert ok


def test_02_tilt_robustness(record):
    rng = np.random.default_rng(20240607)
    cyl = cylinder(0.5, 1.0, 64)
    errs = []
    for deg in (0, 15, 30, 45):
        q = rotation.from_euler(math.radians(deg), 0.0, 0.0)
        p = RigidState(position=[0, 0, 0], orientation=q)
        v = hull_submerged_volume(cyl, p, WaterSurface.still(0.0)).volume
        mc, sigma = prism_submerged_mc(0.5, 1.0, 64, rotation.to_matrix(q), np.zeros(3), 0.0,
                                       1_000_000, rng)
        assert 3 * sigma / mc < 0.005
        errs.append((deg, abs(v - mc) / mc))
    worst = max(e for _, e in errs)
    detail = ", ".join(f"{d} deg {100 * e:.3f}%" for d, e in errs)
    record(2, worst < 0.03, f"hull vs 1e6-sample Monte-Carlo: {detail} (< 3%)")
    assert worst < 0.03


def test_03_quickhull_correctness(record):
    violations = []
    for seed in range(200):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 51))
        p = rng.normal(size=(n, 3)) * rng.uniform(0.1, 10, 3)
        h = quickhull(p)
        if set(h.vertex_indices.tolist()) != brute_force_hull_vertices(p):
            violations.append((seed, "vertex set"))
        scale = np.abs(p).max()
        if not h.contains(p, tol=1e-9 * scale).all():
            violations.append((seed, "containment"))
        h2 = quickhull(h.hull_vertices)
        if h2.n_vertices != h.n_vertices or abs(hull_volume(h2) - hull_volume(h)) > 1e-9 * hull_volume(h):
            violations.append((seed, "idempotence"))
        q = rotation.from_euler(*rng.uniform(-math.pi, math.pi, 3))
        hr = quickhull(p @ rotation.to_matrix(q).T)
        if set(hr.vertex_indices.tolist()) != set(h.vertex_indices.tolist()):
            violations.append((seed, "rotation"))
        if h.n_vertices - len(h.edges()) + h.n_faces != 2:
            violations.append((seed, "euler"))
    record(3, not violations, f"{len(violations)} violations over 200 random sets of 5-50 points")
    assert not violations, violations[:5]


def test_04_hull_volume(record):
    misses = []
    for seed in range(20):
        rng = np.random.default_rng(500 + seed)
        p = rng.uniform(-1, 1, size=(int(rng.integers(6, 40)), 3))
        mc, sigma = monte_carlo_hull_volume(p, 200_000, rng)
        if abs(hull_volume(quickhull(p)) - mc) > 3 * sigma:
            misses.append(seed)
    b = hull_volume(quickhull(box(0.3, 1.7, 2.9).vertices))
    t = hull_volume(quickhull(np.array([[0, 0, 0], [2, 0, 0], [0, 3, 0], [0, 0, 4]], float)))
    exact = abs(b - 0.3 * 1.7 * 2.9) / (0.3 * 1.7 * 2.9) < 1e-9 and abs(t - 4.0) / 4.0 < 1e-9
    ok = not misses and exact
    record(4, ok, f"{20 - len(misses)}/20 clouds within 3 sigma of Monte-Carlo; box/tetrahedron exact: {exact}")
    assert ok


def _region(v, x):
    c = np.array([x, 0.0, 0.0])
    return SubmergedRegion(np.empty((0, 3)), v, c, c, Method.HULL, ClipMode.CLIPPED, 0.0)


def test_05_force_arithmetic(record):
    fluid = FluidParams()
    checks = {
        "rho*g*V": buoyant_force_magnitude(fluid, 0.001) == 1000.0 * 9.81 * 0.001,
        "midpoint": abs(assembly_buoyancy([("a", _region(0.5, -1.0)), ("b", _region(0.5, 1.0))])
                        .application_point[0]) <= 1e-12,
        "0.75/0.25": abs(assembly_buoyancy([("a", _region(0.75, 0.0)), ("b", _region(0.25, 1.0))])
                         .application_point[0] - 0.25) <= 1e-12,
    }
    base = assembly_buoyancy([("a", _region(0.2, -0.3)), ("b", _region(0.7, 1.1))]).application_point
    scaled = assembly_buoyancy([("a", _region(2.0, -0.3)), ("b", _region(7.0, 1.1))]).application_point
    checks["scale invariance"] = np.allclose(base, scaled, rtol=0, atol=1e-12)
    bad = [k for k, v in checks.items() if not v]
    record(5, not bad, "all checks hold" if not bad else f"failed: {', '.join(bad)}")
    assert not bad


def test_06_archimedes_settling(record, compiled):
    scene = load_scene(SCENES / "still_cube.cfg")
    t0 = time.perf_counter()
    tr = run_drop(scene.assembly, scene.surface, scene.sim, scene.initial_state)
    elapsed = time.perf_counter() - t0
    frac = draft(tr.final_state, scene.assembly, 0.0) / scene.body_height
    ok = abs(frac - 0.5) <= 0.02 * 0.5 and elapsed < 2.0
    record(6, ok, f"settled draft {frac:.5f} of height (0.5 +- 2%), run {elapsed:.2f} s (< 2 s)")
    assert ok


def test_07_wave_following(record):
    scene = load_scene(SCENES / "wave_cube.cfg")
    tr = run_drop(scene.assembly, scene.surface, scene.sim, scene.initial_state)
    t, z = tr.column("t"), tr.column("z_cog")
    f = dominant_frequency(t, z, 2.0)
    amp = (z[t > 2.0].max() - z[t > 2.0].min()) / 2
    ok = abs(f - 0.5) <= 0.05 * 0.5
    record(7, ok, f"CoG frequency {f:.4f} Hz after t = 2 s (0.5 +- 5%); amplitude {amp:.3f} m (reported only)")
    assert ok


def test_08_realtime_budget(record):
    mesh = icosphere(0.5, 5)
    assert mesh.vertex_count >= 10_000
    cfg = SimConfig(method=Method.HULL, clip_mode=ClipMode.CLIPPED)
    state = RigidState(position=[0, 0, 0.1], orientation=rotation.from_euler(0.2, 0.1, 0.0),
                       mass=50.0, inertia=np.eye(3))
    surface = WaterSurface.still(0.0)
    step(state, [mesh], surface, cfg, 0.0)  # compile and warm caches
    times = []
    for _ in range(100):
        t0 = time.perf_counter()
        step(state, [mesh], surface, cfg, 0.0)
        times.append((time.perf_counter() - t0) * 1e3)
    med = float(np.median(times))
    record(8, med < 16.6, f"median step {med:.2f} ms on {mesh.vertex_count} vertices (< 16.6 ms)")
    assert med < 16.6


def test_09_iteration_counts(record):
    rep = run_bench(hourglass(0.5, 1.0, 64), reps=3, threads=1)
    sliced, hull = rep.total_ops("sliced"), rep.total_ops("hull_clipped")
    ratio = rep.sliced_to_hull_ratio
    ok = sliced < hull
    record(9, ok, f"hourglass ops sliced {sliced} vs hull_clipped {hull}: ratio {ratio:.3f} "
                  f"(reference {REFERENCE_RATIO:.2f}); vs vertices_only {rep.sliced_to_vertices_only_ratio:.3f}")
    assert ok


def test_10_force_consistency(record):
    scene = load_scene(SCENES / "still_cube.cfg")
    s0 = scene.initial_state
    # equilibrium pose: bottom face 0.05 m under the surface, at rest
    state = RigidState(position=[0, 0, 0.0], mass=s0.mass, inertia=s0.inertia)
    cfg = SimConfig(dt=0.01, duration=1.0, linear_damping=5.0, angular_damping=0.01, record_timing=False)
    tr = run_drop(scene.assembly, WaterSurface.still(0.0), cfg, state)
    fb = tr.column("fb")
    mg = s0.mass * 9.81
    rel = float(np.std(fb)) / mg
    record(10, rel < 1e-3, f"F_b std over {len(fb)} steps = {100 * rel:.2e}% of mg (< 0.1%)")
    assert len(fb) == 100 and rel < 1e-3


def test_11_monotonicity_and_bounds(record):
    rng = np.random.default_rng(11)
    meshes = {"cube": box(1, 1, 1), "icosphere": icosphere(1.0, 3), "hourglass": hourglass(0.5, 1.0, 64)}
    counts = {}
    for name, m in meshes.items():
        z = m.vertices[:, 2]
        levels = np.sort(rng.uniform(z.min() - 0.1, z.max() + 0.1, 50))
        total = mesh_total_volume(m)
        prev = 0.0
        bad = {"monotone": 0, "bounds": 0, "clip>=vertices": 0}
        for lv in levels:
            s = WaterSurface.still(float(lv))
            v = hull_submerged_volume(m, None, s, 0.0, ClipMode.CLIPPED).volume
            vo = hull_submerged_volume(m, None, s, 0.0, ClipMode.VERTICES_ONLY).volume
            bad["monotone"] += v < prev - 1e-12
            bad["bounds"] += not (0.0 <= v <= total * 1.03)
            bad["clip>=vertices"] += v < vo - 1e-12
            prev = v
        counts[name] = bad
    total_bad = sum(sum(b.values()) for b in counts.values())
    detail = "; ".join(f"{n}: " + ", ".join(f"{k} {v}" for k, v in b.items()) for n, b in counts.items())
    record(11, total_bad == 0, f"violations over 50 levels each -- {detail}")
    assert total_bad == 0


def test_12_determinism_and_golden(record):
    results = []
    for name in ("still_cube", "wave_cube"):
        scene = load_scene(SCENES / f"{name}.cfg")
        a = run_drop(scene.assembly, scene.surface, scene.sim, scene.initial_state).to_csv()
        b = run_drop(scene.assembly, scene.surface, scene.sim, scene.initial_state).to_csv()
        golden = (GOLDEN / f"{name}_trace.csv").read_text(encoding="utf-8")
        results.append((name, a == b, a == golden))
    ok = all(same and gold for _, same, gold in results)
    detail = ", ".join(f"{n}: repeat {'identical' if s else 'DIFFERS'}, golden {'match' if g else 'MISMATCH'}"
                       for n, s, g in results)
    record(12, ok, detail)
    assert ok
