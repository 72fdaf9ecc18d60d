"""Command line entry point: ``hullborne {hull,hydrostat,simulate,bench}``.

Exit codes: 0 success, 1 usage, 2 parse/validation error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import numpy as np

from . import bench as bench_mod
from .dynamics import NumericalAbort, dominant_frequency, draft, run_drop
from .hull import (
    DegenerateHull,
    hull_volume,
    quickhull,
    vertex_mean_centroid,
    volumetric_centroid,
)
from .mesh_io import MeshError, TriMesh, load_obj, mesh_total_volume
from .primitives import builtin_primitive
from .scene import SceneError, equilibrium_draft_fraction, format_scene_summary, load_scene
from .submersion import ClipMode, Method, volume_draft_curve
from .svg import write_plot
from .water import level_at

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _mesh_arg(source: str) -> TriMesh:
    """An OBJ path, or a primitive spec like ``hourglass:0.5,1,64``."""
    if os.path.exists(source) or ":" not in source:
        return load_obj(source)
    return builtin_primitive(source)


def _fmt(v) -> str:
    return "(" + ", ".join(f"{x:.6g}" for x in v) + ")"


def cmd_hull(args) -> int:
    mesh = _mesh_arg(args.mesh)
    hull = quickhull(mesh.vertices)
    print(f"mesh: {mesh.name}  vertices: {mesh.vertex_count}  faces: {mesh.face_count}")
    print(f"hull vertices: {hull.n_vertices}")
    print(f"hull faces: {hull.n_faces}")
    print(f"mesh volume: {mesh_total_volume(mesh):.9g}")
    print(f"hull volume: {hull_volume(hull):.9g}")
    print(f"volumetric centroid: {_fmt(volumetric_centroid(hull))}")
    print(f"vertex-mean centroid: {_fmt(vertex_mean_centroid(hull))}")
    return EXIT_OK


def cmd_hydrostat(args) -> int:
    mesh = _mesh_arg(args.mesh)
    curve = volume_draft_curve(mesh, None, Method(args.method), args.levels,
                               ClipMode.VERTICES_ONLY if args.clip == "vertices" else ClipMode.CLIPPED,
                               args.dz)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("draft", "volume", "centroid_z"))
        for d, _, v, cz in curve:
            w.writerow((f"{d:.10g}", f"{v:.10g}", "" if math.isnan(cz) else f"{cz:.10g}"))
    finally:
        if args.out:
            out.close()
    if args.plot:
        label = f"{args.method}" + (f" ({args.clip})" if args.method == "hull" else "")
        write_plot(args.plot, [(label, curve[:, 0], curve[:, 2])],
                   title=f"submerged volume vs draft: {mesh.name}",
                   xlabel="draft (m)", ylabel="volume (m^3)")
    return EXIT_OK


def summarize(scene, trace) -> dict:
    t = trace.column("t")
    z = trace.column("z_cog")
    fb = trace.column("fb")
    eta = trace.column("eta")
    weight = scene.initial_state.mass * scene.fluid.g
    final_level = level_at(scene.surface, scene.sim.duration)
    settle = draft(trace.final_state, scene.assembly, final_level)
    tail = t > min(2.0, 0.4 * t[-1])
    return {
        "rows": len(trace),
        "final_z_cog": float(trace.final_state.position[2]),
        "settling_draft": settle,
        "settling_draft_fraction": settle / scene.body_height,
        "expected_draft_fraction": equilibrium_draft_fraction(scene),
        "oscillation_hz": dominant_frequency(t, z, t[tail][0]) if tail.sum() > 2 else math.nan,
        "oscillation_amplitude": float((z[tail].max() - z[tail].min()) / 2) if tail.any() else math.nan,
        "max_fb_deviation": float(np.abs(fb - weight).max()),
        "final_fb_deviation": float(abs(fb[-1] - weight)),
        "weight": weight,
        "eta_range": (float(eta.min()), float(eta.max())),
    }


def cmd_simulate(args) -> int:
    scene = load_scene(args.scene)
    trace = run_drop(scene.assembly, scene.surface, scene.sim, scene.initial_state)
    out = args.out or scene.outputs.get("trace")
    if out:
        trace.write(out)
    else:
        sys.stdout.write(trace.to_csv())
    plot = args.plot or scene.outputs.get("plot")
    if plot:
        t = trace.column("t")
        series = [("CoG z", t, trace.column("z_cog"))]
        if scene.surface.enabled:
            series.append(("water level", t, trace.column("eta")))
        write_plot(plot, series, title="flotation drop", xlabel="t (s)", ylabel="z (m)")
    s = summarize(scene, trace)
    lines = [
        format_scene_summary(scene),
        f"trace rows: {s['rows']}",
        f"settling draft: {s['settling_draft']:.6g} m "
        f"({s['settling_draft_fraction']:.4f} of height; Archimedes {s['expected_draft_fraction']:.4f})",
        f"oscillation frequency (t > 2 s): {s['oscillation_hz']:.4g} Hz",
        f"oscillation amplitude (t > 2 s): {s['oscillation_amplitude']:.4g} m",
        f"max |F_b - mg|: {s['max_fb_deviation']:.6g} N  final: {s['final_fb_deviation']:.6g} N",
    ]
    report = args.report or scene.outputs.get("report")
    text = "\n".join(lines) + "\n"
    if report:
        with open(report, "w", encoding="utf-8") as fh:
            fh.write(text)
    # summary goes to stderr when the trace itself is on stdout
    (sys.stderr if not out else sys.stdout).write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    mesh = _mesh_arg(args.mesh)
    drafts = [float(x) for x in args.drafts.split(",")] if args.drafts else bench_mod.DEFAULT_DRAFTS
    rep = bench_mod.run_bench(mesh, drafts, args.reps, args.dz)
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(rep.to_csv())
    sys.stdout.write(rep.table())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hullborne", description="Convex-hull buoyancy engine")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    h = sub.add_parser("hull", help="convex hull, volume and centroids of a mesh")
    h.add_argument("mesh", help="OBJ file or primitive spec (e.g. box:1,1,1)")
    h.set_defaults(func=cmd_hull)

    hs = sub.add_parser("hydrostat", help="submerged volume vs draft curve as CSV")
    hs.add_argument("mesh")
    hs.add_argument("--method", choices=("hull", "sliced"), default="hull")
    hs.add_argument("--levels", type=int, default=50)
    hs.add_argument("--clip", choices=("vertices", "clipped"), default="clipped")
    hs.add_argument("--dz", type=float, default=None, help="slice spacing (sliced method)")
    hs.add_argument("--out", help="CSV path (default stdout)")
    hs.add_argument("--plot", help="SVG path")
    hs.set_defaults(func=cmd_hydrostat)

    s = sub.add_parser("simulate", help="run a drop scene and write its trace")
    s.add_argument("scene")
    s.add_argument("--out", help="trace CSV path (overrides [output] trace)")
    s.add_argument("--plot", help="SVG path (overrides [output] plot)")
    s.add_argument("--report", help="summary text path (overrides [output] report)")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", help="time and count operations for each estimator")
    b.add_argument("mesh")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--drafts", help="comma-separated fractions of the mesh height")
    b.add_argument("--dz", type=float, default=None)
    b.add_argument("--out", help="CSV path for raw rows and aggregates")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "levels", 2) < 2:
        parser.error("--levels must be >= 2")
    if getattr(args, "reps", 3) < 3:
        parser.error("--reps must be >= 3")
    try:
        return args.func(args)
    except (MeshError, SceneError, DegenerateHull, FileNotFoundError) as exc:
        print(f"hullborne: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalAbort as exc:
        print(f"hullborne: numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"hullborne: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
