"""Timing and primitive-operation counts for the three volume estimators."""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .mesh_io import TriMesh
from .oracles import exact_submerged_volume
from .submersion import ClipMode, hull_submerged_volume, sliced_submerged_volume
from .water import WaterSurface

METHODS = ("hull_vertices_only", "hull_clipped", "sliced")
DEFAULT_DRAFTS = (0.1, 0.3, 0.5, 0.7, 0.9)
REFERENCE_RATIO = 0.60  # published iteration reduction, for comparison only

OPS_DEFINITION = (
    "ops = exact primitive-operation count per evaluation. "
    "hull: vertex/water-plane tests + edge/water-plane tests (clipped only) "
    "+ Quickhull point-to-face-plane distance evaluations. "
    "sliced: vertex/water-plane tests + edge z-span checks + edge/slice-plane "
    "intersections + 2D hull orientation tests + slice area evaluations."
)

CSV_COLUMNS = ("kind", "method", "draft_frac", "level", "rep", "ms", "p95_ms",
               "ops", "volume", "oracle_volume", "error_pct")


@dataclass
class BenchRow:
    method: str
    draft_frac: float
    level: float
    rep: int
    ms: float
    ops: int
    volume: float
    oracle_volume: float

    @property
    def error_pct(self) -> float:
        if self.oracle_volume <= 0:
            return 0.0 if self.volume == 0 else float("inf")
        return 100.0 * abs(self.volume - self.oracle_volume) / self.oracle_volume


@dataclass
class Aggregate:
    method: str
    draft_frac: float
    level: float
    mean_ms: float
    p95_ms: float
    ops: int
    volume: float
    oracle_volume: float
    error_pct: float


@dataclass
class BenchReport:
    mesh_name: str
    rows: list[BenchRow] = field(default_factory=list)
    aggregates: list[Aggregate] = field(default_factory=list)

    def total_ops(self, method: str) -> int:
        return sum(a.ops for a in self.aggregates if a.method == method)

    @property
    def sliced_to_hull_ratio(self) -> float:
        return self.total_ops("sliced") / self.total_ops("hull_clipped")

    @property
    def sliced_to_vertices_only_ratio(self) -> float:
        return self.total_ops("sliced") / self.total_ops("hull_vertices_only")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# {OPS_DEFINITION}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(["raw", r.method, f"{r.draft_frac:g}", f"{r.level:.10g}", r.rep,
                        f"{r.ms:.6f}", "", r.ops, f"{r.volume:.10g}", f"{r.oracle_volume:.10g}",
                        f"{r.error_pct:.6f}"])
        for a in self.aggregates:
            w.writerow(["aggregate", a.method, f"{a.draft_frac:g}", f"{a.level:.10g}", "",
                        f"{a.mean_ms:.6f}", f"{a.p95_ms:.6f}", a.ops, f"{a.volume:.10g}",
                        f"{a.oracle_volume:.10g}", f"{a.error_pct:.6f}"])
        return buf.getvalue()

    def table(self) -> str:
        lines = [
            f"bench: {self.mesh_name}",
            OPS_DEFINITION,
            "",
            f"{'method':<20}{'draft':>7}{'mean ms':>10}{'p95 ms':>10}{'ops':>10}{'volume':>12}{'err %':>9}",
        ]
        for a in self.aggregates:
            lines.append(f"{a.method:<20}{a.draft_frac:>7g}{a.mean_ms:>10.3f}{a.p95_ms:>10.3f}"
                         f"{a.ops:>10d}{a.volume:>12.6g}{a.error_pct:>9.3f}")
        lines += [
            "",
            "total ops: " + ", ".join(f"{m}={self.total_ops(m)}" for m in METHODS),
            f"sliced/hull_clipped op ratio: {self.sliced_to_hull_ratio:.3f} "
            f"(reference {REFERENCE_RATIO:.2f})",
            f"sliced/hull_vertices_only op ratio: {self.sliced_to_vertices_only_ratio:.3f}",
        ]
        return "\n".join(lines) + "\n"


def evaluate(method: str, mesh: TriMesh, level: float, dz: float | None):
    surface = WaterSurface.still(level)
    if method == "hull_vertices_only":
        return hull_submerged_volume(mesh, None, surface, 0.0, ClipMode.VERTICES_ONLY)
    if method == "hull_clipped":
        return hull_submerged_volume(mesh, None, surface, 0.0, ClipMode.CLIPPED)
    if method == "sliced":
        return sliced_submerged_volume(mesh, None, surface, 0.0, dz)
    raise ValueError(f"unknown method {method!r}")


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("HULLBORNE_THREADS", "1")))
    except ValueError:
        return 1


def run_bench(mesh: TriMesh, drafts=DEFAULT_DRAFTS, reps: int = 5, dz: float | None = None,
              methods=METHODS, threads: int | None = None) -> BenchReport:
    """Evaluate every (method, draft) cell ``reps`` times on a still water plane.

    Drafts are fractions of the mesh height measured from its lowest vertex.
    Errors are against the exact clipped-surface volume.
    """
    if reps < 3:
        raise ValueError("reps must be >= 3")
    z = mesh.vertices[:, 2]
    zmin, height = float(z.min()), float(z.max() - z.min())
    if dz is None:
        dz = height / 100.0
    levels = [zmin + f * height for f in drafts]
    oracle = [exact_submerged_volume(mesh, None, lv) for lv in levels]
    for m in methods:
        evaluate(m, mesh, levels[0], dz)  # compile/warm caches before timing

    cells = [(d, m) for d in range(len(drafts)) for m in methods]

    def run_cell(cell):
        d, m = cell
        out = []
        for rep in range(reps):
            t0 = time.perf_counter()
            reg = evaluate(m, mesh, levels[d], dz)
            ms = (time.perf_counter() - t0) * 1e3
            out.append(BenchRow(m, float(drafts[d]), levels[d], rep, ms, int(reg.ops),
                                float(reg.volume), oracle[d]))
        return out

    n_threads = min(threads or thread_cap(), len(cells))
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(run_cell, cells))
    else:
        results = [run_cell(c) for c in cells]

    report = BenchReport(mesh.name)
    for rows in results:
        report.rows.extend(rows)
        ms = np.array([r.ms for r in rows])
        r0 = rows[0]
        report.aggregates.append(Aggregate(
            method=r0.method, draft_frac=r0.draft_frac, level=r0.level,
            mean_ms=float(ms.mean()), p95_ms=float(np.percentile(ms, 95)),
            ops=r0.ops, volume=r0.volume, oracle_volume=r0.oracle_volume,
            error_pct=r0.error_pct,
        ))
    return report
