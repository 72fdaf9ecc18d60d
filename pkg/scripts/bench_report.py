"""Operation counts and timings for the three estimators on several meshes.

Writes one bench CSV per mesh plus a slice-spacing sweep for the hourglass,
showing where the sliced method starts to need fewer operations than the hull.
"""

import argparse
import csv
from pathlib import Path

from hullborne.bench import run_bench
from hullborne.primitives import builtin_primitive

MESHES = ("hourglass:0.5,1,64", "icosphere:1,4", "icosphere:0.5,5", "cylinder:0.5,1,64")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for spec in MESHES:
        rep = run_bench(builtin_primitive(spec), reps=args.reps)
        tag = spec.replace(":", "_").replace(",", "_")
        (out / f"bench_{tag}.csv").write_text(rep.to_csv())
        print(f"{spec:<22} sliced/hull_clipped ops {rep.sliced_to_hull_ratio:.3f}")

    mesh = builtin_primitive(MESHES[0])
    with open(out / "slice_sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("slices", "dz", "ops_ratio", "max_sliced_error_pct"))
        for n in (5, 10, 20, 50, 100, 200):
            rep = run_bench(mesh, reps=3, dz=2.0 / n)
            err = max(a.error_pct for a in rep.aggregates if a.method == "sliced")
            w.writerow((n, f"{2.0 / n:g}", f"{rep.sliced_to_hull_ratio:.4f}", f"{err:.4f}"))
            print(f"hourglass with {n:>3} slices: ops ratio {rep.sliced_to_hull_ratio:.3f}, "
                  f"sliced error {err:.3f}%")


if __name__ == "__main__":
    main()
