"""Drop the acceptance cube onto still water and onto waves.

For each scene in scenes/ this writes the trace CSV, a CoG plot, and a short
summary (settling draft, oscillation frequency and amplitude) to --out-dir.
"""

import argparse
from pathlib import Path

from hullborne.cli import summarize
from hullborne.dynamics import run_drop
from hullborne.scene import load_scene
from hullborne.svg import write_plot

SCENES = Path(__file__).resolve().parents[1] / "scenes"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("scenes", nargs="*", default=["still_cube", "wave_cube"])
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.scenes:
        scene = load_scene(SCENES / f"{name}.cfg")
        trace = run_drop(scene.assembly, scene.surface, scene.sim, scene.initial_state)
        trace.write(out / f"{name}_trace.csv")
        t = trace.column("t")
        series = [("CoG z", t, trace.column("z_cog"))]
        if scene.surface.enabled:
            series.append(("water level", t, trace.column("eta")))
        write_plot(out / f"{name}.svg", series, title=name.replace("_", " "), xlabel="t (s)", ylabel="z (m)")
        s = summarize(scene, trace)
        print(f"{name}: settling draft {s['settling_draft_fraction']:.4f} of height, "
              f"frequency {s['oscillation_hz']:.4g} Hz, amplitude {s['oscillation_amplitude']:.4g} m, "
              f"max |F_b - mg| {s['max_fb_deviation']:.4g} N")


if __name__ == "__main__":
    main()
