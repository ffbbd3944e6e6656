"""Regenerate the data behind the photon-number and Stokes-variance figures.

Writes one CSV per figure plan (fixture point k1 = 0.2, k2 = 0.5). With
``--plot`` also renders PNGs if matplotlib is available.

    python scripts/reproduce_figures.py --outdir results
"""

import argparse
from pathlib import Path

from polsqueeze.experiments import figure_plan, run_sweep

PLANS = ("photon", "photon-ordinary", "variance-1", "variance-1000")


def _plot(tables, outdir):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    t, t0 = tables["photon"], tables["photon-ordinary"]
    z = t.column("zeta")
    ax.plot(z, t.column("N1o"), label="N1o")
    ax.plot(z, t.column("N1e"), label="N1e")
    ax.plot(z, t0.column("N1o"), "--", label="N1o = N1e (k1 = k2 = 0)")
    ax.plot(z, t.column("N3e"), label="N3e")
    ax.set_xlabel("zeta")
    ax.set_ylabel("mean photon number")
    ax.legend()
    fig.savefig(outdir / "photon_numbers.png", dpi=120)
    for name in ("variance-1", "variance-1000"):
        fig, ax = plt.subplots()
        t = tables[name]
        for j in range(4):
            ax.plot(t.column("zeta"), t.column(f"V{j}"), label=f"V{j}")
        ax.axhline(1.0, color="k", lw=0.5)
        ax.set_xlabel("zeta")
        ax.set_ylabel("normalized variance")
        ax.legend()
        fig.savefig(outdir / f"{name}.png", dpi=120)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--plot", action="store_true")
    args = ap.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tables = {}
    for name in PLANS:
        tables[name] = run_sweep(figure_plan(name))
        path = outdir / f"{name}.csv"
        path.write_text(tables[name].to_csv(), newline="\n")
        print(f"wrote {path}")
    if args.plot:
        _plot(tables, outdir)


if __name__ == "__main__":
    main()
