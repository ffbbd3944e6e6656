"""Grid-search squeezing witnesses and pin them as regression fixtures.

    python scripts/find_witnesses.py [--out tests/fixtures/witnesses.json]
"""

import argparse
import json
import math
import time
from pathlib import Path

from polsqueeze.experiments import squeezing_search
from polsqueeze.moments import InputState

GRID = dict(k1_range=(0.0, 1.0), k2_range=(0.0, 1.4), zeta_range=(0.0, 1.5), sizes=(20, 20, 50))
PHOTONS = (1.0, 1e3)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).parents[1] / "tests/fixtures/witnesses.json"))
    args = ap.parse_args()
    out = {"grid": {k: list(v) for k, v in GRID.items()}, "phase_sum": math.pi, "phase_diff": 0.0, "searches": {}}
    for n in PHOTONS:
        state = InputState.from_photon_numbers(n, n, math.pi, 0.0)
        t0 = time.perf_counter()
        res = squeezing_search(state=state, **GRID)
        print(f"|alpha|^2 = {n:g}: {res.evaluated} points in {time.perf_counter() - t0:.1f} s")
        for j, rec in enumerate(res.best_per_stokes):
            print(f"  min V{j} = {rec.normalized[j]:.6f} at k1={rec.k1:.4f} k2={rec.k2:.4f} zeta={rec.zeta:.4f}")
        b = res.best_max
        print(f"  min max(V) = {max(b.normalized):.6f} at k1={b.k1:.4f} k2={b.k2:.4f} zeta={b.zeta:.4f}")
        out["searches"][f"{n:g}"] = {"mag_sq": n, **res.as_dict()}
    Path(args.out).write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
