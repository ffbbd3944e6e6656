"""Write the term-level comparison of the printed variance formulas vs the Wick engine.

    python scripts/erratum_report.py [--out results/erratum_stokes_variance.md]
"""

import argparse
from pathlib import Path

from polsqueeze.erratum import erratum_report
from polsqueeze.propagator import CouplingRatios, lambda_matrix

PROBE = (0.3, 0.7, 0.6)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).parents[1] / "results/erratum_stokes_variance.md"))
    args = ap.parse_args()
    k1, k2, zeta = PROBE
    text = erratum_report(lambda_matrix(CouplingRatios(k1, k2), zeta))
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(text)
    print(text)


if __name__ == "__main__":
    main()
