"""Command-line entry point: ``polsqueeze {propagate,moments,sweep,qpm,verify}``.

Exit status: 0 success, 1 domain/validation error, 2 usage error. Every error
is reported as one line starting with ``error:`` on standard error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .errors import DomainError
from .experiments import SweepPlan, load_plan, run_sweep
from .moments import InputState, Mode, mean_photon_numbers, photon_number_variance, stokes_variances_wick
from .propagator import CouplingRatios, lambda_matrix, symplectic_residual
from .qpm import load_dispersion_table, qpm_report
from .verification import run_all

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x: float) -> str:
    return repr(float(x))


def _add_couplings(p, zeta=True):
    p.add_argument("--k1", type=float, required=True, help="gamma3/gamma1")
    p.add_argument("--k2", type=float, required=True, help="gamma2/gamma1")
    if zeta:
        p.add_argument("--zeta", type=float, required=True, help="normalized interaction length")


def _add_state(p):
    p.add_argument("--n1o", type=float, default=1.0, help="initial mean photons, mode 1o")
    p.add_argument("--n1e", type=float, default=1.0, help="initial mean photons, mode 1e")
    p.add_argument("--phase-sum", type=float, default=math.pi, help="phi_1o + phi_1e [rad]")
    p.add_argument("--phase-diff", type=float, default=0.0, help="phi_1o - phi_1e [rad]")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polsqueeze", allow_abbrev=False, description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help):
        p = sub.add_parser(name, help=help, allow_abbrev=False)
        p.add_argument("-o", "--output", help="write to this file instead of standard output")
        return p

    p = command("propagate", "print the 3x3 propagator and its symplectic residual")
    _add_couplings(p)

    p = command("moments", "photon numbers, photon variances and Stokes report")
    _add_couplings(p)
    _add_state(p)
    p.add_argument("--format", choices=("table", "csv"), default="table")

    p = command("sweep", "sweep zeta and write the CSV table")
    p.add_argument("--plan", help="plan file (key = value per line)")
    p.add_argument("--k1", type=float)
    p.add_argument("--k2", type=float)
    p.add_argument("--n1o", type=float)
    p.add_argument("--n1e", type=float)
    p.add_argument("--phase-sum", type=float)
    p.add_argument("--phase-diff", type=float)
    p.add_argument("--zeta-start", type=float)
    p.add_argument("--zeta-end", type=float)
    p.add_argument("--zeta-steps", type=int)
    p.add_argument("--outputs", help="comma-separated subset of photon_means,photon_variances,stokes")
    p.add_argument("--format", choices=("table", "csv"), default="csv")

    p = command("qpm", "quasi-phase-matching periods and coherence lengths")
    p.add_argument("--table", required=True, help="dispersion table: wavelength_um n_o n_e")
    p.add_argument("--wavelength", type=float, required=True, help="fundamental wavelength [um]")
    for j in range(1, 5):
        p.add_argument(f"--order{j}", type=int, default=1, help=f"odd QPM order of process P{j}")
    for j in range(1, 5):
        p.add_argument(f"--xi{j}", type=float, help=f"nonlinear coupling of process P{j}")
    p.add_argument("--rtol", type=float, default=1e-3, help="tolerance of the simultaneity check")

    p = command("verify", "run the oracle cross-check suite")
    p.add_argument("--grid", type=int, default=10, help="points per axis (grid^3 samples)")
    p.add_argument("--steps", type=int, default=10_000, help="RK4 steps of the oracle")
    return parser


def _propagate(args) -> tuple[str, int]:
    p = lambda_matrix(CouplingRatios(args.k1, args.k2), args.zeta)
    lines = [" ".join(f"{x:>24}" for x in map(_fmt, row)) for row in p.lam]
    lines.append(f"symplectic_residual {_fmt(symplectic_residual(p))}")
    return "\n".join(lines) + "\n", EXIT_OK


def _state(args) -> InputState:
    return InputState.from_photon_numbers(args.n1o, args.n1e, args.phase_sum, args.phase_diff)


def _moments(args) -> tuple[str, int]:
    p = lambda_matrix(CouplingRatios(args.k1, args.k2), args.zeta)
    s = _state(args)
    n = mean_photon_numbers(p, s)
    var = (photon_number_variance(p, s, Mode.O1), photon_number_variance(p, s, Mode.E1))
    rep = stokes_variances_wick(p, s)
    if args.format == "csv":
        header = "zeta,N1o,N1e,N3e,varN1o,varN1e," + ",".join(
            [f"S{j}" for j in range(4)] + [f"varS{j}" for j in range(4)] + [f"V{j}" for j in range(4)]
        )
        vals = [args.zeta, *n, *var, *rep.means, *rep.variances, *rep.normalized]
        return header + "\n" + ",".join(map(_fmt, vals)) + "\n", EXIT_OK
    lines = [
        f"zeta        {_fmt(args.zeta)}",
        f"N1o N1e N3e {' '.join(map(_fmt, n))}",
        f"varN1o      {_fmt(var[0])}",
        f"varN1e      {_fmt(var[1])}",
        f"{'j':>2}{'<Sj>':>26}{'<dSj^2>':>26}{'Vj':>26}",
    ]
    for j in range(4):
        lines.append(
            f"{j:>2}{_fmt(rep.means[j]):>26}{_fmt(rep.variances[j]):>26}{_fmt(rep.normalized[j]):>26}"
        )
    return "\n".join(lines) + "\n", EXIT_OK


_SWEEP_FLAGS = {
    "k1": "k1",
    "k2": "k2",
    "n1o": "mag_sq_1o",
    "n1e": "mag_sq_1e",
    "phase_sum": "phase_sum",
    "phase_diff": "phase_diff",
    "zeta_start": "zeta_start",
    "zeta_end": "zeta_end",
    "zeta_steps": "zeta_steps",
    "outputs": "outputs",
}


def _sweep(args) -> tuple[str, int]:
    inline = {key: getattr(args, flag) for flag, key in _SWEEP_FLAGS.items() if getattr(args, flag) is not None}
    if args.plan:
        base = load_plan(args.plan)
        values = {f: getattr(base, f) for f in _SWEEP_FLAGS.values()}
        values["outputs"] = ",".join(sorted(base.outputs))
        values.update(inline)
        plan = SweepPlan.from_mapping({k: str(v) if k == "outputs" else v for k, v in values.items()})
    else:
        if "k1" not in inline or "k2" not in inline:
            raise UsageError("sweep needs --plan or both --k1 and --k2")
        plan = SweepPlan.from_mapping(inline)
    table = run_sweep(plan)
    if args.format == "csv":
        return table.to_csv(), EXIT_OK
    lines = ["".join(f"{c:>14}" for c in table.columns)]
    for row in table.rows:
        lines.append("".join(f"{x:>14.6g}" for x in row))
    return "\n".join(lines) + "\n", EXIT_OK


def _qpm(args) -> tuple[str, int]:
    table = load_dispersion_table(args.table)
    orders = [args.order1, args.order2, args.order3, args.order4]
    xis = [args.xi1, args.xi2, args.xi3, args.xi4]
    if any(x is not None for x in xis) and any(x is None for x in xis):
        raise UsageError("give all of --xi1..--xi4 or none")
    xi = None if xis[0] is None else xis
    rep = qpm_report(table, args.wavelength, orders, xi=xi, rtol=args.rtol)
    return rep.format() + "\n", EXIT_OK


def _verify(args) -> tuple[str, int]:
    if args.grid < 1 or args.steps < 1:
        raise UsageError("--grid and --steps must be positive")
    results = run_all(args.grid, args.steps)
    text = "\n".join(r.line() for r in results) + "\n"
    return text, EXIT_OK if all(r.passed for r in results) else EXIT_DOMAIN


HANDLERS = {
    "propagate": _propagate,
    "moments": _moments,
    "sweep": _sweep,
    "qpm": _qpm,
    "verify": _verify,
}


def _one_line(msg) -> str:
    return " ".join(str(msg).split())


def _unknown_flag(parser: argparse.ArgumentParser, argv) -> str | None:
    """First option in ``argv`` that the selected subcommand does not define."""
    if not argv or argv[0] not in HANDLERS:
        return None
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    known = sub.choices[argv[0]]._option_string_actions
    for tok in argv[1:]:
        if tok.startswith("-") and not _is_number(tok):
            flag = tok.split("=", 1)[0]
            if flag not in known:
                return flag
    return None


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text, status = HANDLERS[args.command](args)
    except UsageError as exc:
        argv = sys.argv[1:] if argv is None else list(argv)
        bad = _unknown_flag(parser, argv)
        msg = f"unrecognized option {bad}" if bad else _one_line(exc)
        print(f"error: usage: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return status


def main(argv=None) -> None:
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
