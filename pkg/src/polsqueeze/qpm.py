"""Quasi-phase-matching design for the four coupled processes.

Processes (fundamental wavelength ``lam``; harmonics and polarizations fixed):

    P1: w_o + w_e    -> 2w_e    dk1 = k_2e - k_1o - k_1e
    P2: w_o + 2w_e   -> 3w_e    dk2 = k_3e - k_1o - k_2e
    P3: w_e + 3w_e   -> 4w_o    dk3 = k_4o - k_1e - k_3e
    P4: 2w_e + 2w_e  -> 4w_o    dk4 = k_4o - 2 k_2e

Wave numbers are ``2 pi n / wavelength`` in rad/um. A grating of period
``Lambda`` and odd order ``m`` contributes ``m G`` with ``G = 2 pi / Lambda``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateInputError, DomainError, RangeError, TableFormatError
from .propagator import CouplingRatios

PROCESS_IDS = ("P1", "P2", "P3", "P4")
SIMULTANEITY_RATIO = 9.0


@dataclass(frozen=True, eq=False)
class DispersionTable:
    """Tabulated ``(wavelength_um, n_o, n_e)`` with linear interpolation."""

    wavelength: np.ndarray
    n_o: np.ndarray
    n_e: np.ndarray

    def __post_init__(self):
        arrays = [np.array(getattr(self, f), dtype=float) for f in ("wavelength", "n_o", "n_e")]
        wl, no, ne = arrays
        if wl.ndim != 1 or not (wl.shape == no.shape == ne.shape):
            raise DomainError("dispersion columns must be 1-d and equally long")
        if wl.size < 2:
            raise DomainError("dispersion table needs at least two rows")
        if not np.all(np.isfinite(arrays)):
            raise DomainError("dispersion table contains non-finite values")
        if np.any(np.diff(wl) <= 0):
            raise DomainError("wavelengths must be strictly increasing")
        if np.any(no <= 1) or np.any(ne <= 1):
            raise DomainError("refractive indices must exceed 1")
        for name, arr in zip(("wavelength", "n_o", "n_e"), arrays):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_rows(cls, rows) -> DispersionTable:
        arr = np.asarray(rows, dtype=float)
        return cls(arr[:, 0], arr[:, 1], arr[:, 2])

    def index(self, wavelength: float, polarization: str) -> float:
        if not self.wavelength[0] <= wavelength <= self.wavelength[-1]:
            raise RangeError(
                f"wavelength {wavelength} um outside table range "
                f"[{self.wavelength[0]}, {self.wavelength[-1]}]"
            )
        col = {"o": self.n_o, "e": self.n_e}[polarization]
        return float(np.interp(wavelength, self.wavelength, col))

    def wavenumber(self, wavelength: float, polarization: str) -> float:
        return 2.0 * math.pi * self.index(wavelength, polarization) / wavelength

    def scaled(self, factor: float) -> DispersionTable:
        return DispersionTable(self.wavelength, self.n_o * factor, self.n_e * factor)


def load_dispersion_table(path: str | Path) -> DispersionTable:
    """Read a whitespace-separated ``wavelength_um n_o n_e`` file; ``#`` starts a comment."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) != 3:
                raise TableFormatError(f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
            try:
                rows.append([float(x) for x in parts])
            except ValueError:
                raise TableFormatError(f"{path}:{lineno}: non-numeric field in {body!r}") from None
    if not rows:
        raise TableFormatError(f"{path}: no data rows")
    try:
        return DispersionTable.from_rows(rows)
    except DomainError as exc:
        raise TableFormatError(f"{path}: {exc}") from None


def bulk_mismatches(table: DispersionTable, fundamental_wavelength: float) -> np.ndarray:
    """Bulk phase mismatches ``(dk1, dk2, dk3, dk4)`` in rad/um."""
    lam = float(fundamental_wavelength)
    if not lam > 0:
        raise DomainError(f"fundamental wavelength must be positive, got {lam}")
    k1o = table.wavenumber(lam, "o")
    k1e = table.wavenumber(lam, "e")
    k2e = table.wavenumber(lam / 2, "e")
    k3e = table.wavenumber(lam / 3, "e")
    k4o = table.wavenumber(lam / 4, "o")
    return np.array(
        [
            k2e - k1o - k1e,
            k3e - k1o - k2e,
            k4o - k1e - k3e,
            k4o - 2.0 * k2e,
        ]
    )


def check_order(order: int) -> int:
    if int(order) != order or order % 2 == 0:
        raise DomainError(f"quasi-phase-matching order must be odd (m = +-1, +-3, ...), got {order}")
    return int(order)


def coherence_length(delta_k: float) -> float:
    """``pi/|dk|`` in um (infinite when ``dk = 0``)."""
    return math.inf if delta_k == 0 else math.pi / abs(delta_k)


@dataclass(frozen=True)
class QpmSolution:
    order: int  # signed, opposite in sign to delta_k
    period: float  # um; inf when no poling is needed
    coherence_length: float

    @property
    def poling_required(self) -> bool:
        return math.isfinite(self.period)


def qpm_solve(delta_k: float, order: int) -> QpmSolution:
    """Grating period cancelling ``delta_k`` at odd order ``|order|``.

    The sign of the order is chosen opposite to ``delta_k``. A zero mismatch
    yields ``poling_required == False`` rather than an error.
    """
    order = check_order(order)
    delta_k = float(delta_k)
    if not math.isfinite(delta_k):
        raise DomainError(f"delta_k must be finite, got {delta_k}")
    if delta_k == 0:
        return QpmSolution(order=abs(order), period=math.inf, coherence_length=math.inf)
    m = -int(math.copysign(abs(order), delta_k))
    period = 2 * abs(m) * math.pi / abs(delta_k)
    return QpmSolution(order=m, period=period, coherence_length=coherence_length(delta_k))


@dataclass(frozen=True)
class QpmProcess:
    id: str
    delta_k_bulk: float
    order: int
    period: float
    residual: float = field(init=False)
    coherence_length: float = field(init=False)

    def __post_init__(self):
        if self.id not in PROCESS_IDS:
            raise DomainError(f"unknown process id {self.id!r}")
        check_order(self.order)
        grating = 0.0 if math.isinf(self.period) else self.order * (2 * math.pi / self.period)
        object.__setattr__(self, "residual", self.delta_k_bulk + grating)
        object.__setattr__(self, "coherence_length", coherence_length(self.delta_k_bulk))


def design_processes(delta_k, orders) -> list[QpmProcess]:
    """Solve each process for its period and return the matched processes."""
    out = []
    for pid, dk, m in zip(PROCESS_IDS, delta_k, orders, strict=True):
        sol = qpm_solve(dk, m)
        out.append(QpmProcess(pid, float(dk), sol.order, sol.period))
    return out


@dataclass(frozen=True)
class SimultaneityReport:
    rtol: float
    no_poling_required: bool
    ratio_12: float  # L1/L2, target 1
    ratio_34: float  # L3/L4, target 1
    ratio_13: float  # L1/L3, target 9
    equal_12: bool
    equal_34: bool
    ninefold_13: bool
    single_grating: bool

    @property
    def passed(self) -> bool:
        return self.equal_12 and self.equal_34 and self.ninefold_13


def _ratio(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return math.nan
    return a / b


def _close(x: float, target: float, rtol: float) -> bool:
    return math.isfinite(x) and abs(x - target) <= rtol * abs(target)


def simultaneity_check(processes: list[QpmProcess], rtol: float = 1e-3) -> SimultaneityReport:
    """Check ``L1 = L2``, ``L3 = L4`` and ``L1 = 9 L3`` to relative tolerance ``rtol``."""
    if len(processes) != 4:
        raise DomainError(f"expected 4 processes, got {len(processes)}")
    lc = [p.coherence_length for p in processes]
    r12, r34, r13 = _ratio(lc[0], lc[1]), _ratio(lc[2], lc[3]), _ratio(lc[0], lc[2])
    periods = [p.period for p in processes]
    single = all(math.isfinite(t) for t in periods) and all(
        _close(t, periods[0], rtol) for t in periods[1:]
    )
    return SimultaneityReport(
        rtol=rtol,
        no_poling_required=all(p.delta_k_bulk == 0 for p in processes),
        ratio_12=r12,
        ratio_34=r34,
        ratio_13=r13,
        equal_12=_close(r12, 1.0, rtol),
        equal_34=_close(r34, 1.0, rtol),
        ninefold_13=_close(r13, SIMULTANEITY_RATIO, rtol),
        single_grating=single,
    )


@dataclass(frozen=True, eq=False)
class EffectiveCouplings:
    gamma: np.ndarray
    ratios: CouplingRatios


def effective_couplings(xi, orders) -> EffectiveCouplings:
    """Grating-averaged couplings ``gamma_j = 2 xi_j / (pi m_j)``.

    ``k1 = |gamma3/gamma1|`` and ``k2 = |gamma2/gamma1|``; signs are absorbed in
    the pump phase convention. ``gamma4`` is reported but does not enter the
    reduced three-mode system.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (4,):
        raise DomainError("need four coupling coefficients")
    orders = [check_order(m) for m in orders]
    if len(orders) != 4:
        raise DomainError("need four orders")
    if xi[0] == 0:
        raise DegenerateInputError("xi_1 = 0: the normalization gamma_1 vanishes")
    gamma = 2.0 * xi / (math.pi * np.array(orders, dtype=float))
    return EffectiveCouplings(gamma, CouplingRatios(abs(gamma[2] / gamma[0]), abs(gamma[1] / gamma[0])))


@dataclass(frozen=True, eq=False)
class QpmReport:
    fundamental_wavelength: float
    processes: list[QpmProcess]
    simultaneity: SimultaneityReport
    couplings: EffectiveCouplings | None = None

    def format(self) -> str:
        lines = [f"fundamental wavelength: {self.fundamental_wavelength:.17g} um"]
        lines.append(f"{'process':<8}{'dk_bulk[rad/um]':>24}{'order':>7}{'period[um]':>24}"
                     f"{'residual[rad/um]':>24}{'L_coh[um]':>24}")
        for p in self.processes:
            lines.append(
                f"{p.id:<8}{p.delta_k_bulk:>24.17g}{p.order:>7d}{p.period:>24.17g}"
                f"{p.residual:>24.17g}{p.coherence_length:>24.17g}"
            )
        s = self.simultaneity
        lines.append(f"L1/L2 = {s.ratio_12:.17g} ({'pass' if s.equal_12 else 'fail'})")
        lines.append(f"L3/L4 = {s.ratio_34:.17g} ({'pass' if s.equal_34 else 'fail'})")
        lines.append(f"L1/L3 = {s.ratio_13:.17g} (target 9; {'pass' if s.ninefold_13 else 'fail'})")
        lines.append(f"single grating: {'yes' if s.single_grating else 'no'}")
        if s.no_poling_required:
            lines.append("no poling required: all bulk mismatches vanish")
        if self.couplings is not None:
            g = self.couplings.gamma
            lines.append("gamma: " + " ".join(f"{x:.17g}" for x in g))
            r = self.couplings.ratios
            lines.append(f"k1 = {r.k1:.17g}  k2 = {r.k2:.17g}  q^2 = {r.q_sq:.17g}")
        return "\n".join(lines)


def qpm_report(
    table: DispersionTable, fundamental_wavelength: float, orders, xi=None, rtol: float = 1e-3
) -> QpmReport:
    orders = [check_order(m) for m in orders]
    dk = bulk_mismatches(table, fundamental_wavelength)
    procs = design_processes(dk, orders)
    couplings = effective_couplings(xi, orders) if xi is not None else None
    return QpmReport(float(fundamental_wavelength), procs, simultaneity_check(procs, rtol), couplings)
