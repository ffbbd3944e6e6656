"""Sweeps over the interaction length and grid searches for squeezing."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import DomainError
from .moments import InputState, Mode, mean_photon_numbers, photon_number_variance, stokes_variances_wick
from .propagator import CouplingRatios, lambda_matrix

OUTPUT_GROUPS = frozenset({"photon_means", "photon_variances", "stokes"})
CSV_COLUMNS = ("zeta", "N1o", "N1e", "N3e", "V0", "V1", "V2", "V3", "S0", "S1", "S2", "S3")
VARIANCE_COLUMNS = ("varN1o", "varN1e")

# Operating point used for all figure-style sweeps (only k1 < k2 is known).
FIXTURE_K1 = 0.2
FIXTURE_K2 = 0.5


@dataclass(frozen=True)
class SweepPlan:
    k1: float
    k2: float
    mag_sq_1o: float = 1.0
    mag_sq_1e: float = 1.0
    phase_sum: float = math.pi
    phase_diff: float = 0.0
    zeta_start: float = 0.0
    zeta_end: float = 1.0
    zeta_steps: int = 101
    outputs: frozenset = field(default=frozenset({"photon_means", "stokes"}))

    def __post_init__(self):
        for f in fields(self):
            if f.name in ("zeta_steps", "outputs"):
                continue
            v = float(getattr(self, f.name))
            if not math.isfinite(v):
                raise DomainError(f"{f.name} must be finite, got {v}")
            object.__setattr__(self, f.name, v)
        if int(self.zeta_steps) != self.zeta_steps or self.zeta_steps < 1:
            raise DomainError(f"zeta_steps must be a positive integer, got {self.zeta_steps}")
        object.__setattr__(self, "zeta_steps", int(self.zeta_steps))
        if not (self.zeta_end > self.zeta_start >= 0):
            raise DomainError(
                f"need zeta_end > zeta_start >= 0, got [{self.zeta_start}, {self.zeta_end}]"
            )
        if self.mag_sq_1o < 0 or self.mag_sq_1e < 0:
            raise DomainError("initial mean photon numbers must be nonnegative")
        outputs = frozenset(self.outputs)
        unknown = outputs - OUTPUT_GROUPS
        if unknown or not outputs:
            raise DomainError(f"outputs must be a nonempty subset of {sorted(OUTPUT_GROUPS)}")
        object.__setattr__(self, "outputs", outputs)
        CouplingRatios(self.k1, self.k2)

    @property
    def couplings(self) -> CouplingRatios:
        return CouplingRatios(self.k1, self.k2)

    @property
    def state(self) -> InputState:
        return InputState.from_photon_numbers(self.mag_sq_1o, self.mag_sq_1e, self.phase_sum, self.phase_diff)

    def zeta_grid(self) -> np.ndarray:
        """``zeta_start + i h`` for ``i < zeta_steps``, ``h`` spanning to ``zeta_end``."""
        if self.zeta_steps == 1:
            return np.array([self.zeta_start])
        h = (self.zeta_end - self.zeta_start) / (self.zeta_steps - 1)
        return self.zeta_start + np.arange(self.zeta_steps) * h

    @classmethod
    def from_mapping(cls, values: dict) -> SweepPlan:
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise DomainError(f"unknown plan key {key!r}")
            if key == "outputs":
                kwargs[key] = frozenset(x.strip() for x in str(raw).split(",") if x.strip())
            elif key == "zeta_steps":
                try:
                    kwargs[key] = int(raw)
                except ValueError:
                    raise DomainError(f"zeta_steps must be an integer, got {raw!r}") from None
            else:
                try:
                    kwargs[key] = float(raw)
                except ValueError:
                    raise DomainError(f"{key} must be numeric, got {raw!r}") from None
        missing = {"k1", "k2"} - kwargs.keys()
        if missing:
            raise DomainError(f"plan is missing required keys: {', '.join(sorted(missing))}")
        return cls(**kwargs)


def parse_plan(text: str, source: str = "<plan>") -> SweepPlan:
    """Parse ``key = value`` lines (``#`` comments, one key per line)."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise DomainError(f"{source}:{lineno}: expected 'key = value'")
        key, val = (x.strip() for x in body.split("=", 1))
        if key in values:
            raise DomainError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = val
    return SweepPlan.from_mapping(values)


def load_plan(path: str | Path) -> SweepPlan:
    return parse_plan(Path(path).read_text(encoding="utf-8"), str(path))


def figure_plan(name: str) -> SweepPlan:
    """Plans behind the photon-number and variance figures at the fixture point."""
    common = dict(k1=FIXTURE_K1, k2=FIXTURE_K2, phase_sum=math.pi)
    plans = {
        "photon": SweepPlan(**common, zeta_end=2.0, zeta_steps=201),
        "photon-ordinary": SweepPlan(0.0, 0.0, phase_sum=math.pi, zeta_end=2.0, zeta_steps=201),
        "variance-1": SweepPlan(**common, zeta_end=1.0, zeta_steps=101),
        "variance-1000": SweepPlan(**common, mag_sq_1o=1e3, mag_sq_1e=1e3, zeta_end=1.0, zeta_steps=101),
    }
    if name not in plans:
        raise DomainError(f"unknown figure plan {name!r}; choose from {sorted(plans)}")
    return plans[name]


@dataclass(frozen=True, eq=False)
class SweepTable:
    columns: tuple[str, ...]
    rows: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([format(float(x), ".17g") for x in row])
        return buf.getvalue()


def run_sweep(plan: SweepPlan) -> SweepTable:
    """One row per zeta grid point; unrequested groups are written as NaN."""
    k = plan.couplings
    s = plan.state
    want_var = "photon_variances" in plan.outputs
    columns = CSV_COLUMNS + (VARIANCE_COLUMNS if want_var else ())
    rows = []
    for zeta in plan.zeta_grid():
        p = lambda_matrix(k, zeta)
        row = [zeta] + [math.nan] * (len(columns) - 1)
        if "photon_means" in plan.outputs:
            row[1:4] = mean_photon_numbers(p, s)
        if "stokes" in plan.outputs:
            rep = stokes_variances_wick(p, s)
            row[4:8] = rep.normalized
            row[8:12] = rep.means
        if want_var:
            row[12] = photon_number_variance(p, s, Mode.O1)
            row[13] = photon_number_variance(p, s, Mode.E1)
        rows.append(row)
    return SweepTable(columns, np.array(rows, dtype=float))


@dataclass(frozen=True)
class SearchRecord:
    k1: float
    k2: float
    zeta: float
    normalized: tuple[float, float, float, float]

    def as_dict(self) -> dict:
        return {"k1": self.k1, "k2": self.k2, "zeta": self.zeta, "V": list(self.normalized)}


@dataclass(frozen=True)
class SearchResult:
    best_per_stokes: tuple[SearchRecord, SearchRecord, SearchRecord, SearchRecord]
    best_max: SearchRecord
    evaluated: int

    def as_dict(self) -> dict:
        return {
            "best_per_stokes": [r.as_dict() for r in self.best_per_stokes],
            "best_max": self.best_max.as_dict(),
            "evaluated": self.evaluated,
        }


def squeezing_search(
    k1_range: tuple[float, float],
    k2_range: tuple[float, float],
    zeta_range: tuple[float, float],
    sizes: tuple[int, int, int],
    state: InputState,
    strict: bool = True,
) -> SearchResult:
    """Exhaustive grid scan minimizing each normalized Stokes variance.

    Only points with ``k1 < k2`` are kept (``k1 <= k2`` when ``strict`` is
    false). Ties are broken by smallest zeta, then k2, then k1.
    """
    if any(int(n) < 1 for n in sizes):
        raise DomainError(f"grid sizes must be >= 1, got {sizes}")
    axes = [np.linspace(lo, hi, int(n)) for (lo, hi), n in zip((k1_range, k2_range, zeta_range), sizes)]
    best: list[tuple | None] = [None] * 5
    count = 0
    for k1 in axes[0]:
        for k2 in axes[1]:
            if k1 > k2 or (strict and k1 == k2):
                continue
            k = CouplingRatios(k1, k2)
            for zeta in axes[2]:
                v = tuple(float(x) for x in stokes_variances_wick(lambda_matrix(k, zeta), state).normalized)
                count += 1
                tie = (float(zeta), float(k2), float(k1))
                for j, score in enumerate(v + (max(v),)):
                    key = (score,) + tie
                    if best[j] is None or key < best[j][0]:
                        best[j] = (key, v)
    if count == 0:
        raise DomainError("search grid contains no admissible (k1, k2) point")

    def record(entry):
        (_, zeta, k2, k1), v = entry
        return SearchRecord(k1, k2, zeta, v)

    return SearchResult(tuple(record(b) for b in best[:4]), record(best[4]), count)
