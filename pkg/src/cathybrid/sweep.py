"""Parameter sweeps over (beta, t), max-negativity search and CSV/JSON emission."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .entangler import BeamSplitterParams, ConditionalResult, DelocalizedPhoton, evolve_and_condition
from .errors import ConfigError, OutcomeError
from .fock import DEFAULT_CUTOFF, TAIL_TOLERANCE
from .states import Kind, StateSpec, build

CSV_COLUMNS = ("beta", "t", "n", "probability", "negativity", "B_abs", "separable")
SEARCH_COLUMNS = ("beta", "t", "n", "probability", "negativity")
MAX_NEGATIVITY_FLOOR = 0.999
REFINE_TOL = 1e-6


@dataclass(frozen=True)
class Range:
    """Inclusive linspace ``start..stop`` with ``num`` samples."""

    start: float
    stop: float
    num: int = 1

    def __post_init__(self):
        if self.num < 1:
            raise ConfigError("a range needs at least one sample")
        if self.num == 1 and self.start != self.stop:
            raise ConfigError("a single-sample range must have start == stop")

    @classmethod
    def single(cls, value: float) -> "Range":
        return cls(value, value, 1)

    @classmethod
    def parse(cls, value) -> "Range":
        if isinstance(value, Range):
            return value
        if isinstance(value, (int, float)):
            return cls.single(float(value))
        if isinstance(value, (list, tuple)) and len(value) == 3:
            return cls(float(value[0]), float(value[1]), int(value[2]))
        if isinstance(value, dict):
            return cls(float(value["start"]), float(value["stop"]), int(value.get("num", 1)))
        raise ConfigError(f"cannot read a range from {value!r}")

    def samples(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)

    def to_list(self) -> list:
        return [self.start, self.stop, self.num]


@dataclass(frozen=True)
class RunConfig:
    state: StateSpec
    photon: DelocalizedPhoton = field(default_factory=DelocalizedPhoton.balanced)
    outcomes: tuple = (0,)
    beta: Range = Range.single(1.0)
    t: Range = Range.single(0.5)
    cutoff: int = DEFAULT_CUTOFF
    tail_tol: float = TAIL_TOLERANCE
    output_format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "beta", Range.parse(self.beta))
        object.__setattr__(self, "t", Range.parse(self.t))
        object.__setattr__(self, "outcomes", tuple(int(n) for n in self.outcomes))
        if not self.outcomes:
            raise ConfigError("outcome list is empty")
        lo, hi = sorted((self.t.start, self.t.stop))
        if not (0.0 < lo and hi < 1.0):
            raise ConfigError(f"t range [{lo}, {hi}] must lie inside (0, 1)")
        if min(self.beta.start, self.beta.stop) < 0:
            raise ConfigError("beta range must be nonnegative")
        if self.cutoff < 1:
            raise ConfigError("cutoff must be positive")
        for n in self.outcomes:
            if not 0 <= n <= self.cutoff + 1:
                raise OutcomeError(f"outcome {n} outside 0..{self.cutoff + 1}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.workers < 1:
            raise ConfigError("workers must be positive")


@dataclass(frozen=True)
class CellRecord:
    beta: float
    t: float
    n: int
    probability: float
    negativity: float
    b_abs: float
    separable: bool

    @classmethod
    def from_result(cls, beta: float, t: float, res: ConditionalResult) -> "CellRecord":
        return cls(beta, t, res.n, res.probability, res.negativity, abs(res.b_param), res.separable)

    def row(self) -> tuple:
        return (self.beta, self.t, self.n, self.probability, self.negativity, self.b_abs, self.separable)


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Records indexed ``[i_beta, i_t, i_outcome]``."""

    betas: np.ndarray
    ts: np.ndarray
    outcomes: tuple
    records: tuple

    def cell(self, i: int, j: int, k: int = 0) -> CellRecord:
        return self.records[i][j][k]

    def rows(self):
        """Row-major in (beta, t), then outcome."""
        for plane in self.records:
            for cell in plane:
                yield from cell

    def array(self, name: str, k: int = 0) -> np.ndarray:
        return np.array([[getattr(c[k], name) for c in plane] for plane in self.records])


def evaluate(spec: StateSpec, beta: float, t: float, n: int, photon: DelocalizedPhoton,
             cutoff: int = DEFAULT_CUTOFF, tail_tol: float = TAIL_TOLERANCE) -> ConditionalResult:
    state = build(spec.with_beta(beta), cutoff, tail_tol)
    return evolve_and_condition(state, photon, BeamSplitterParams(t), n)


def _cell(config: RunConfig, beta: float, t: float) -> tuple:
    state = build(config.state.with_beta(beta), config.cutoff, config.tail_tol)
    params = BeamSplitterParams(t)
    return tuple(CellRecord.from_result(beta, t, evolve_and_condition(state, config.photon, params, n))
                 for n in config.outcomes)


def sweep(config: RunConfig) -> SweepGrid:
    betas = config.beta.samples()
    ts = config.t.samples()
    jobs = [(float(b), float(t)) for b in betas for t in ts]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            flat = list(pool.map(lambda job: _cell(config, *job), jobs))
    else:
        flat = [_cell(config, b, t) for b, t in jobs]
    records = tuple(tuple(flat[i * ts.size:(i + 1) * ts.size]) for i in range(betas.size))
    return SweepGrid(betas, ts, config.outcomes, records)


@dataclass(frozen=True)
class MaxPoint:
    beta: float
    t: float
    n: int
    probability: float
    negativity: float

    def row(self) -> tuple:
        return (self.beta, self.t, self.n, self.probability, self.negativity)


def _residual_of(config: RunConfig, res: ConditionalResult) -> float:
    """|a0| - |a1| |B|; zero exactly where negativity is 1."""
    if res.separable:
        return math.nan
    return abs(config.photon.a0) - abs(config.photon.a1) * res.b_param


def _residual(config: RunConfig, beta: float, t: float, n: int) -> float:
    res = evaluate(config.state, beta, t, n, config.photon, config.cutoff, config.tail_tol)
    return _residual_of(config, res)


def _bisect(f, lo: float, hi: float, f_lo: float, tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if math.isnan(f_mid):
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def search_max(config: RunConfig, floor: float = MAX_NEGATIVITY_FLOOR,
               tol: float = REFINE_TOL) -> list[MaxPoint]:
    """Points where the heralded state is (near-)maximally entangled.

    Every grid sample with negativity >= ``floor`` is kept. Where the residual
    |a0| - |a1||B| changes sign between neighbouring samples, the crossing is
    refined by bisection along that axis, giving a point with negativity 1.
    Sorted by descending probability.
    """
    betas = config.beta.samples()
    ts = config.t.samples()
    found: dict[tuple, MaxPoint] = {}

    def keep(b: float, t: float, n: int, res: ConditionalResult) -> None:
        key = (round(b, 6), round(t, 6), n)
        if key not in found and res.negativity >= floor:
            found[key] = MaxPoint(b, t, n, res.probability, res.negativity)

    for n in config.outcomes:
        h = np.empty((betas.size, ts.size))
        for i, b in enumerate(betas):
            for j, t in enumerate(ts):
                res = evaluate(config.state, float(b), float(t), n, config.photon,
                               config.cutoff, config.tail_tol)
                h[i, j] = _residual_of(config, res)
                keep(float(b), float(t), n, res)
        roots = []
        for i, b in enumerate(betas):
            for j in range(ts.size - 1):
                if h[i, j] * h[i, j + 1] < 0:
                    f = lambda t, b=float(b): _residual(config, b, t, n)
                    roots.append((float(b), _bisect(f, float(ts[j]), float(ts[j + 1]), h[i, j], tol)))
        for j, t in enumerate(ts):
            for i in range(betas.size - 1):
                if h[i, j] * h[i + 1, j] < 0:
                    f = lambda b, t=float(t): _residual(config, b, t, n)
                    roots.append((_bisect(f, float(betas[i]), float(betas[i + 1]), h[i, j], tol), float(t)))
        for b, t in roots:
            keep(b, t, n, evaluate(config.state, b, t, n, config.photon, config.cutoff, config.tail_tol))
    return sorted(found.values(), key=lambda p: (-p.probability, p.beta, p.t, p.n))


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def parse_value(text: str):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        return float(text)


def to_csv(columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def from_csv(text: str) -> tuple[list[str], list[tuple]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return header, [tuple(parse_value(v) for v in row) for row in reader]


def grid_csv(grid: SweepGrid) -> str:
    return to_csv(CSV_COLUMNS, (r.row() for r in grid.rows()))


def search_csv(points: Sequence[MaxPoint]) -> str:
    return to_csv(SEARCH_COLUMNS, (p.row() for p in points))


def _json_float(x: float):
    return x if math.isfinite(x) else None


def grid_json(grid: SweepGrid) -> str:
    rows = [dict(zip(CSV_COLUMNS, (r.beta, r.t, r.n, r.probability, r.negativity,
                                   _json_float(r.b_abs), r.separable)))
            for r in grid.rows()]
    return json.dumps(rows, indent=1) + "\n"


def search_json(points: Sequence[MaxPoint]) -> str:
    return json.dumps([dict(zip(SEARCH_COLUMNS, p.row())) for p in points], indent=1) + "\n"
