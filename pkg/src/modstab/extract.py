"""Direct-method extraction of the nearby exact quadratic map.

Given an approximately quadratic map f, the three extraction modes build
the limit of rescaled dyadic iterates:

    up / beta :  s_n = f(2**n x) / 4**n
    down      :  s_n = 4**n f(x / 2**n)      (doubling constant tau >= 2)

Convergence is declared on the size of successive differences under the
experiment's modular or F-norm; for up/beta modes with a constant or power
control the closed-form series tail gives an alternative stopping bound,
and whichever is tighter terminates.  ``certify`` then checks the
stability estimate pointwise: measured distance from f to the extracted
map versus the certified control series.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .accumulation import CompensatedSum
from .equation import (Control, DivergentSeriesError, FunctionHandle,
                       as_point, series_beta, series_down, series_up)

__all__ = [
    "ExtractionConfig",
    "ExtractionResult",
    "TraceRow",
    "GridMap",
    "Certificate",
    "CertRow",
    "extract_up",
    "extract_down",
    "extract_grid",
    "certify",
    "cauchy_profile",
    "uniqueness_probe",
    "homogeneity_check",
    "HomogeneityReport",
]

# |f(x/2^n)| below this fraction of the 4**-n-rescaled seed magnitude means
# the iterate is dominated by rounding noise once multiplied back by 4**n.
CANCELLATION_GUARD = 2.0**-40


@dataclass(frozen=True)
class ExtractionConfig:
    """Mode, stopping tolerance, and sizing space for one extraction run."""

    mode: str
    space: object
    tol: float = 1e-10
    n_max: int = 26
    tau: Optional[float] = None
    beta: Optional[float] = None
    control: Optional[Control] = None
    record_trace: bool = True

    def __post_init__(self):
        if self.mode not in ("up", "down", "beta"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if not 1 <= self.n_max <= 30:
            # 4**n stays inside exact double-precision integer scaling
            raise ValueError("n_max must lie in [1, 30]")
        if self.mode == "down" and (self.tau is None or self.tau < 2.0):
            raise ValueError("down mode needs tau >= 2")
        if self.mode == "beta" and (
                self.beta is None or not 0.0 < self.beta <= 1.0):
            raise ValueError("beta mode needs beta in (0, 1]")


@dataclass
class TraceRow:
    n: int
    iterate: np.ndarray
    residual: Optional[float]
    tail: Optional[float]


@dataclass
class ExtractionResult:
    value: np.ndarray
    n_used: int
    residual: float
    converged: bool
    trace: list[TraceRow] = field(default_factory=list)
    failure: Optional[str] = None


def _limit_tail(cfg: ExtractionConfig, x: np.ndarray,
                n: int) -> tuple[Optional[float], Optional[float]]:
    """Closed-form series mass past step n, and the step n -> n+1 bound.

    Up/beta modes with constant or power controls only.  The tail may only
    be used as a stopping criterion while the measured residual stays
    within the single-step bound; otherwise the configured control does not
    dominate this map's defect and the tail says nothing.
    """
    c = cfg.control
    if c is None or c.kind == "custom" or cfg.mode == "down":
        return None, None
    if cfg.mode == "up":
        ratio = 0.25 if c.kind == "constant" else 2.0**c.exponent / 4.0
        w = 4.0 ** -(n + 1)
    else:
        b = cfg.beta
        ratio = 4.0**-b if c.kind == "constant" else 2.0**c.exponent / 4.0**b
        w = 4.0 ** (-b * (n + 1))
    if ratio >= 1.0:
        return None, None
    zero = np.zeros_like(x)
    first = w * c(2.0**n * x, 2.0**n * x, zero)
    return first / (1.0 - ratio), first


def _run(phi, x, cfg: ExtractionConfig, iterate_fn, guard: bool) -> ExtractionResult:
    x = as_point(x)
    size = cfg.space
    s_prev = iterate_fn(0)
    tail_prev, step_bound = _limit_tail(cfg, x, 0)
    trace = [TraceRow(0, s_prev, None, tail_prev)]
    seed_mag = float(np.max(np.abs(phi(x)))) if guard else 0.0
    envelope_ok = True

    for n in range(1, cfg.n_max + 1):
        if guard and seed_mag > 0.0:
            raw = phi(x / 2.0**n)
            if float(np.max(np.abs(raw))) < CANCELLATION_GUARD * 4.0**-n * seed_mag:
                res = ExtractionResult(
                    value=s_prev, n_used=n - 1,
                    residual=trace[-1].residual if trace[-1].residual is not None else math.inf,
                    converged=False, trace=trace if cfg.record_trace else [],
                    failure="precision-exhausted")
                return res
            s_n = 4.0**n * raw
        else:
            s_n = iterate_fn(n)
        r_n = float(size(s_n - s_prev))
        # step_bound carries the closed-form bound for this very residual;
        # a violation means the configured control does not dominate this
        # map's defect, so the series tail must not be used for stopping.
        if step_bound is not None and r_n > step_bound * (1.0 + 1e-9):
            envelope_ok = False
        tail, step_bound = _limit_tail(cfg, x, n)
        trace.append(TraceRow(n, s_n, r_n, tail))
        if n == 1 and r_n == 0.0 and np.array_equal(s_n, s_prev):
            # Exact fixed point at the seed, e.g. an exactly quadratic map.
            return ExtractionResult(value=s_prev, n_used=0, residual=0.0,
                                    converged=True,
                                    trace=trace if cfg.record_trace else [])
        crit = min(r_n, tail) if (tail is not None and envelope_ok) else r_n
        if crit <= cfg.tol:
            return ExtractionResult(value=s_n, n_used=n, residual=crit,
                                    converged=True,
                                    trace=trace if cfg.record_trace else [])
        s_prev = s_n

    last = trace[-1].residual
    return ExtractionResult(value=s_prev, n_used=cfg.n_max,
                            residual=math.inf if last is None else last,
                            converged=False,
                            trace=trace if cfg.record_trace else [],
                            failure="no-convergence")


def extract_up(phi: FunctionHandle, x, cfg: ExtractionConfig) -> ExtractionResult:
    """Limit of f(2**n x)/4**n; used by both up and beta modes."""
    if cfg.mode not in ("up", "beta"):
        raise ValueError("extract_up requires mode 'up' or 'beta'")
    pt = as_point(x)

    def iterate(n: int) -> np.ndarray:
        return phi(2.0**n * pt) / 4.0**n

    return _run(phi, pt, cfg, iterate, guard=False)


def extract_down(phi: FunctionHandle, x, cfg: ExtractionConfig) -> ExtractionResult:
    """Limit of 4**n f(x/2**n), with a catastrophic-cancellation guard."""
    if cfg.mode != "down":
        raise ValueError("extract_down requires mode 'down'")
    pt = as_point(x)

    def iterate(n: int) -> np.ndarray:
        return 4.0**n * phi(pt / 2.0**n)

    return _run(phi, pt, cfg, iterate, guard=True)


def _extract(phi, x, cfg: ExtractionConfig) -> ExtractionResult:
    if cfg.mode == "down":
        return extract_down(phi, x, cfg)
    return extract_up(phi, x, cfg)


class GridMap:
    """Extraction results over a point grid, queryable as a partial map."""

    def __init__(self, points: Sequence, results: Sequence[ExtractionResult]):
        self._points = [as_point(p) for p in points]
        self._results = dict(zip((tuple(p) for p in self._points), results))

    @staticmethod
    def key(p) -> tuple:
        return tuple(as_point(p))

    def points(self) -> list[np.ndarray]:
        return list(self._points)

    def result(self, p) -> ExtractionResult:
        return self._results[self.key(p)]

    def has(self, p) -> bool:
        r = self._results.get(self.key(p))
        return r is not None and r.converged

    def value(self, p) -> np.ndarray:
        r = self._results[self.key(p)]
        if not r.converged:
            raise KeyError(f"extraction did not converge at {p}")
        return r.value

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self._results.values())


def extract_grid(phi: FunctionHandle, points: Sequence, cfg: ExtractionConfig,
                 parallel: int = 1) -> GridMap:
    """Extract at every point; output order and content match sequential runs."""
    pts = [as_point(p) for p in points]
    if parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(lambda p: _extract(phi, p, cfg), pts))
    else:
        results = [_extract(phi, p, cfg) for p in pts]
    return GridMap(pts, results)


@dataclass
class CertRow:
    point: np.ndarray
    measured: float
    bound: float
    margin: float
    alt_bound: Optional[float] = None


@dataclass
class Certificate:
    mode: str
    rows: list[CertRow]
    passed: bool
    failure: Optional[str] = None
    witness: Optional[np.ndarray] = None

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "passed": self.passed,
            "failure": self.failure,
            "witness": None if self.witness is None
            else [float(c) for c in self.witness],
            "rows": [
                {
                    "point": [float(c) for c in r.point],
                    "measured": r.measured,
                    "bound": r.bound,
                    "margin": r.margin,
                    "alt_bound": r.alt_bound,
                }
                for r in self.rows
            ],
        }


def certify(space, phi: FunctionHandle, extracted: GridMap, control: Control,
            cfg: ExtractionConfig, slack: float = 1e-9,
            series_tol: float = 1e-12) -> Certificate:
    """Check measured distance to the extracted map against the series bound.

    Bound per point: the up series at (x, x, 0); the beta series at
    (x, x, 0); or 1/(2 tau) times the down series at (x, x, x), with the
    (x, x, 0) variant reported alongside for comparison.
    """
    for p in extracted.points():
        r = extracted.result(p)
        if not r.converged:
            raise ValueError(
                f"extraction unconverged at {tuple(p)}: {r.failure}")
    rows = []
    for p in extracted.points():
        h = extracted.value(p)
        measured = float(space(phi(p) - h))
        zero = np.zeros_like(p)
        try:
            if cfg.mode == "up":
                bound = series_up(control, p, p, zero, tol=series_tol).value
                alt = None
            elif cfg.mode == "beta":
                bound = series_beta(control, cfg.beta, p, p, zero,
                                    tol=series_tol).value
                alt = None
            else:
                tau = cfg.tau
                bound = series_down(control, tau, p, p, p,
                                    tol=series_tol).value / (2.0 * tau)
                alt = series_down(control, tau, p, p, zero,
                                  tol=series_tol).value / (2.0 * tau)
        except DivergentSeriesError as e:
            return Certificate(mode=cfg.mode, rows=rows, passed=False,
                               failure=str(e), witness=p)
        rows.append(CertRow(point=p, measured=measured, bound=bound,
                            margin=bound - measured, alt_bound=alt))
    passed = all(r.margin >= -slack for r in rows)
    worst = min(rows, key=lambda r: r.margin) if rows else None
    return Certificate(mode=cfg.mode, rows=rows, passed=passed,
                       witness=None if passed or worst is None else worst.point)


def cauchy_profile(phi: FunctionHandle, x, cfg: ExtractionConfig,
                   pairs: Sequence[tuple[int, int]]) -> list[tuple[int, int, float, float]]:
    """Measured residual between iterate pairs versus the partial-sum bound.

    Up/beta modes only; requires a control in the config for the bound side.
    """
    if cfg.mode == "down":
        raise ValueError("cauchy_profile applies to up/beta modes only")
    if cfg.control is None:
        raise ValueError("cauchy_profile needs cfg.control for the bound")
    pt = as_point(x)
    zero = np.zeros_like(pt)
    n_top = max((n for _, n in pairs), default=0)
    iterates = [phi(2.0**n * pt) / 4.0**n for n in range(n_top + 1)]

    def weight(k: int) -> float:
        if cfg.mode == "up":
            return 4.0**-k
        return 4.0 ** (-cfg.beta * k)

    out = []
    for m, n in pairs:
        if not 0 <= m <= n:
            raise ValueError(f"need n >= m >= 0, got ({m}, {n})")
        residual = float(cfg.space(iterates[n] - iterates[m]))
        acc = CompensatedSum()
        for k in range(m + 1, n + 1):
            s = 2.0 ** (k - 1)
            acc.add(weight(k) * cfg.control(s * pt, s * pt, zero))
        out.append((m, n, residual, acc.total))
    return out


def uniqueness_probe(h1: GridMap, h2: GridMap, space, grid) -> float:
    """Max over the grid of the size of half the difference of two candidates."""
    worst = 0.0
    for p in grid:
        d = (h1.value(p) - h2.value(p)) / 2.0
        worst = max(worst, float(space(d)))
    return worst


@dataclass
class HomogeneityReport:
    rows: list[tuple[np.ndarray, float]]
    passed: bool
    tol: float

    def to_json_dict(self) -> dict:
        return {"passed": self.passed, "tol": self.tol,
                "rows": [{"point": [float(c) for c in p], "residual": r}
                         for p, r in self.rows]}


def homogeneity_check(h: GridMap, grid, tol: float, space) -> HomogeneityReport:
    """Size of h(2x) - 4 h(x) at grid points whose double is evaluable."""
    rows = []
    for p in grid:
        p = as_point(p)
        if h.has(p) and h.has(2.0 * p):
            rows.append((p, float(space(h.value(2.0 * p) - 4.0 * h.value(p)))))
    passed = all(r <= tol for _, r in rows)
    return HomogeneityReport(rows=rows, passed=passed, tol=tol)
