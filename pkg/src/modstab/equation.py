"""Defect operator, control functions, and certified control series.

The central identity is the nine-term quadratic-type functional equation

    f(x+y-z) + f(x+z-y) + f(y+z-x)
        = f(x-y) + f(x-z) + f(z-y) + f(x) + f(y) + f(z)

``defect`` evaluates the signed difference of the two sides.  Terms are
summed in a canonical order (each side's evaluation points sorted by a
sign-insensitive lexicographic key) with compensated accumulation, so the
result is bit-reproducible and, for even maps, exactly symmetric under
swapping the first two arguments.

The three weighted series over a control function alpha,

    sum_j 4**-j      * alpha(2**(j-1) x, 2**(j-1) y, 2**(j-1) z)
    sum_j (tau^3/2)^j * alpha(x/2**j, y/2**j, z/2**j)
    sum_j 4**(-beta j) * alpha(2**(j-1) x, 2**(j-1) y, 2**(j-1) z)

are summed with certified geometric tail bounds (closed form for constant
and power controls, empirical ratio test for custom ones).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .accumulation import CompensatedSum, CompensatedVectorSum
from .modular import as_vector

__all__ = [
    "FunctionHandle",
    "Control",
    "SeriesBound",
    "DivergentSeriesError",
    "SeriesConvergenceError",
    "ControlCheckReport",
    "VanishingReport",
    "as_point",
    "defect",
    "defect_size",
    "check_control",
    "series_up",
    "series_down",
    "series_beta",
    "vanishing_condition",
]

as_point = as_vector


@dataclass(frozen=True)
class FunctionHandle:
    """Deterministic evaluable map from domain points to codomain vectors.

    The evaluator must vanish at the origin; this is validated once at
    construction.  Repeated evaluation at the same point must be
    bit-identical (all shipped evaluators are pure).
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    label: str
    dim_in: int = 1
    dim_out: int = 1

    def __post_init__(self):
        at0 = self.evaluator(np.zeros(self.dim_in))
        v = np.atleast_1d(np.asarray(at0, dtype=np.float64))
        if v.shape != (self.dim_out,):
            raise ValueError(
                f"evaluator output shape {v.shape} != ({self.dim_out},)")
        if np.any(v != 0.0):
            raise ValueError(f"map {self.label!r} does not vanish at 0: {v}")

    def __call__(self, x) -> np.ndarray:
        out = self.evaluator(as_point(x))
        return np.atleast_1d(np.asarray(out, dtype=np.float64))

    @classmethod
    def from_scalar(cls, f: Callable[[float], float], label: str) -> "FunctionHandle":
        """Wrap a scalar function of one real variable."""
        return cls(evaluator=lambda x: np.array([f(float(x[0]))]),
                   label=label, dim_in=1, dim_out=1)


def _domain_norm(kind: str, x: np.ndarray) -> float:
    if kind == "euclidean":
        return float(np.linalg.norm(x))
    if kind == "max-abs":
        return float(np.max(np.abs(x))) if x.size else 0.0
    raise ValueError(f"unknown domain norm {kind!r}")


@dataclass(frozen=True)
class Control:
    """Pointwise bound alpha(x, y, z) >= 0 on the defect size.

    Kinds: ``constant`` (eps), ``power`` (theta * (|x|^p + |y|^p + |z|^p)
    in the chosen domain norm; vanishes at the origin), ``custom``.
    """

    kind: str
    eps: Optional[float] = None
    theta: Optional[float] = None
    exponent: Optional[float] = None
    domain_norm: str = "euclidean"
    fn: Optional[Callable[[np.ndarray, np.ndarray, np.ndarray], float]] = None

    def __post_init__(self):
        if self.kind == "constant":
            if self.eps is None or self.eps < 0.0:
                raise ValueError("constant control needs eps >= 0")
        elif self.kind == "power":
            if self.theta is None or self.theta < 0.0:
                raise ValueError("power control needs theta >= 0")
            if self.exponent is None or self.exponent < 0.0:
                raise ValueError("power control needs exponent >= 0")
            _domain_norm(self.domain_norm, np.zeros(1))
        elif self.kind == "custom":
            if self.fn is None:
                raise ValueError("custom control needs an evaluator")
        else:
            raise ValueError(f"unknown control kind {self.kind!r}")

    @classmethod
    def constant(cls, eps: float) -> "Control":
        return cls(kind="constant", eps=eps)

    @classmethod
    def power(cls, theta: float, exponent: float,
              domain_norm: str = "euclidean") -> "Control":
        return cls(kind="power", theta=theta, exponent=exponent,
                   domain_norm=domain_norm)

    @classmethod
    def custom(cls, fn: Callable[[np.ndarray, np.ndarray, np.ndarray], float]) -> "Control":
        return cls(kind="custom", fn=fn)

    def __call__(self, x, y, z) -> float:
        x, y, z = as_point(x), as_point(y), as_point(z)
        if self.kind == "constant":
            return self.eps
        if self.kind == "power":
            p = self.exponent
            s = (_domain_norm(self.domain_norm, x) ** p
                 + _domain_norm(self.domain_norm, y) ** p
                 + _domain_norm(self.domain_norm, z) ** p)
            return self.theta * s
        val = float(self.fn(x, y, z))
        if val < 0.0:
            raise ValueError(f"control returned a negative value {val}")
        return val

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant(eps={self.eps:g})"
        if self.kind == "power":
            return (f"power(theta={self.theta:g}, p={self.exponent:g}, "
                    f"{self.domain_norm})")
        return "custom"


def _canonical_key(p: np.ndarray) -> tuple:
    # Sign-insensitive sort key: flip the point so its first nonzero
    # coordinate is positive.  Even maps take bitwise-equal values at a
    # point and its flip, which makes the accumulated defect independent
    # of which representative a permutation of the arguments produced.
    for c in p:
        if c != 0.0:
            if c < 0.0:
                return tuple(-p)
            return tuple(p)
    return tuple(p)


def defect(phi: Callable[[np.ndarray], np.ndarray], x, y, z) -> np.ndarray:
    """Nine-term defect of the functional equation at (x, y, z).

    Evaluation points are fixed; summation runs over the plus-side points
    sorted ascending, then the minus-side points sorted ascending, with
    componentwise compensated accumulation.
    """
    x, y, z = as_point(x), as_point(y), as_point(z)
    plus = [x + y - z, x + z - y, y + z - x]
    minus = [x - y, x - z, z - y, x, y, z]
    plus.sort(key=_canonical_key)
    minus.sort(key=_canonical_key)
    first = phi(plus[0])
    acc = CompensatedVectorSum(first.size)
    acc.add(first)
    for p in plus[1:]:
        acc.add(phi(p))
    for p in minus:
        acc.subtract(phi(p))
    return acc.total


def defect_size(space, phi, x, y, z) -> float:
    """Size of the defect under a modular or F-norm."""
    return float(space(defect(phi, x, y, z)))


@dataclass
class ControlCheckReport:
    passed: bool
    worst_margin: float
    witness: Optional[tuple]
    checked: int

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "witness": None if self.witness is None
            else [[float(c) for c in p] for p in self.witness],
            "checked": self.checked,
        }


def check_control(space, phi, control: Control,
                  triples: Sequence[tuple], slack: float = 1e-12) -> ControlCheckReport:
    """Verify defect_size <= alpha pointwise over the triple set."""
    if not triples:
        raise ValueError("triples must be nonempty")
    worst = math.inf
    witness = None
    for (x, y, z) in triples:
        margin = control(x, y, z) - defect_size(space, phi, x, y, z)
        if margin < worst:
            worst = margin
            witness = (as_point(x), as_point(y), as_point(z))
    passed = worst >= -slack
    return ControlCheckReport(passed=passed, worst_margin=worst,
                              witness=None if passed else witness,
                              checked=len(triples))


class DivergentSeriesError(ArithmeticError):
    """The control series diverges; carries the offending term ratio."""

    def __init__(self, mode: str, ratio: float):
        self.mode = mode
        self.ratio = ratio
        super().__init__(f"divergent {mode} series: term ratio {ratio:g} >= 1")


class SeriesConvergenceError(ArithmeticError):
    """Tail bound did not reach the requested tolerance within the term cap."""


@dataclass(frozen=True)
class SeriesBound:
    """Certified series value: partial sum plus a rigorous tail bound."""

    value: float
    partial_sum: float
    tail_bound: float
    terms_used: int
    mode: str

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "partial_sum": self.partial_sum,
            "tail_bound": self.tail_bound,
            "terms_used": self.terms_used,
            "mode": self.mode,
        }


def _closed_form_ratio(control: Control, mode: str, tau: float, beta: float) -> Optional[float]:
    if control.kind == "constant":
        if mode == "up":
            return 0.25
        if mode == "beta":
            return 4.0 ** -beta
        return tau**3 / 2.0
    if control.kind == "power":
        p = control.exponent
        if mode == "up":
            return 2.0**p / 4.0
        if mode == "beta":
            return 2.0**p / 4.0**beta
        return tau**3 / 2.0 ** (p + 1.0)
    return None


def _series(control: Control, mode: str, x, y, z, tol: float, cap: int,
            tau: float = 0.0, beta: float = 0.0) -> SeriesBound:
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    x, y, z = as_point(x), as_point(y), as_point(z)
    label = {"up": "up", "down": f"down(tau={tau:g})",
             "beta": f"beta({beta:g})"}[mode]

    # Identically zero controls sum to zero in every mode.
    if (control.kind == "constant" and control.eps == 0.0) or (
            control.kind == "power" and control.theta == 0.0):
        return SeriesBound(0.0, 0.0, 0.0, 0, label)

    ratio = _closed_form_ratio(control, mode, tau, beta)
    if ratio is not None and ratio >= 1.0:
        raise DivergentSeriesError(label, ratio)

    def term(j: int) -> float:
        if mode == "down":
            w = (tau**3 / 2.0) ** j
            return w * control(x / 2.0**j, y / 2.0**j, z / 2.0**j)
        w = 4.0**-j if mode == "up" else 4.0 ** (-beta * j)
        s = 2.0 ** (j - 1)
        return w * control(s * x, s * y, s * z)

    acc = CompensatedSum()
    recent: list[float] = []
    t_prev = None
    for j in range(1, cap + 1):
        t = term(j)
        acc.add(t)
        if ratio is not None:
            tail = t * ratio / (1.0 - ratio)
            if tail <= tol:
                partial = acc.total
                return SeriesBound(partial + tail, partial, tail, j, label)
        else:
            if t_prev is not None:
                if t == 0.0 and t_prev == 0.0:
                    recent.append(0.0)
                elif t_prev == 0.0:
                    recent.append(math.inf)
                else:
                    recent.append(t / t_prev)
                if len(recent) > 10:
                    recent.pop(0)
            t_prev = t
            if len(recent) == 10:
                q = max(recent)
                if q < 1.0:
                    tail = 0.0 if t == 0.0 else t * q / (1.0 - q)
                    if tail <= tol:
                        partial = acc.total
                        return SeriesBound(partial + tail, partial, tail, j, label)
    if ratio is None and recent and max(recent) >= 1.0:
        raise DivergentSeriesError(label, max(recent))
    raise SeriesConvergenceError(
        f"{label} series tail still above tol={tol:g} after {cap} terms")


def series_up(control: Control, x, y, z, tol: float = 1e-12,
              cap: int = 200) -> SeriesBound:
    """Certified sum of 4**-j * alpha(2**(j-1) x, ...), j >= 1."""
    return _series(control, "up", x, y, z, tol, cap)


def series_down(control: Control, tau: float, x, y, z, tol: float = 1e-12,
                cap: int = 200) -> SeriesBound:
    """Certified sum of (tau^3/2)^j * alpha(x/2**j, ...), j >= 1."""
    if tau < 2.0:
        raise ValueError("tau must be >= 2")
    return _series(control, "down", x, y, z, tol, cap, tau=tau)


def series_beta(control: Control, beta: float, x, y, z, tol: float = 1e-12,
                cap: int = 200) -> SeriesBound:
    """Certified sum of 4**(-beta*j) * alpha(2**(j-1) x, ...), j >= 1."""
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    return _series(control, "beta", x, y, z, tol, cap, beta=beta)


@dataclass
class VanishingReport:
    """Whether tau^(2n) * alpha(x/2^n, y/2^n, z/2^n) decays to ~0."""

    passed: bool
    final_value: float
    values: list[float]

    def to_json_dict(self) -> dict:
        return {"passed": self.passed, "final_value": self.final_value,
                "values": self.values}


def vanishing_condition(control: Control, tau: float, x, y, z,
                        n_max: int = 40, threshold: float = 1e-9) -> VanishingReport:
    """Check the rescaled control decays below threshold, eventually monotonically."""
    if tau < 2.0:
        raise ValueError("tau must be >= 2")
    x, y, z = as_point(x), as_point(y), as_point(z)
    values = []
    for n in range(1, n_max + 1):
        s = 2.0**n
        values.append(tau ** (2 * n) * control(x / s, y / s, z / s))
    tail = values[-max(5, n_max // 4):]
    monotone = all(b <= a for a, b in zip(tail, tail[1:]))
    passed = values[-1] <= threshold and monotone
    return VanishingReport(passed=passed, final_value=values[-1], values=values)
