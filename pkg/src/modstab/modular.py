"""Evaluable modulars and beta-homogeneous F-norms on R^d.

A modular here is a concrete nonnegative functional on finite-dimensional
real vectors: zero exactly at the origin, invariant under sign flips, and
subadditive over convex combinations (with the sharper convex form when the
``convex`` flag is set).  Axioms are never assumed: ``check_modular_axioms``
and ``check_fnorm_axioms`` test declared properties on sample sets and
report worst margins with concrete witnesses.

Also provided: estimation of the doubling constant tau (the smallest
uniform bound on rho(2u)/rho(u), when one exists) and the Luxemburg norm of
a convex modular by bracketing and bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "Modular",
    "FNorm",
    "AxiomCheck",
    "AxiomReport",
    "UnboundedNormError",
    "ORLICZ_GENERATORS",
    "as_vector",
    "check_modular_axioms",
    "check_fnorm_axioms",
    "delta2_estimate",
    "Delta2Result",
    "default_ladder",
    "luxemburg_norm",
    "sample_pairs",
]

CONVEX_WEIGHTS = (0.0, 0.25, 0.5, 0.75, 1.0)
HOMOGENEITY_SCALARS = (-2.0, -1.0, -0.5, 0.5, 2.0)

# Scalar Orlicz generators: convex, increasing on [0, inf), zero at zero.
# Arguments past the exp overflow threshold map to inf rather than raising;
# the doubling estimator treats non-finite ratios as divergence evidence.
ORLICZ_GENERATORS: dict[str, Callable[[float], float]] = {
    "expm1": lambda t: math.expm1(t) if t < 709.0 else math.inf,
    "exp_lin": lambda t: math.expm1(t) - t if t < 709.0 else math.inf,
}


class UnboundedNormError(ArithmeticError):
    """Luxemburg bracketing failed: rho(u/lam) > 1 up to the overflow guard."""


def as_vector(u) -> np.ndarray:
    """Coerce to a finite 1-D float64 vector."""
    v = np.atleast_1d(np.asarray(u, dtype=np.float64))
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite input rejected: {v!r}")
    return v


@dataclass(frozen=True)
class Modular:
    """Evaluable modular rho on R^d.

    ``kind`` is one of ``absolute-value`` (sum of |u_i|), ``power`` (sum of
    |u_i|**p), ``orlicz-sum`` (sum of a generator applied to |u_i|), or
    ``custom``.  ``convex`` and ``delta2_tau`` are declarations to be
    checked, not trusted.
    """

    kind: str
    p: Optional[float] = None
    generator: Optional[str] = None
    fn: Optional[Callable[[np.ndarray], float]] = None
    convex: bool = False
    delta2_tau: Optional[float] = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("absolute-value", "power", "orlicz-sum", "custom"):
            raise ValueError(f"unknown modular kind {self.kind!r}")
        if self.kind == "power" and (self.p is None or self.p <= 0):
            raise ValueError("power modular needs p > 0")
        if self.kind == "orlicz-sum" and self.generator not in ORLICZ_GENERATORS:
            raise ValueError(f"unknown Orlicz generator {self.generator!r}")
        if self.kind == "custom" and self.fn is None:
            raise ValueError("custom modular needs an evaluator")
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        if self.kind == "power":
            return f"power(p={self.p:g})"
        if self.kind == "orlicz-sum":
            return f"orlicz-sum({self.generator})"
        return self.kind

    @classmethod
    def absolute(cls) -> "Modular":
        return cls(kind="absolute-value", convex=True, delta2_tau=2.0)

    @classmethod
    def power(cls, p: float, convex: Optional[bool] = None) -> "Modular":
        # p >= 1 gives a convex modular; smaller p may still be declared
        # convex by a caller who wants the axiom checker to expose it.
        if convex is None:
            convex = p >= 1.0
        return cls(kind="power", p=p, convex=convex, delta2_tau=2.0**p)

    @classmethod
    def orlicz(cls, generator: str) -> "Modular":
        return cls(kind="orlicz-sum", generator=generator, convex=True)

    @classmethod
    def custom(cls, fn: Callable[[np.ndarray], float], convex: bool = False,
               label: str = "custom") -> "Modular":
        return cls(kind="custom", fn=fn, convex=convex, label=label)

    @property
    def homogeneity_degree(self) -> Optional[float]:
        """Exponent q with rho(c*u) = |c|**q * rho(u), where known."""
        if self.kind == "absolute-value":
            return 1.0
        if self.kind == "power":
            return self.p
        return None

    @property
    def luxemburg_scaling_exponent(self) -> float:
        # The induced norm inf{lam > 0 : rho(u/lam) <= 1} is always
        # 1-homogeneous; exposed read-only for report metadata.
        return 1.0

    def __call__(self, u) -> float:
        v = as_vector(u)
        if self.kind == "absolute-value":
            return float(np.sum(np.abs(v)))
        if self.kind == "power":
            return float(np.sum(np.abs(v) ** self.p))
        if self.kind == "orlicz-sum":
            gen = ORLICZ_GENERATORS[self.generator]
            return float(sum(gen(abs(float(t))) for t in v))
        return float(self.fn(v))


@dataclass(frozen=True)
class FNorm:
    """beta-homogeneous F-norm: a base norm raised to the power beta.

    ``base`` is ``euclidean`` or ``max-abs``.  0 < beta <= 1 yields a valid
    triangle inequality; larger beta may be declared and will fail the
    axiom check with a witness.
    """

    beta: float
    base: str = "euclidean"
    label: str = ""

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.base not in ("euclidean", "max-abs"):
            raise ValueError(f"unknown base norm {self.base!r}")
        if not self.label:
            object.__setattr__(self, "label", f"fnorm(beta={self.beta:g},{self.base})")

    def __call__(self, u) -> float:
        v = as_vector(u)
        if self.base == "euclidean":
            n = float(np.linalg.norm(v))
        else:
            n = float(np.max(np.abs(v))) if v.size else 0.0
        return n ** self.beta if n != 0.0 else 0.0


@dataclass
class AxiomCheck:
    """Outcome of one axiom over a sample set.

    ``margin`` is the worst slack seen: nonnegative means the axiom held
    everywhere, negative means violated and ``witness`` reproduces it.
    """

    axiom: str
    passed: bool
    margin: float
    witness: Optional[tuple] = None


@dataclass
class AxiomReport:
    subject: str
    checks: dict[str, AxiomCheck] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_json_dict(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": {
                name: {
                    "passed": c.passed,
                    "worst_margin": c.margin,
                    "witness": _json_witness(c.witness),
                }
                for name, c in sorted(self.checks.items())
            },
        }


def _json_witness(w):
    if w is None:
        return None
    out = []
    for item in w:
        if isinstance(item, np.ndarray):
            out.append([float(t) for t in item])
        else:
            out.append(float(item) if isinstance(item, (int, float)) else item)
    return out


def _track(worst: Optional[tuple], margin: float, witness: tuple) -> tuple:
    if worst is None or margin < worst[0]:
        return (margin, witness)
    return worst


def sample_pairs(dim: int, count: int = 200, seed: int = 0,
                 scale: float = 4.0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded random (u, v) sample pairs for axiom checking."""
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = []
    for _ in range(count):
        u = scale * rng.uniform(-1.0, 1.0, size=dim)
        v = scale * rng.uniform(-1.0, 1.0, size=dim)
        pairs.append((u, v))
    return pairs


def check_modular_axioms(m: Modular,
                         samples: Sequence[tuple[np.ndarray, np.ndarray]],
                         slack: float = 1e-12) -> AxiomReport:
    """Test the modular axioms on every sample pair; failures carry witnesses.

    Checked: zero only at the origin, sign invariance, subadditivity over
    convex combinations, and (if declared) the convex inequality.
    """
    if not samples:
        raise ValueError("samples must be nonempty")
    report = AxiomReport(subject=m.label)

    dim = as_vector(samples[0][0]).size
    zero = np.zeros(dim)
    rho0 = m(zero)
    worst = None
    if rho0 != 0.0:
        worst = (-abs(rho0), (zero,))
    for u, v in samples:
        for w in (u, v):
            if np.any(w != 0.0):
                margin = m(w)
                worst = _track(worst, margin, (w,))
    margin, witness = worst if worst is not None else (math.inf, None)
    passed = rho0 == 0.0 and margin > 0.0
    report.checks["zero-only-at-origin"] = AxiomCheck(
        "zero-only-at-origin", passed, margin, None if passed else witness)

    worst = None
    for u, v in samples:
        for w in (u, v):
            diff = -abs(m(-w) - m(w))
            worst = _track(worst, diff, (w,))
    margin, witness = worst
    tol = -slack
    report.checks["sign-invariance"] = AxiomCheck(
        "sign-invariance", margin >= tol, margin, witness if margin < tol else None)

    worst = None
    for u, v in samples:
        ru, rv = m(u), m(v)
        for lam in CONVEX_WEIGHTS:
            mix = m(lam * u + (1.0 - lam) * v)
            margin = (ru + rv) - mix
            worst = _track(worst, margin, (u, v, lam))
    margin, witness = worst
    report.checks["subadditivity"] = AxiomCheck(
        "subadditivity", margin >= tol, margin, witness if margin < tol else None)

    if m.convex:
        worst = None
        for u, v in samples:
            ru, rv = m(u), m(v)
            for lam in CONVEX_WEIGHTS:
                mix = m(lam * u + (1.0 - lam) * v)
                margin = (lam * ru + (1.0 - lam) * rv) - mix
                worst = _track(worst, margin, (u, v, lam))
        margin, witness = worst
        report.checks["convexity"] = AxiomCheck(
            "convexity", margin >= tol, margin, witness if margin < tol else None)

    return report


def check_fnorm_axioms(f: FNorm,
                       samples: Sequence[tuple[np.ndarray, np.ndarray]],
                       slack: float = 1e-12) -> AxiomReport:
    """Test F-norm axioms plus the beta-homogeneity scan."""
    if not samples:
        raise ValueError("samples must be nonempty")
    report = AxiomReport(subject=f.label)

    dim = as_vector(samples[0][0]).size
    n0 = f(np.zeros(dim))
    worst = None
    if n0 != 0.0:
        worst = (-abs(n0), (np.zeros(dim),))
    for u, v in samples:
        for w in (u, v):
            if np.any(w != 0.0):
                worst = _track(worst, f(w), (w,))
    margin, witness = worst if worst is not None else (math.inf, None)
    passed = n0 == 0.0 and margin > 0.0
    report.checks["zero-only-at-origin"] = AxiomCheck(
        "zero-only-at-origin", passed, margin, None if passed else witness)

    worst = None
    for u, v in samples:
        for w in (u, v):
            diff = -abs(f(-w) - f(w))
            worst = _track(worst, diff, (w,))
    margin, witness = worst
    tol = -slack
    report.checks["sign-invariance"] = AxiomCheck(
        "sign-invariance", margin >= tol, margin, witness if margin < tol else None)

    worst = None
    for u, v in samples:
        margin = f(u) + f(v) - f(u + v)
        worst = _track(worst, margin, (u, v))
    margin, witness = worst
    report.checks["triangle"] = AxiomCheck(
        "triangle", margin >= tol, margin, witness if margin < tol else None)

    worst = None
    for u, v in samples:
        for w in (u, v):
            nw = f(w)
            for a in HOMOGENEITY_SCALARS:
                expect = abs(a) ** f.beta * nw
                got = f(a * w)
                rel = max(1.0, abs(expect))
                diff = -abs(got - expect) / rel
                worst = _track(worst, diff, (w, a))
    margin, witness = worst
    report.checks["beta-homogeneity"] = AxiomCheck(
        "beta-homogeneity", margin >= tol, margin, witness if margin < tol else None)

    return report


def default_ladder(dim: int = 1) -> list[np.ndarray]:
    """Geometric sample ladder: factor 2, magnitudes 2**-20 .. 2**40."""
    direction = np.ones(dim, dtype=np.float64)
    return [(2.0**k) * direction for k in range(-20, 41)]


@dataclass
class Delta2Result:
    tau: Optional[float]
    divergent: bool
    sup_ratio: float

    @property
    def stabilized(self) -> bool:
        return not self.divergent


def delta2_estimate(m: Modular, ladder: Optional[Sequence[np.ndarray]] = None,
                    rel_tol: float = 1e-6, window: int = 10) -> Delta2Result:
    """Estimate the doubling constant tau = sup rho(2u)/rho(u) over a ladder.

    Returns a stabilized tau if the running sup moves by less than
    ``rel_tol`` (relatively) over the last ``window`` rungs and every ratio
    is finite; otherwise reports divergence.  Divergence is a valid answer,
    not an error.
    """
    rungs = list(ladder) if ladder is not None else default_ladder()
    if not rungs:
        raise ValueError("ladder must be nonempty")
    sups = []
    sup = 0.0
    finite = True
    for u in rungs:
        v = as_vector(u)
        if not np.any(v != 0.0):
            raise ValueError("ladder must exclude the zero vector")
        lo = m(v)
        hi = m(2.0 * v)
        if lo <= 0.0 or not math.isfinite(lo) or not math.isfinite(hi):
            finite = False
            sups.append(math.inf)
            sup = math.inf
            continue
        sup = max(sup, hi / lo)
        sups.append(sup)
    if not finite or not math.isfinite(sup):
        return Delta2Result(tau=None, divergent=True, sup_ratio=math.inf)
    if len(sups) > window:
        prev = sups[-1 - window]
        if sup > 0.0 and (sup - prev) > rel_tol * sup:
            return Delta2Result(tau=None, divergent=True, sup_ratio=sup)
    return Delta2Result(tau=sup, divergent=False, sup_ratio=sup)


def luxemburg_norm(m: Modular, u, tol: float = 1e-12,
                   max_iter: int = 200) -> float:
    """inf{lam > 0 : rho(u/lam) <= 1} by bracketing plus bisection.

    Requires a convex (monotone) modular and tol > 0.  Raises
    ``UnboundedNormError`` when rho(u/lam) > 1 all the way to the overflow
    guard lam = 2**60.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if not m.convex:
        raise ValueError("Luxemburg norm requires a convex modular")
    v = as_vector(u)
    if not np.any(v != 0.0):
        return 0.0

    lo, hi = 2.0**-60, 2.0**60
    if m(v / hi) > 1.0:
        raise UnboundedNormError(
            f"rho(u/lam) > 1 for all lam up to 2**60 for {m.label}")
    if m(v / lo) <= 1.0:
        return lo
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if m(v / mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
