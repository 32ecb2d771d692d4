"""Quadraticity verification and recovery of the symmetric biadditive form.

A map h is quadratic when h(x) = A(x, x) for a symmetric biadditive A; the
polarization A(x, y) = (h(x+y) - h(x) - h(y)) / 2 recovers the form.  The
checks here run on integer-combination grids so every needed point is
exactly representable and structural failure is never conflated with float
rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .accumulation import CompensatedVectorSum
from .equation import as_point, defect
from .extract import GridMap

__all__ = ["biadditive_form", "check_quadratic", "QuadraticityReport"]


def _adapt(h):
    """Uniform (evaluate, is_evaluable) view of a callable or a GridMap."""
    if isinstance(h, GridMap):
        return h.value, h.has
    return (lambda p: np.atleast_1d(np.asarray(h(p), dtype=np.float64)),
            lambda p: True)


def biadditive_form(h, x, y) -> np.ndarray:
    """Polarization A(x, y) = (h(x+y) - h(x) - h(y)) / 2."""
    ev, _ = _adapt(h)
    x, y = as_point(x), as_point(y)
    first = ev(x + y)
    acc = CompensatedVectorSum(first.size)
    acc.add(first)
    acc.subtract(ev(x))
    acc.subtract(ev(y))
    return acc.total / 2.0


@dataclass
class QuadraticityReport:
    parallelogram_max: float
    doubling_max: float
    defect_max: float
    biadditivity_max: float
    tol: float
    counts: dict[str, int]

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "parallelogram": self.parallelogram_max <= self.tol,
            "doubling": self.doubling_max <= self.tol,
            "defect": self.defect_max <= self.tol,
            "biadditivity": self.biadditivity_max <= self.tol,
        }

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "residual_max": {
                "parallelogram": self.parallelogram_max,
                "doubling": self.doubling_max,
                "defect": self.defect_max,
                "biadditivity": self.biadditivity_max,
            },
            "flags": self.flags,
            "counts": self.counts,
        }


def check_quadratic(h, grid: Sequence, tol: float, space,
                    max_triples: int = 200, seed: int = 0) -> QuadraticityReport:
    """Run the four quadraticity checks for h over a base grid.

    Checks: the parallelogram identity, the doubling law h(2x) = 4 h(x),
    the nine-term equation defect, and additivity of the polarized form in
    its first slot.  Combination points that are not evaluable (e.g. the
    extraction did not converge there) are skipped and counted.
    """
    ev, has = _adapt(h)
    pts = [as_point(p) for p in grid]
    if not pts:
        raise ValueError("grid must be nonempty")
    counts = {"parallelogram": 0, "doubling": 0, "defect": 0,
              "biadditivity": 0, "skipped": 0}

    para_max = 0.0
    for i, x in enumerate(pts):
        for y in pts[i:]:
            needed = [x + y, x - y, x, y]
            if not all(has(p) for p in needed):
                counts["skipped"] += 1
                continue
            acc = CompensatedVectorSum(ev(x).size)
            acc.add(ev(x + y))
            acc.add(ev(x - y))
            acc.subtract(2.0 * ev(x))
            acc.subtract(2.0 * ev(y))
            para_max = max(para_max, float(space(acc.total)))
            counts["parallelogram"] += 1

    dbl_max = 0.0
    for x in pts:
        if has(x) and has(2.0 * x):
            dbl_max = max(dbl_max, float(space(ev(2.0 * x) - 4.0 * ev(x))))
            counts["doubling"] += 1
        else:
            counts["skipped"] += 1

    rng = np.random.Generator(np.random.PCG64(seed))
    triples = [(x, y, z) for x in pts for y in pts for z in pts]
    if len(triples) > max_triples:
        idx = rng.choice(len(triples), size=max_triples, replace=False)
        triples = [triples[int(i)] for i in sorted(idx)]
    defect_max = 0.0
    for (x, y, z) in triples:
        combos = [x + y - z, x + z - y, y + z - x,
                  x - y, x - z, z - y, x, y, z]
        if not all(has(p) for p in combos):
            counts["skipped"] += 1
            continue
        defect_max = max(defect_max, float(space(defect(ev, x, y, z))))
        counts["defect"] += 1

    biadd_max = 0.0
    for (x, y, z) in triples:
        combos = [x + y + z, x + y, x + z, y + z, x, y, z]
        if not all(has(p) for p in combos):
            counts["skipped"] += 1
            continue
        lhs = biadditive_form(ev, x + y, z)
        acc = CompensatedVectorSum(lhs.size)
        acc.add(lhs)
        acc.subtract(biadditive_form(ev, x, z))
        acc.subtract(biadditive_form(ev, y, z))
        biadd_max = max(biadd_max, float(space(acc.total)))
        counts["biadditivity"] += 1

    return QuadraticityReport(parallelogram_max=para_max, doubling_max=dbl_max,
                              defect_max=defect_max, biadditivity_max=biadd_max,
                              tol=tol, counts=counts)
