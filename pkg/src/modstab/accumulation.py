"""Compensated accumulation with a fixed summation order.

Every multi-term sum in this package that feeds a certificate or a report
goes through one of these accumulators, always in a caller-fixed order, so
results are bit-identical across runs and across parallel schedules.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np


class CompensatedSum:
    """Running scalar sum with Neumaier's correction term."""

    __slots__ = ("_s", "_c")

    def __init__(self) -> None:
        self._s = 0.0
        self._c = 0.0

    def add(self, x: float) -> None:
        s = self._s
        t = s + x
        if abs(s) >= abs(x):
            self._c += (s - t) + x
        else:
            self._c += (x - t) + s
        self._s = t

    @property
    def total(self) -> float:
        return self._s + self._c


class CompensatedVectorSum:
    """Componentwise Neumaier sum over fixed-dimension float64 vectors."""

    __slots__ = ("_s", "_c")

    def __init__(self, dim: int) -> None:
        self._s = np.zeros(dim, dtype=np.float64)
        self._c = np.zeros(dim, dtype=np.float64)

    def add(self, v: np.ndarray) -> None:
        s = self._s
        t = s + v
        big = np.abs(s) >= np.abs(v)
        self._c += np.where(big, (s - t) + v, (v - t) + s)
        self._s = t

    def subtract(self, v: np.ndarray) -> None:
        self.add(-v)

    @property
    def total(self) -> np.ndarray:
        return self._s + self._c


def fixed_order_sum(values: Iterable[float]) -> float:
    """Sum floats in the given order with compensation."""
    acc = CompensatedSum()
    for v in values:
        acc.add(float(v))
    return acc.total
