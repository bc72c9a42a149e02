"""Compensated summation helpers.

The sieve accumulates millions of logarithms and the explicit formula sums
strongly oscillating terms; both go through :class:`NeumaierSum` or
``math.fsum`` instead of a naive running total.
"""

from __future__ import annotations

import math
import sys
from typing import Iterable

import numpy as np

EPS = sys.float_info.epsilon


class NeumaierSum:
    """Running sum with a compensation term (Kahan-Babuska / Neumaier)."""

    __slots__ = ("_s", "_c", "_abs", "_n")

    def __init__(self, value: float = 0.0):
        self._s = float(value)
        self._c = 0.0
        self._abs = abs(float(value))
        self._n = 1 if value else 0

    def add(self, y: float) -> None:
        y = float(y)
        t = self._s + y
        if abs(self._s) >= abs(y):
            self._c += (self._s - t) + y
        else:
            self._c += (y - t) + self._s
        self._s = t
        self._abs += abs(y)
        self._n += 1

    def extend(self, values: Iterable[float]) -> None:
        for v in values:
            self.add(v)

    @property
    def value(self) -> float:
        return self._s + self._c

    @property
    def error_bound(self) -> float:
        # standard bound for the compensated algorithm: 2u|S| + O(n u^2) sum|x_i|
        return 2 * EPS * abs(self.value) + 2 * self._n * EPS * EPS * self._abs

    def __float__(self) -> float:
        return self.value


def pairwise_error_bound(values: np.ndarray) -> float:
    """A-priori error bound of numpy's pairwise ``sum`` over ``values``."""
    n = max(int(values.size), 1)
    depth = math.ceil(math.log2(n)) + 1
    return depth * EPS * float(np.abs(values).sum())


def fsum_array(values: np.ndarray) -> float:
    """Exactly rounded sum of a float array (order independent)."""
    return math.fsum(np.asarray(values, dtype=float).tolist())
