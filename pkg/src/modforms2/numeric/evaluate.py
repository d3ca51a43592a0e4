"""Evaluation of exact q-series at points of the upper half-plane."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..series import UNIT, GradedSeries, LaurentSeries

__all__ = ["PI_I", "ComplexEval", "HalfPlaneError", "eval_series", "order_for_point"]

PI_I = complex(0.0, math.pi)


class HalfPlaneError(ValueError):
    """A point that should lie in the upper half-plane does not."""


@dataclass(frozen=True)
class ComplexEval:
    value: complex
    tail_estimate: float = 0.0

    def __complex__(self) -> complex:
        return self.value


def _check_point(z: complex) -> complex:
    z = complex(z)
    if not z.imag > 0:
        raise HalfPlaneError(f"point {z} is not in the upper half-plane")
    return z


def eval_series(f: LaurentSeries | GradedSeries, z: complex) -> ComplexEval:
    """Sum ``f`` at ``q = exp(2 pi i z)``; a lam grading becomes a factor (pi i)**degree.

    Fractional powers use ``exp(2 pi i z e / 24)`` directly, so no branch of
    ``q**(1/24)`` has to be chosen.  The tail estimate is a geometric
    majorant built from the last stored coefficient; it is a heuristic, not
    a rigorous bound, and it is zero for exact series.
    """
    z = _check_point(z)
    factor = 1.0 + 0j
    if isinstance(f, GradedSeries):
        factor = PI_I**f.degree
        f = f.body
    items = list(f.items())
    if items:
        exps = np.array([e for e, _ in items], dtype=float)
        coeffs = np.array([float(c) for _, c in items])
        value = complex(np.sum(coeffs * np.exp(2j * math.pi * z * exps / UNIT)))
    else:
        value = 0j
    tail = 0.0
    if items and math.isfinite(f.precision):
        aq24 = math.exp(-2 * math.pi * z.imag / UNIT)
        last = abs(float(items[-1][1]))
        tail = last * aq24**f.precision / (1 - aq24)
    return ComplexEval(factor * value, abs(factor) * tail)


def order_for_point(z: complex, eps: float = 1e-18, minimum: int = 60) -> int:
    """Number of q-powers after which terms of polynomial growth drop below ``eps``.

    Uses the crude majorant n**3 |q|**n, adequate for Eisenstein-type
    coefficients; the result is rounded up to a multiple of 32 so nearby
    points share cached catalog builds.
    """
    z = _check_point(z)
    t = 2 * math.pi * z.imag
    n = minimum
    while 3 * math.log(n) - t * n > math.log(eps):
        n = int(n * 1.25) + 1
    return max(minimum, 32 * math.ceil(n / 32))


def nome(z: complex) -> complex:
    return cmath.exp(2j * math.pi * _check_point(z))
