"""Adaptive Dormand-Prince 5(4) integration along a straight complex path."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .fields import SingularityError

__all__ = ["IntegrationError", "RKResult", "rk_integrate"]


class IntegrationError(ArithmeticError):
    pass


# Dormand-Prince tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@dataclass
class RKResult:
    state: np.ndarray
    steps: int
    rejected: int
    guard_trips: int = 0
    path: list = field(default_factory=list)


def _step(f, z, y, dz, k1):
    k = [k1]
    for i in range(1, 7):
        yi = y + dz * sum(a * kj for a, kj in zip(_A[i], k))
        k.append(np.asarray(f(z + _C[i] * dz, yi), dtype=complex))
    y5 = y + dz * sum(b * kj for b, kj in zip(_B5, k) if b)
    err = dz * sum(e * kj for e, kj in zip(_E, k))
    return y5, err, k[6]


def rk_integrate(
    f: Callable,
    state0,
    z0: complex,
    z1: complex,
    tol: float = 1e-11,
    h0: float | None = None,
    max_steps: int = 100_000,
    record: bool = False,
) -> RKResult:
    """Integrate ``y' = f(z, y)`` from z0 to z1 along the segment between them.

    The step is controlled so that the local error estimate, measured per
    unit of path length, stays below ``tol * (1 + |y|)`` componentwise.
    A step whose stages trip a singularity guard is rejected and halved; if
    the step falls below 1e-14 of the path length the integration fails.
    """
    z0, z1 = complex(z0), complex(z1)
    y = np.array(state0, dtype=complex)
    length = abs(z1 - z0)
    if length == 0:
        return RKResult(y, 0, 0)
    direction = (z1 - z0) / length
    t, h = 0.0, h0 or min(0.05, length)
    hmin = 1e-14 * max(length, 1.0)
    steps = rejected = trips = 0
    path = [(z0, y.copy())] if record else []
    k1 = None
    while t < length:
        if steps + rejected > max_steps:
            raise IntegrationError(f"step budget exhausted at z = {z0 + t * direction}")
        h = min(h, length - t)
        z = z0 + t * direction
        try:
            if k1 is None:
                k1 = np.asarray(f(z, y), dtype=complex)
            y_new, err, k_last = _step(f, z, y, h * direction, k1)
        except SingularityError:
            trips += 1
            rejected += 1
            h /= 2
            if h < hmin:
                raise IntegrationError(f"step size underflow near z = {z} (singularity guard)") from None
            continue
        scale = tol * (1 + np.maximum(np.abs(y), np.abs(y_new)))
        ratio = float(np.max(np.abs(err) / (h * scale))) if h > 0 else 0.0
        if not np.isfinite(ratio):
            ratio = 1e10
        if ratio <= 1.0:
            t += h
            y = y_new
            k1 = k_last
            steps += 1
            if record:
                path.append((z0 + t * direction, y.copy()))
        else:
            rejected += 1
        # controller for a 4th-order error estimate measured per unit step
        fac = 0.9 * (1.0 / max(ratio, 1e-10)) ** 0.25
        h *= min(4.0, max(0.2, fac))
        if h < hmin and t < length:
            raise IntegrationError(f"step size underflow near z = {z0 + t * direction}")
    return RKResult(y, steps, rejected, trips, path)
