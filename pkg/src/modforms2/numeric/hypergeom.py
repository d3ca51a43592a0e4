"""Gauss hypergeometric series and the Schwarz-triangle connection check."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fields import potential_V

__all__ = [
    "DomainError",
    "SCHWARZ_SAMPLES",
    "hyp2f1",
    "hyp2f1_terms",
    "schwarz_map_check",
    "schwarzian",
    "z_of_s",
]

SCHWARZ_SAMPLES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
RADIUS_MAX = 0.8
_REL_STOP = 1e-16


class DomainError(ValueError):
    pass


def _param(x) -> float:
    return float(Fraction(x)) if isinstance(x, (str, Fraction)) else float(x)


def hyp2f1_terms(a, b, c, s: complex, count: int) -> list[complex]:
    """The first ``count`` terms (a)_k (b)_k / ((c)_k k!) s^k."""
    a, b, c = _param(a), _param(b), _param(c)
    out, t = [], 1.0 + 0j
    for k in range(count):
        out.append(t)
        t *= (a + k) * (b + k) / ((c + k) * (1 + k)) * s
    return out


def hyp2f1(a, b, c, s: complex) -> complex:
    """2F1(a, b; c; s) by direct summation, for |s| <= 0.8.

    Terms are added until an increment falls below 1e-16 of the running sum
    (or the sum is exactly zero and the term is too).
    """
    a, b, c = _param(a), _param(b), _param(c)
    if c <= 0 and c == int(c):
        raise DomainError(f"c = {c} is a non-positive integer")
    s = complex(s)
    if abs(s) > RADIUS_MAX:
        raise DomainError(f"|s| = {abs(s):.3g} exceeds {RADIUS_MAX}")
    total, term, k = 1.0 + 0j, 1.0 + 0j, 0
    while True:
        term *= (a + k) * (b + k) / ((c + k) * (1 + k)) * s
        k += 1
        total += term
        if abs(term) <= _REL_STOP * abs(total) or term == 0:
            return total
        if k > 10_000:  # pragma: no cover - cannot happen for |s| <= 0.8
            raise DomainError("series did not converge")


def z_of_s(s: complex) -> complex:
    """chi_1 / chi_2 for the (1/2, 0, 0) triangle, principal square root."""
    chi1 = hyp2f1(0.25, 0.25, 0.5, s)
    chi2 = cmath.sqrt(s) * hyp2f1(0.75, 0.75, 1.5, s)
    return chi1 / chi2


def _cauchy_derivatives(f, s0: float, radius: float, points: int = 64) -> list[complex]:
    """f, f', f'', f''' at s0 from samples on a circle (trapezoidal Cauchy integrals)."""
    theta = 2 * math.pi * np.arange(points) / points
    vals = np.array([f(s0 + radius * cmath.exp(1j * t)) for t in theta])
    coeffs = np.fft.fft(vals) / points
    return [math.factorial(k) * coeffs[k] / radius**k for k in range(4)]


def _fd5_derivatives(f, s0: float, h: float) -> list[complex]:
    """f, f', f'', f''' at s0 from 5-point central differences."""
    fm2, fm1, f0, fp1, fp2 = (f(s0 + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    d3 = (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h**3)
    return [f0, d1, d2, d3]


def schwarzian(derivs: Sequence[complex]) -> complex:
    _, d1, d2, d3 = derivs
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def schwarz_map_check(
    samples: Iterable[float] = SCHWARZ_SAMPLES,
    method: str = "cauchy",
    h: float = 1e-3,
    params=(0.5, 0, 0),
) -> tuple[float, list[float]]:
    """Max over samples of |{z, s} - V(s)/2| for z = chi_1/chi_2.

    ``method="cauchy"`` differentiates z numerically by trapezoidal Cauchy
    integrals on a circle of radius min(s/2, 0.1); ``method="fd5"`` uses the
    5-point central stencil with step ``h``, which loses accuracy near
    s = 0 where z grows like s^(-1/2).
    Returns the maximum and the per-sample deviations.
    """
    devs = []
    for s in samples:
        s = float(s)
        if not 0.05 < s < 0.7:
            raise DomainError(f"sample s = {s} outside (0.05, 0.7)")
        if method == "cauchy":
            d = _cauchy_derivatives(z_of_s, s, min(s / 2, 0.1))
        elif method == "fd5":
            d = _fd5_derivatives(z_of_s, s, h)
        else:
            raise ValueError(f"unknown differentiation method {method!r}")
        devs.append(float(abs(schwarzian(d) - potential_V(s, params) / 2)))
    return max(devs), devs
