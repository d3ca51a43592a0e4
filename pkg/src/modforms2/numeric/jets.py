"""Truncated Taylor jets for exact-order chain-rule computations.

A jet of degree n at a point stores c[k] = f^(k)(z0)/k! for k <= n.  Products,
quotients and composition are done on these coefficients, so derivatives of
composite functions (Moebius transforms, rational expressions in a solution)
are obtained without numerical differentiation.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

__all__ = ["Jet"]


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence[complex]):
        self.c = np.asarray(coeffs, dtype=complex)

    @classmethod
    def from_derivatives(cls, derivs: Sequence[complex], degree: int | None = None) -> "Jet":
        n = len(derivs) - 1 if degree is None else degree
        c = np.zeros(n + 1, dtype=complex)
        for k, d in enumerate(derivs[: n + 1]):
            c[k] = d / math.factorial(k)
        return cls(c)

    @classmethod
    def variable(cls, z0: complex, degree: int) -> "Jet":
        c = np.zeros(degree + 1, dtype=complex)
        c[0] = z0
        if degree:
            c[1] = 1
        return cls(c)

    @classmethod
    def const(cls, value: complex, degree: int) -> "Jet":
        c = np.zeros(degree + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def derivatives(self) -> list[complex]:
        return [complex(math.factorial(k) * x) for k, x in enumerate(self.c)]

    def __getitem__(self, k: int) -> complex:
        return complex(math.factorial(k) * self.c[k])

    def _lift(self, other) -> "Jet":
        return other if isinstance(other, Jet) else Jet.const(other, self.degree)

    def __add__(self, other):
        return Jet(self.c + self._lift(other).c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return Jet(self.c - self._lift(other).c)

    def __rsub__(self, other):
        return Jet(self._lift(other).c - self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        n = self.degree
        return Jet(np.convolve(self.c, other.c)[: n + 1])

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.c
        if a[0] == 0:
            raise ZeroDivisionError("jet with zero constant term")
        r = np.zeros_like(a)
        r[0] = 1 / a[0]
        for k in range(1, len(a)):
            r[k] = -np.dot(a[1 : k + 1], r[k - 1 :: -1][:k]) / a[0]
        return Jet(r)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        out = Jet.const(1, self.degree)
        for _ in range(k):
            out = out * self
        return out

    def deriv(self) -> "Jet":
        """Jet of f' (one degree lower)."""
        k = np.arange(1, len(self.c))
        return Jet(self.c[1:] * k)

    def compose_into(self, outer_derivs: Sequence[complex]) -> "Jet":
        """Jet of g(f(z)) given g^(k)(f(z0)) for k = 0..degree."""
        dz = Jet(np.concatenate([[0], self.c[1:]]))
        out = Jet.const(0, self.degree)
        power = Jet.const(1, self.degree)
        for k in range(self.degree + 1):
            out = out + power * (outer_derivs[k] / math.factorial(k))
            power = power * dz
        return out

    def __repr__(self) -> str:
        return f"Jet({list(self.c)})"
