"""Complex vector fields for the third-order equations and Halphen-type systems.

Every field acts on a 3-vector: (y, y', y'') for the scalar third-order
equations, (u1, u2, u3) for the Halphen systems and (s, s', s'') for the
Schwarzian equation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "KINDS",
    "ODEField",
    "SingularityError",
    "field_rhs",
    "make_field",
    "potential_V",
    "tau2",
]

KINDS = ("chazy", "eq18", "dh", "gdh", "schwarzian")

EQ18_GUARD = 1e-8
SCHWARZ_GUARD = 1e-12


class SingularityError(ArithmeticError):
    """A denominator of the field came too close to zero."""

    def __init__(self, name: str, magnitude: float, z: complex | None = None):
        self.name = name
        self.magnitude = magnitude
        self.z = z
        where = f" at z = {z}" if z is not None else ""
        super().__init__(f"singularity guard: |{name}| = {magnitude:.3e}{where}")


@dataclass(frozen=True)
class ODEField:
    kind: str
    params: tuple[complex, complex, complex] = (0, 0, 0)
    dimension: int = 3

    def __call__(self, z: complex, state):
        return field_rhs(self, z, state)


def make_field(kind: str, params=(0, 0, 0)) -> ODEField:
    if kind not in KINDS:
        raise ValueError(f"unknown field kind {kind!r}; expected one of {', '.join(KINDS)}")
    params = tuple(complex(p) for p in params)
    if len(params) != 3:
        raise ValueError("params must be a triple (alpha, beta, gamma)")
    return ODEField(kind, params if kind in ("gdh", "schwarzian") else (0j, 0j, 0j))


def tau2(u1, u2, u3, params) -> complex:
    a, b, c = params
    return a * a * (u1 - u2) * (u2 - u3) + b * b * (u2 - u1) * (u1 - u3) + c * c * (u3 - u1) * (u2 - u3)


def potential_V(s, params=(0.5, 0, 0)):
    a, b, c = params
    return (1 - a * a) / s**2 + (1 - b * b) / (s - 1) ** 2 + (a * a + b * b - c * c - 1) / (s * (s - 1))


def eq18_rhs(y, y1, y2, z=None):
    """y''' for the third-order equation solved by pi i Ecal2."""
    den = 2 * y1 - y * y
    if abs(den) < EQ18_GUARD * (1 + abs(y) ** 2):
        raise SingularityError("2y' - y^2", abs(den), z)
    return 2 * y * y2 - y1 * y1 + 2 * (y2 - y * y1) ** 2 / den


def field_rhs(field: ODEField, z: complex, state) -> np.ndarray:
    x1, x2, x3 = state
    kind = field.kind
    if kind == "chazy":
        out = (x2, x3, 2 * x1 * x3 - 3 * x2 * x2)
    elif kind == "eq18":
        out = (x2, x3, eq18_rhs(x1, x2, x3, z))
    elif kind == "dh":
        # u_i' + u_j' = u_i u_j for all pairs, solved for the derivatives
        out = (
            (x1 * x2 + x1 * x3 - x2 * x3) / 2,
            (x2 * x1 + x2 * x3 - x1 * x3) / 2,
            (x3 * x1 + x3 * x2 - x1 * x2) / 2,
        )
    elif kind == "gdh":
        t = tau2(x1, x2, x3, field.params)
        out = (
            x2 * x3 - x1 * (x2 + x3) + t,
            x3 * x1 - x2 * (x3 + x1) + t,
            x1 * x2 - x3 * (x1 + x2) + t,
        )
    elif kind == "schwarzian":
        s, s1, s2 = x1, x2, x3
        for name, val in (("s", s), ("s - 1", s - 1), ("s'", s1)):
            if abs(val) < SCHWARZ_GUARD:
                raise SingularityError(name, abs(val), z)
        out = (s1, s2, 1.5 * s2 * s2 / s1 - s1**3 * potential_V(s, field.params) / 2)
    else:  # pragma: no cover - make_field validates
        raise ValueError(kind)
    return np.array(out, dtype=complex)
