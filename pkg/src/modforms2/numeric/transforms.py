"""Moebius matrices and numerical checks of the transformation laws."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import catalog
from ..series import GradedSeries, z_deriv
from .evaluate import PI_I, HalfPlaneError, eval_series, order_for_point
from .fields import field_rhs, eq18_rhs, make_field
from .jets import Jet

__all__ = [
    "ConvergenceError",
    "GroupError",
    "LAWS",
    "Matrix2",
    "random_complex_sl2",
    "random_gamma0_2",
    "random_sl2z",
    "series_derivatives",
    "transform_residual",
    "y_transform_residual",
]

LAWS = ("E2_law", "Ecal2_law", "y_transform", "u_transform")


class GroupError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Matrix2:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.det == 0:
            raise GroupError("singular matrix")

    @classmethod
    def parse(cls, text: str) -> "Matrix2":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"matrix must be a,b,c,d; got {text!r}")
        vals = []
        for p in parts:
            try:
                vals.append(int(p))
            except ValueError:
                vals.append(complex(p.replace("i", "j")))
        return cls(*vals)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def _integral(self) -> bool:
        return all(isinstance(x, (int, np.integer)) or (complex(x).imag == 0 and float(complex(x).real).is_integer())
                   for x in (self.a, self.b, self.c, self.d))

    def is_SL2Z(self) -> bool:
        return self._integral() and self.det == 1

    def is_Gamma0_2(self) -> bool:
        return self.is_SL2Z() and int(complex(self.c).real) % 2 == 0

    def __call__(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def factor(self, z: complex) -> complex:
        return self.c * z + self.d

    def entries(self) -> list:
        return [self.a, self.b, self.c, self.d]

    def as_json(self) -> list:
        out = []
        for x in self.entries():
            x = complex(x)
            out.append(int(x.real) if x.imag == 0 and float(x.real).is_integer() else [x.real, x.imag])
        return out


def _complete(c: int, d: int, bound: int) -> tuple[int, int] | None:
    """a, b with ad - bc = 1 and |a|, |b| <= bound, if such exist."""
    g, x, y = _egcd(d, -c)  # x d - y c = g
    if g != 1:
        return None
    a, b = x, y
    # general solution (a + k c, b + k d); pick k minimizing the entries
    best = None
    for k in range(-3 * bound - 3, 3 * bound + 4):
        aa, bb = a + k * c, b + k * d
        if abs(aa) <= bound and abs(bb) <= bound:
            if best is None or abs(aa) + abs(bb) < abs(best[0]) + abs(best[1]):
                best = (aa, bb)
    return best


def _egcd(p: int, q: int) -> tuple[int, int, int]:
    if q == 0:
        return (abs(p), 1 if p >= 0 else -1, 0)
    g, x, y = _egcd(q, p % q)
    return g, y, x - (p // q) * y


def _random_integral(rng, bound: int, even_c: bool) -> Matrix2:
    while True:
        c = int(rng.integers(-bound, bound + 1))
        d = int(rng.integers(-bound, bound + 1))
        if even_c and c % 2:
            continue
        if c == 0 and d == 0 or math.gcd(c, d) != 1:
            continue
        ab = _complete(c, d, bound)
        if ab is None:
            continue
        return Matrix2(ab[0], ab[1], c, d)


def random_sl2z(rng: np.random.Generator, bound: int = 10) -> Matrix2:
    return _random_integral(rng, bound, even_c=False)


def random_gamma0_2(rng: np.random.Generator, bound: int = 10) -> Matrix2:
    return _random_integral(rng, bound, even_c=True)


def random_complex_sl2(rng: np.random.Generator, z: complex, min_imag: float = 0.8, scale: float = 0.5) -> Matrix2:
    """A random complex determinant-1 matrix with Im(gamma z) >= min_imag.

    The default floor keeps gamma z away from Im = 1/2, where the q-series
    of the gDH variables stop converging (they have poles at the elliptic
    points of Gamma0(2)).

    Entries are perturbations of the identity; d is solved from the
    determinant condition.
    """
    while True:
        a, b, c = (complex(*rng.normal(0, scale, 2)) for _ in range(3))
        a += 1
        if abs(a) < 0.2:
            continue
        d = (1 + b * c) / a
        m = Matrix2(a, b, c, d)
        if abs(m.factor(z)) < 0.1:
            continue
        if m(z).imag >= min_imag:
            return m


# ---------------------------------------------------------------------------
# series data at a point


@lru_cache(maxsize=None)
def _derivative_tower(name: str, order: int, count: int) -> tuple[GradedSeries, ...]:
    g = catalog.build(name, order)
    out = [g]
    for _ in range(count - 1):
        out.append(z_deriv(out[-1]))
    return tuple(out)


def _graded_tower(name: str, lam_power: int, order: int, count: int):
    base = _derivative_tower(name, order, 1)[0]
    g = GradedSeries(base.degree + lam_power, base.body)
    out = [g]
    for _ in range(count - 1):
        out.append(z_deriv(out[-1]))
    return out


def series_derivatives(name: str, w: complex, count: int, lam_power: int = 0, order: int | None = None) -> list[complex]:
    """Values of f, f', ... at w, where f = (pi i)^lam_power * catalog[name], derivatives in z."""
    order = order or order_for_point(w)
    if lam_power:
        tower = _graded_tower(name, lam_power, order, count)
    else:
        tower = _derivative_tower(name, order, count)
    out = []
    for g in tower:
        ev = eval_series(g, w)
        if not ev.tail_estimate <= 1e-12 * max(1.0, abs(ev.value)):
            raise ConvergenceError(f"{name} series not converged at {w} (tail estimate {ev.tail_estimate:.2e})")
        out.append(ev.value)
    return out


def _require_half_plane(z: complex, w: complex):
    if z.imag <= 0 or w.imag <= 0:
        raise HalfPlaneError(f"z = {z} and gamma z = {w} must both lie in the upper half-plane")


def _law_residual(name: str, weight_const: float, m: Matrix2, z: complex) -> float:
    """|f(gamma z) - (cz+d)^2 f(z) - (K/(pi i)) c (cz+d)| relative to max(1, |f(gamma z)|)."""
    w = m(z)
    _require_half_plane(z, w)
    order = max(order_for_point(w), order_for_point(z))
    fw = series_derivatives(name, w, 1, order=order)[0]
    fz = series_derivatives(name, z, 1, order=order)[0]
    j = m.factor(z)
    rhs = j * j * fz + weight_const / PI_I * m.c * j
    return abs(fw - rhs) / max(1.0, abs(fw))


def y_transform_residual(m: Matrix2, z: complex, shift: float = -2.0) -> float:
    """Residual of the third-order equation for y~(z) = y(gamma z)/(cz+d)^2 + shift*c/(cz+d).

    ``shift = -2`` is the law that holds; other values are accepted so the
    tests can show they fail.
    """
    w = m(z)
    _require_half_plane(z, w)
    ys = series_derivatives("Ecal2", w, 4, lam_power=1)
    jz = Jet.variable(z, 3)
    wj = (m.a * jz + m.b) / (m.c * jz + m.d)
    fac = m.c * jz + m.d
    yt = wj.compose_into(ys) / fac**2 + shift * m.c / fac
    y0, y1, y2, y3 = yt.derivatives()
    rhs = eq18_rhs(y0, y1, y2)
    return abs(y3 - rhs) / max(1.0, abs(y3))


def _u_transform_residual(m: Matrix2, z: complex) -> float:
    """gDH(1/2,0,0) residual for u~_i(z) = u_i(gamma z)/(cz+d)^2 + c/(cz+d)."""
    w = m(z)
    _require_half_plane(z, w)
    jz = Jet.variable(z, 1)
    wj = (m.a * jz + m.b) / (m.c * jz + m.d)
    fac = m.c * jz + m.d
    ut = []
    for i in (1, 2, 3):
        us = series_derivatives(f"u{i}", w, 2)
        ut.append(wj.compose_into(us) / fac**2 + m.c / fac)
    state = np.array([u[0] for u in ut])
    deriv = np.array([u[1] for u in ut])
    rhs = field_rhs(make_field("gdh", (0.5, 0, 0)), z, state)
    return float(np.max(np.abs(deriv - rhs)) / max(1.0, float(np.max(np.abs(deriv)))))


def transform_residual(kind: str, m: Matrix2, z: complex) -> float:
    """Residual of one transformation law at z.

    E2_law needs gamma in SL2(Z), Ecal2_law gamma in Gamma0(2); the other two
    accept any complex matrix of determinant 1 and check that the
    transformed function still solves its differential system, with
    derivatives propagated through the Moebius map by Taylor jets.
    """
    z = complex(z)
    if kind == "E2_law":
        if not m.is_SL2Z():
            raise GroupError("E2_law needs a matrix in SL2(Z)")
        return _law_residual("E2", 6.0, m, z)
    if kind == "Ecal2_law":
        if not m.is_Gamma0_2():
            raise GroupError("Ecal2_law needs a matrix in Gamma0(2)")
        return _law_residual("Ecal2", 2.0, m, z)
    if kind in ("y_transform", "u_transform"):
        if abs(m.det - 1) > 1e-12:
            raise GroupError(f"{kind} needs determinant 1, got {m.det}")
        return y_transform_residual(m, z) if kind == "y_transform" else _u_transform_residual(m, z)
    raise ValueError(f"unknown law {kind!r}; expected one of {', '.join(LAWS)}")
