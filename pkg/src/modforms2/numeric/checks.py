"""Numerical check batteries: ODE cross-validation, transformation laws,
the Schwarz-triangle connection and the numeric shadow of the identity suite.

Every battery returns a list of :class:`NumericReport`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .. import catalog
from ..dsl import evaluate, parse
from ..series import GradedSeries, z_deriv
from .evaluate import eval_series
from .fields import KINDS, eq18_rhs, make_field, potential_V
from .hypergeom import SCHWARZ_SAMPLES, schwarz_map_check
from .integrate import IntegrationError, rk_integrate
from .jets import Jet
from .transforms import (
    Matrix2,
    random_complex_sl2,
    random_gamma0_2,
    random_sl2z,
    transform_residual,
)

__all__ = [
    "BATTERIES",
    "NumericReport",
    "format_complex",
    "ode_battery",
    "ode_check",
    "schwarz_battery",
    "series_state",
    "shadow_battery",
    "transform_battery",
    "yg_check",
]

Z0 = 1j
Z1 = 0.4 + 0.8j
ODE_TOL = 1e-11
ODE_GATE = 1e-8
SERIES_ORDER = 60
LEVEL2 = (0.5, 0.0, 0.0)


def format_complex(z: complex | None) -> str | None:
    if z is None:
        return None
    z = complex(z)
    if z.real == 0:
        return f"{z.imag:g}i"
    return f"{z.real:g}{z.imag:+g}i"


@dataclass
class NumericReport:
    check: str
    residual: float
    tol: float
    z0: complex | None = None
    z1: complex | None = None
    matrix: Matrix2 | None = None
    detail: str = ""
    ms: float = 0.0
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(np.isfinite(self.residual) and self.residual <= self.tol)

    def as_dict(self) -> dict:
        d = {
            "check": self.check,
            "z0": format_complex(self.z0),
            "z1": format_complex(self.z1),
            "matrix": self.matrix.as_json() if self.matrix is not None else None,
            "residual": self.residual,
            "tol": self.tol,
            "pass": self.passed,
        }
        if self.detail:
            d["detail"] = self.detail
        return d


# ---------------------------------------------------------------------------
# ODE cross-validation


def _series_components(kind: str, order: int) -> list[GradedSeries]:
    if kind == "chazy":
        y = GradedSeries(1, catalog.eisenstein_level1(2, order))
    elif kind == "eq18":
        y = GradedSeries(1, catalog.eisenstein_level2(2, order))
    elif kind == "schwarzian":
        y = GradedSeries(0, catalog.s_fn(order))
    elif kind == "dh":
        return [catalog.dh_u(i, order) for i in (1, 2, 3)]
    elif kind == "gdh":
        return [catalog.gdh_u(i, order) for i in (1, 2, 3)]
    else:
        raise ValueError(f"unknown field kind {kind!r}")
    y1 = z_deriv(y)
    return [y, y1, z_deriv(y1)]


def series_state(kind: str, z: complex, order: int = SERIES_ORDER) -> np.ndarray:
    """State vector of the catalog solution of ``kind`` evaluated at z."""
    return np.array([eval_series(g, z).value for g in _series_components(kind, order)])


def _default_params(kind: str):
    return LEVEL2 if kind in ("gdh", "schwarzian") else (0, 0, 0)


def ode_check(
    kind: str,
    z0: complex = Z0,
    z1: complex = Z1,
    tol: float = ODE_TOL,
    gate: float = ODE_GATE,
    order: int = SERIES_ORDER,
) -> NumericReport:
    """Integrate from series data at z0 and compare with the series at z1."""
    t0 = time.perf_counter()
    fld = make_field(kind, _default_params(kind))
    start, target = series_state(kind, z0, order), series_state(kind, z1, order)
    try:
        end = rk_integrate(fld, start, z0, z1, tol)
    except IntegrationError as err:
        return NumericReport(f"ode:{kind}", math.inf, gate, z0, z1, detail=str(err),
                             ms=1000 * (time.perf_counter() - t0))
    rel = np.linalg.norm(end.state - target) / np.linalg.norm(target)
    return NumericReport(
        f"ode:{kind}", rel, gate, z0, z1,
        detail=f"{end.steps} steps, {end.rejected} rejected",
        ms=1000 * (time.perf_counter() - t0),
    )


def _schwarz_jet(state, degree: int, params=LEVEL2) -> Jet:
    """Taylor jet of a solution of the Schwarzian equation from (s, s', s'')."""
    c = np.zeros(degree + 1, dtype=complex)
    c[0], c[1], c[2] = state[0], state[1], state[2] / 2
    for _ in range(degree - 1):
        s = Jet(c)
        s1, s2 = s.deriv(), s.deriv().deriv()
        n = s2.degree
        s0, s1 = Jet(s.c[: n + 1]), Jet(s1.c[: n + 1])
        f = 1.5 * s2 * s2 / s1 - s1**3 * potential_V(s0, params) / 2
        for k in range(degree - 2):
            c[k + 3] = f.c[k] * math.factorial(k) / math.factorial(k + 3)
    return Jet(c)


def yg_value_jet(state, factor: float = 1.0, params=LEVEL2) -> Jet:
    """Jet of y = factor * [s''/s' - (1/(2s) + 1/(s-1)) s'] from a Schwarzian state."""
    s = _schwarz_jet(state, 5, params)
    s1 = s.deriv()
    s2 = s1.deriv()
    n = s2.degree
    s0, s1 = Jet(s.c[: n + 1]), Jet(s1.c[: n + 1])
    return factor * (s2 / s1 - (1 / (2 * s0) + 1 / (s0 - 1)) * s1)


def yg_check(
    z1: complex,
    z0: complex = Z0,
    state0=None,
    tol: float = ODE_TOL,
    gate: float = 1e-6,
    factor: float = 1.0,
) -> NumericReport:
    """Build y from an integrated Schwarzian solution and test the third-order equation.

    ``state0`` defaults to the modular s at z0; any other initial data gives
    another solution of the same Schwarzian equation.
    """
    t0 = time.perf_counter()
    start = series_state("schwarzian", z0) if state0 is None else np.asarray(state0, dtype=complex)
    end = rk_integrate(make_field("schwarzian", LEVEL2), start, z0, z1, tol).state
    y = yg_value_jet(end, factor)
    d = y.derivatives()
    rhs = eq18_rhs(d[0], d[1], d[2])
    res = abs(d[3] - rhs) / max(1.0, abs(d[3]))
    return NumericReport("ode:yg", res, gate, z0, z1, ms=1000 * (time.perf_counter() - t0))


def ode_battery(
    kinds=KINDS,
    z0: complex = Z0,
    z1: complex = Z1,
    tol: float = ODE_TOL,
    gate: float = ODE_GATE,
    include_yg: bool = True,
    seed: int = 0,
) -> list[NumericReport]:
    out = [ode_check(k, z0, z1, tol, gate) for k in kinds]
    if include_yg:
        rng = np.random.default_rng(seed)
        base = series_state("schwarzian", Z0)
        for target in (Z1, 0.2 + 1.2j, -0.3 + 0.9j):
            out.append(yg_check(target))
        for _ in range(2):
            perturbed = base * (1 + 0.05 * (rng.normal(size=3) + 1j * rng.normal(size=3)))
            out.append(yg_check(Z1, state0=perturbed))
    return out


# ---------------------------------------------------------------------------
# transformation laws


def transform_battery(
    seed: int = 0,
    n_integral: int = 20,
    n_complex: int = 5,
    z: complex = 1j,
    z_complex: complex = 1.1j,
    tol_law: float = 1e-9,
    tol_ode: float = 1e-7,
    laws=("E2_law", "Ecal2_law", "y_transform", "u_transform"),
) -> list[NumericReport]:
    rng = np.random.default_rng(seed)
    out = []
    for law in laws:
        if law in ("E2_law", "Ecal2_law"):
            gen = random_sl2z if law == "E2_law" else random_gamma0_2
            mats, point, tol = [gen(rng) for _ in range(n_integral)], z, tol_law
        else:
            mats = [random_complex_sl2(rng, z_complex) for _ in range(n_complex)]
            point, tol = z_complex, tol_ode
        for m in mats:
            t0 = time.perf_counter()
            res = transform_residual(law, m, point)
            out.append(NumericReport(f"transform:{law}", res, tol, point, m(point), m,
                                     ms=1000 * (time.perf_counter() - t0)))
    return out


# ---------------------------------------------------------------------------
# Schwarz triangle and numeric shadow


def schwarz_battery(samples=SCHWARZ_SAMPLES, tol: float = 1e-6, method: str = "cauchy") -> list[NumericReport]:
    t0 = time.perf_counter()
    worst, devs = schwarz_map_check(samples, method=method)
    detail = ", ".join(f"s={s:g}: {d:.2e}" for s, d in zip(samples, devs))
    return [NumericReport(f"schwarz:{method}", worst, tol, detail=detail, ms=1000 * (time.perf_counter() - t0))]


def shadow_battery(z: complex = 1j, tol: float = 1e-10, order: int = SERIES_ORDER, ids=None) -> list[NumericReport]:
    """Evaluate both sides of every registry identity at z and compare numerically."""
    from ..identities import environment, registry

    env = environment(order)
    out = []
    for ident in registry().values():
        if ids and ident.id not in ids:
            continue
        t0 = time.perf_counter()
        lhs = eval_series(evaluate(parse(ident.lhs), env), z).value
        rhs = eval_series(evaluate(parse(ident.rhs), env), z).value
        res = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
        out.append(NumericReport(f"shadow:{ident.id}", res, tol, z, ms=1000 * (time.perf_counter() - t0)))
    return out


BATTERIES = {
    "ode": ode_battery,
    "transform": transform_battery,
    "schwarz": schwarz_battery,
    "shadow": shadow_battery,
}
