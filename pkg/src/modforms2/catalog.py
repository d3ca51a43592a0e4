"""Named q-series of level 1 and level 2.

Every constructor takes an order ``n`` counted in integer powers of q and
returns a series whose precision is exactly ``24 * n`` (all coefficients
below ``q**n`` known).  Derived objects such as quotients are computed from
padded inputs and truncated, so the caller never sees precision loss.

Where the literature gives several constructions of the same function the
alternatives are exposed through a ``mode`` argument; the test-suite and the
identity registry compare them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .series import (
    UNIT,
    GradedSeries,
    LaurentSeries,
    PrecisionError,
    delta,
    dlog,
    scale_arg,
)

# extra powers of q used internally by quotient constructions
_PAD = 4


def _fit(f: LaurentSeries, n: int) -> LaurentSeries:
    if f.precision < UNIT * n:
        raise PrecisionError(f"internal padding too small: have {f.precision}/24, need {UNIT * n}/24")
    return f.truncate(UNIT * n)


def _fit_graded(g: GradedSeries, n: int) -> GradedSeries:
    return GradedSeries(g.degree, _fit(g.body, n))


# ---------------------------------------------------------------------------
# arithmetic functions


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0, B_0 = 1
    b = [Fraction(1)]
    for k in range(1, m + 1):
        b.append(-sum(math.comb(k + 1, j) * b[j] for j in range(k)) / (k + 1))
    return tuple(b)


def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k for even k >= 2 (convention B_1 = -1/2)."""
    if k < 2 or k % 2:
        raise ValueError(f"bernoulli: k must be even and >= 2, got {k}")
    return _bernoulli_table(k)[k]


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def sigma(k: int, n: int) -> int:
    if n < 1:
        raise ValueError("sigma: n must be positive")
    return sum(d**k for d in divisors(n))


def _lambert(weights, n: int, sign: int = -1) -> list[int]:
    """Coefficients of sum_{m>=1} w(m) q^m / (1 + sign*q^m) for q^0..q^(n-1).

    ``sign=-1`` gives the usual 1/(1-q^m) expansion, ``sign=+1`` the
    alternating 1/(1+q^m) one.
    """
    out = [0] * n
    for m in range(1, n):
        w = weights(m)
        if not w:
            continue
        t = 1
        for mult in range(m, n, m):
            out[mult] += w * t
            if sign > 0:
                t = -t
    return out


# ---------------------------------------------------------------------------
# Eisenstein series


@lru_cache(maxsize=None)
def eisenstein_level1(k: int, n: int) -> LaurentSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(m) q^m."""
    c = -Fraction(2 * k) / bernoulli(k)
    coeffs = [Fraction(1)] + [c * s for s in _lambert(lambda m: m ** (k - 1), n)[1:]]
    return LaurentSeries.from_q_coefficients(coeffs[:n], UNIT * n)


@lru_cache(maxsize=None)
def eisenstein_level2(k: int, n: int) -> LaurentSeries:
    """Normalized Gamma_0(2) Eisenstein series, Lambert terms (-1)^m m^(k-1) q^m/(1-q^m)."""
    c = Fraction(2 * k) / ((1 - 2**k) * bernoulli(k))
    lam = _lambert(lambda m: (-1) ** m * m ** (k - 1), n)
    coeffs = [Fraction(1)] + [c * s for s in lam[1:]]
    return LaurentSeries.from_q_coefficients(coeffs[:n], UNIT * n)


@lru_cache(maxsize=None)
def ramamani(name: str, n: int) -> LaurentSeries:
    """Ramamani's P, P~ and Q with their printed Lambert coefficients."""
    if name == "P":
        body = [-8 * s for s in _lambert(lambda m: (-1) ** m * m, n)]
    elif name == "Ptilde":
        body = [24 * s for s in _lambert(lambda m: m, n, sign=+1)]
    elif name == "Q":
        body = [16 * s for s in _lambert(lambda m: (-1) ** m * m**3, n)]
    else:
        raise ValueError(f"unknown Ramamani series {name!r}")
    body[0] = 1
    return LaurentSeries.from_q_coefficients(body[:n], UNIT * n)


@lru_cache(maxsize=None)
def e_tilde_2(n: int, mode: str = "odd_divisor") -> LaurentSeries:
    if mode == "lambert":
        return ramamani("Ptilde", n)
    if mode == "odd_divisor":
        body = [24 * s for s in _lambert(lambda m: m if m % 2 else 0, n)]
        body[0] = 1
        return LaurentSeries.from_q_coefficients(body[:n], UNIT * n)
    if mode == "level1_combination":
        e2 = eisenstein_level1(2, n)
        return _fit(2 * scale_arg(e2, 2) - e2, n)
    raise ValueError(f"unknown e_tilde_2 mode {mode!r}")


# ---------------------------------------------------------------------------
# products, Delta, j


def _euler_product(n: int, power: int = 1) -> list[int]:
    """prod_{m>=1} (1 - q^m)^power, dense to q^(n-1)."""
    p = [0] * n
    p[0] = 1
    for m in range(1, n):
        for _ in range(power):
            for i in range(n - 1, m - 1, -1):
                p[i] -= p[i - m]
    return p


@lru_cache(maxsize=None)
def delta_fn(n: int, mode: str = "product") -> LaurentSeries:
    if mode == "product":
        if n < 1:
            return LaurentSeries(None, UNIT * n)
        return LaurentSeries.from_q_coefficients(_euler_product(n - 1, 24), UNIT * n, offset=UNIT)
    if mode == "eisenstein":
        e4, e6 = eisenstein_level1(4, n), eisenstein_level1(6, n)
        return _fit((e4**3 - e6**2) / 1728, n)
    raise ValueError(f"unknown delta mode {mode!r}")


@lru_cache(maxsize=None)
def d_cal(n: int) -> LaurentSeries:
    et = e_tilde_2(n)
    return _fit((et**2 - eisenstein_level2(4, n)) / 64, n)


@lru_cache(maxsize=None)
def j_fn(n: int) -> LaurentSeries:
    m = n + _PAD
    return _fit(eisenstein_level1(4, m) ** 3 / delta_fn(m), n)


@lru_cache(maxsize=None)
def j2_fn(n: int) -> LaurentSeries:
    m = n + _PAD
    return _fit(e_tilde_2(m) ** 2 / d_cal(m), n)


# ---------------------------------------------------------------------------
# theta, eta, lambda


@lru_cache(maxsize=None)
def theta(i: int, n: int) -> LaurentSeries:
    """Null theta functions; theta_2 lives on exponents 3(2k+1)^2, theta_3,4 on 12k^2."""
    prec = UNIT * n
    c: dict[int, int] = {}
    if i == 2:
        k = 0
        while 3 * (2 * k + 1) ** 2 < prec:
            c[3 * (2 * k + 1) ** 2] = 2
            k += 1
    elif i in (3, 4):
        c[0] = 1
        k = 1
        while 12 * k * k < prec:
            c[12 * k * k] = 2 if i == 3 or k % 2 == 0 else -2
            k += 1
    else:
        raise ValueError(f"theta index must be 2, 3 or 4, got {i}")
    return LaurentSeries(c, prec)


@lru_cache(maxsize=None)
def eta(n: int) -> LaurentSeries:
    """q^(1/24) prod (1 - q^m)."""
    return LaurentSeries.from_q_coefficients(_euler_product(n), UNIT * n, offset=1)


@lru_cache(maxsize=None)
def lambda_fn(n: int) -> LaurentSeries:
    m = n + _PAD
    return _fit(theta(2, m) ** 4 / theta(3, m) ** 4, n)


@lru_cache(maxsize=None)
def s_fn(n: int, mode: str = "j2_quarter") -> LaurentSeries:
    m = n + _PAD
    if mode == "j2_quarter":
        return _fit(j2_fn(m) / 64, n)
    if mode == "delta_quotient":
        d = delta_fn(m)
        return _fit(1 + d / (64 * scale_arg(d, 2)), n)
    if mode == "theta_quotient":
        t2, t3, t4 = (theta(i, m) ** 4 for i in (2, 3, 4))
        return _fit(((t3 + t4) / t2) ** 2, n)
    raise ValueError(f"unknown s mode {mode!r}")


# ---------------------------------------------------------------------------
# Darboux-Halphen variables


def _lam_dlog(f: LaurentSeries, factor) -> GradedSeries:
    return GradedSeries(1, factor * dlog(f))


@lru_cache(maxsize=None)
def gdh_u(i: int, n: int, mode: str = "schwarz") -> GradedSeries:
    """Level-2 gDH variables u_i = -1/2 [ln(...)]' as lam-degree-1 series.

    ``mode="schwarz"`` builds them from s and its delta-derivative,
    ``mode="theta"`` from the null theta closed forms.
    """
    if i not in (1, 2, 3):
        raise ValueError(f"u index must be 1, 2 or 3, got {i}")
    m = n + _PAD
    if mode == "schwarz":
        s = s_fn(m)
        ds = delta(s)
        arg = {1: ds / s, 2: ds / (s - 1), 3: ds / (s * (s - 1))}[i]
    elif mode == "theta":
        t2, t3, t4 = (theta(k, m) ** 4 for k in (2, 3, 4))
        arg = {1: t3 * t4 / (t3 + t4), 2: t3 + t4, 3: t2**2 / (t3 + t4)}[i]
    else:
        raise ValueError(f"unknown gdh_u mode {mode!r}")
    # -1/2 * d/dz ln(arg) = -1/2 * 2 lam * dlog(arg)
    return _fit_graded(_lam_dlog(arg, -1), n)


DH_SCALE = 4


@lru_cache(maxsize=None)
def dh_u(i: int, n: int) -> GradedSeries:
    """Halphen's theta solution, u_i = 4 (ln theta)' with theta_4, theta_2, theta_3 for i = 1, 2, 3.

    The factor 4 is what makes u_1' + u_2' = u_1 u_2 hold for the printed
    system and y = u_1 + u_2 + u_3 = pi i E_2 solve Chazy.
    """
    idx = {1: 4, 2: 2, 3: 3}[i]
    m = n + _PAD
    # (ln theta)' = 2 lam dlog(theta)
    g = GradedSeries(1, 2 * DH_SCALE * dlog(theta(idx, m)))
    return _fit_graded(g, n)


# ---------------------------------------------------------------------------
# catalog metadata


@dataclass(frozen=True)
class FormDescriptor:
    name: str
    weight: str
    group: str
    constructions: tuple[str, ...]
    description: str = ""


CATALOG: dict[str, FormDescriptor] = {
    d.name: d
    for d in [
        FormDescriptor("E2", "quasi-2", "SL2Z", ("eisenstein",), "Eisenstein E_2 = P"),
        FormDescriptor("E4", "4", "SL2Z", ("eisenstein",), "Eisenstein E_4 = Q"),
        FormDescriptor("E6", "6", "SL2Z", ("eisenstein",), "Eisenstein E_6 = R"),
        FormDescriptor("E8", "8", "SL2Z", ("eisenstein",), "Eisenstein E_8 (supplementary)"),
        FormDescriptor("P", "quasi-2", "SL2Z", ("eisenstein",), "Ramanujan P"),
        FormDescriptor("Q", "4", "SL2Z", ("eisenstein",), "Ramanujan Q"),
        FormDescriptor("R", "6", "SL2Z", ("eisenstein",), "Ramanujan R"),
        FormDescriptor("Ecal2", "quasi-2", "Gamma0_2", ("eisenstein", "level1_combination"), "level-2 Eisenstein E_2"),
        FormDescriptor("Ecal4", "4", "Gamma0_2", ("eisenstein",), "level-2 Eisenstein E_4"),
        FormDescriptor("Et2", "2", "Gamma0_2", ("lambert", "odd_divisor", "level1_combination"), "weight-2 form E~_2"),
        FormDescriptor("Pcal", "quasi-2", "Gamma0_2", ("lambert",), "Ramamani P"),
        FormDescriptor("Ptilde", "2", "Gamma0_2", ("lambert",), "Ramamani P~"),
        FormDescriptor("Qcal", "4", "Gamma0_2", ("lambert",), "Ramamani Q"),
        FormDescriptor("Delta", "12", "SL2Z", ("product", "eisenstein"), "discriminant, coefficients tau(n)"),
        FormDescriptor("Dcal", "4", "Gamma0_2", ("eisenstein",), "(E~_2^2 - E_4)/64, coefficients delta_8(n)"),
        FormDescriptor("j", "0", "SL2Z", ("quotient",), "Klein j = E_4^3/Delta"),
        FormDescriptor("j2", "0", "Gamma0_2", ("quotient",), "Hauptmodul j_2 = E~_2^2/D"),
        FormDescriptor("theta2", "1/2", "Gamma_2", ("series",), "null theta_2"),
        FormDescriptor("theta3", "1/2", "Gamma_2", ("series",), "null theta_3"),
        FormDescriptor("theta4", "1/2", "Gamma_2", ("series",), "null theta_4"),
        FormDescriptor("eta", "1/2", "SL2Z", ("product",), "Dedekind eta"),
        FormDescriptor("lambda", "0", "Gamma_2", ("theta_quotient",), "modular lambda = theta_2^4/theta_3^4"),
        FormDescriptor("s", "0", "Gamma0_2", ("j2_quarter", "delta_quotient", "theta_quotient"), "s = j_2/64"),
        FormDescriptor("u1", "quasi-2", "Gamma0_2", ("schwarz", "theta"), "gDH variable u_1 (lam-degree 1)"),
        FormDescriptor("u2", "quasi-2", "Gamma0_2", ("schwarz", "theta"), "gDH variable u_2 (lam-degree 1)"),
        FormDescriptor("u3", "quasi-2", "Gamma0_2", ("schwarz", "theta"), "gDH variable u_3 (lam-degree 1)"),
        FormDescriptor("v1", "quasi-2", "Gamma_2", ("theta",), "DH variable from theta_4 (lam-degree 1)"),
        FormDescriptor("v2", "quasi-2", "Gamma_2", ("theta",), "DH variable from theta_2 (lam-degree 1)"),
        FormDescriptor("v3", "quasi-2", "Gamma_2", ("theta",), "DH variable from theta_3 (lam-degree 1)"),
    ]
}


def build(name: str, n: int, mode: str | None = None) -> GradedSeries:
    """Construct a catalog entry by name as a GradedSeries at order ``n``."""
    plain = {
        "E2": lambda: eisenstein_level1(2, n),
        "E4": lambda: eisenstein_level1(4, n),
        "E6": lambda: eisenstein_level1(6, n),
        "E8": lambda: eisenstein_level1(8, n),
        "P": lambda: eisenstein_level1(2, n),
        "Q": lambda: eisenstein_level1(4, n),
        "R": lambda: eisenstein_level1(6, n),
        "Ecal2": lambda: eisenstein_level2(2, n),
        "Ecal4": lambda: eisenstein_level2(4, n),
        "Et2": lambda: e_tilde_2(n, mode or "odd_divisor"),
        "Pcal": lambda: ramamani("P", n),
        "Ptilde": lambda: ramamani("Ptilde", n),
        "Qcal": lambda: ramamani("Q", n),
        "Delta": lambda: delta_fn(n, mode or "product"),
        "Dcal": lambda: d_cal(n),
        "j": lambda: j_fn(n),
        "j2": lambda: j2_fn(n),
        "theta2": lambda: theta(2, n),
        "theta3": lambda: theta(3, n),
        "theta4": lambda: theta(4, n),
        "eta": lambda: eta(n),
        "lambda": lambda: lambda_fn(n),
        "s": lambda: s_fn(n, mode or "j2_quarter"),
    }
    if name in plain:
        return GradedSeries(0, plain[name]())
    if name in ("u1", "u2", "u3"):
        return gdh_u(int(name[1]), n, mode or "schwarz")
    if name in ("v1", "v2", "v3"):
        return dh_u(int(name[1]), n)
    raise KeyError(name)
