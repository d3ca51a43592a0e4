"""Truncated Laurent series in the 24th root of the nome.

Exponents are integers measured in units of 1/24 of a power of q, so
``q**(1/8)`` is exponent 3 and ``q`` is exponent 24.  Every series carries a
*precision*: coefficients at exponents ``>= precision`` are unknown.  Exact
objects (constants, monomials) have infinite precision.

Precision is propagated pessimistically through every operation, so any
coefficient a series reports is exactly correct.

:class:`GradedSeries` attaches an integer power of the formal symbol
``lam`` (standing for pi*i) so that z-derivatives, ``d/dz = 2*pi*i*q d/dq``,
stay rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Union

INF = math.inf
UNIT = 24  # exponent units per power of q

Number = Union[int, Fraction]


class SeriesError(ArithmeticError):
    """Base class for series arithmetic failures."""


class PrecisionError(SeriesError):
    """A coefficient or comparison needs terms beyond the known precision."""


class ZeroDivisorError(SeriesError, ZeroDivisionError):
    pass


class GradingError(SeriesError):
    """Addition of series carrying different powers of lam."""


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _common_denominator(values: Iterable[Fraction]) -> int:
    return reduce(_lcm, (v.denominator for v in values), 1)


class LaurentSeries:
    """Immutable truncated Laurent series with exact rational coefficients.

    Parameters
    ----------
    coeffs : mapping exponent -> rational
        Exponents in 1/24 units. Zero coefficients and exponents at or beyond
        ``precision`` are discarded.
    precision : int or ``INF``
        Exponents ``>= precision`` are unknown.
    """

    __slots__ = ("_c", "_exps", "precision", "valuation")

    def __init__(self, coeffs: Mapping[int, Number] | None = None, precision=INF):
        if precision != INF:
            precision = int(precision)
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                e = int(e)
                if e < precision and v:
                    c[e] = Fraction(v)
        self._c = c
        self._exps = tuple(sorted(c))
        self.precision = precision
        self.valuation = self._exps[0] if self._exps else precision

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, value: Number) -> "LaurentSeries":
        return cls({0: value})

    @classmethod
    def monomial(cls, exponent: int, value: Number = 1) -> "LaurentSeries":
        return cls({exponent: value})

    @classmethod
    def from_q_coefficients(cls, coeffs: Iterable[Number], precision=None, offset: int = 0):
        """Build ``sum c_n q^(n + offset/24)`` from a dense list in integer powers of q.

        The default precision is just past the last listed power of q.
        """
        coeffs = list(coeffs)
        if precision is None:
            precision = UNIT * len(coeffs) + offset
        return cls({UNIT * n + offset: c for n, c in enumerate(coeffs)}, precision)

    # -- inspection -----------------------------------------------------------

    def __getitem__(self, e: int) -> Fraction:
        if e >= self.precision:
            raise PrecisionError(f"coefficient at exponent {e}/24 is unknown (precision {self.precision})")
        return self._c.get(e, Fraction(0))

    def q(self, n: int) -> Fraction:
        """Coefficient of q**n."""
        return self[UNIT * n]

    def items(self):
        """Nonzero (exponent, coefficient) pairs in ascending exponent order."""
        return ((e, self._c[e]) for e in self._exps)

    def exponents(self) -> tuple[int, ...]:
        return self._exps

    def __len__(self) -> int:
        return len(self._exps)

    @property
    def is_exact(self) -> bool:
        return self.precision == INF

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self._c

    def truncate(self, precision) -> "LaurentSeries":
        if precision >= self.precision:
            return self
        return LaurentSeries(self._c, precision)

    def q_coefficients(self, n_terms: int) -> list[Fraction]:
        """Dense coefficients of q**0 .. q**(n_terms-1)."""
        return [self.q(n) for n in range(n_terms)]

    def __repr__(self) -> str:
        terms = []
        for e, c in list(self.items())[:6]:
            terms.append(f"{c}*q^({e}/24)")
        if len(self) > 6:
            terms.append("...")
        body = " + ".join(terms) if terms else "0"
        prec = "exact" if self.is_exact else f"O(q^({self.precision}/24))"
        return f"LaurentSeries({body} + {prec})"

    def dump(self, lambda_degree: int = 0) -> str:
        lines = [f"valuation={_fmt_bound(self.valuation)} precision={_fmt_bound(self.precision)} lambda={lambda_degree}"]
        for e, c in self.items():
            lines.append(f"{e}/24\t{c.numerator}/{c.denominator}")
        return "\n".join(lines)

    # -- operators ------------------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({e: -c for e, c in self._c.items()}, self.precision)

    def __sub__(self, other):
        return add(self, -_coerce(other))

    def __rsub__(self, other):
        return add(_coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisorError("zero divisor")
            return scale(self, 1 / Fraction(other))
        return div(self, other)

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __pow__(self, k: int):
        return int_pow(self, k)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.precision == other.precision and self._c == other._c

    def __hash__(self):
        return hash((self.precision, tuple(self.items())))


def _fmt_bound(x) -> str:
    return "inf" if x == INF else str(x)


def _coerce(x) -> LaurentSeries:
    if isinstance(x, LaurentSeries):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentSeries.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent series")


ZERO = LaurentSeries()
ONE = LaurentSeries.constant(1)


def scale(a: LaurentSeries, c: Number) -> LaurentSeries:
    c = Fraction(c)
    return LaurentSeries({e: c * v for e, v in a.items()}, a.precision)


def add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    a, b = _coerce(a), _coerce(b)
    prec = min(a.precision, b.precision)
    out = {}
    for src in (a, b):
        for e, c in src.items():
            if e < prec:
                out[e] = out.get(e, 0) + c
    return LaurentSeries(out, prec)


def _integer_terms(a: LaurentSeries) -> tuple[list[tuple[int, int]], int]:
    den = _common_denominator(c for _, c in a.items())
    return [(e, c.numerator * (den // c.denominator)) for e, c in a.items()], den


def mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Cauchy product; precision min(a.prec + b.val, b.prec + a.val)."""
    a, b = _coerce(a), _coerce(b)
    prec = min(a.precision + b.valuation, b.precision + a.valuation)
    if a.is_zero() or b.is_zero():
        return LaurentSeries(None, prec)
    # convolve integer numerators, normalise once per output coefficient
    ta, da = _integer_terms(a)
    tb, db = _integer_terms(b)
    if len(ta) > len(tb):
        ta, tb = tb, ta
    acc: dict[int, int] = {}
    vb = tb[0][0]
    for ea, ca in ta:
        if ea + vb >= prec:
            break
        for eb, cb in tb:
            e = ea + eb
            if e >= prec:
                break
            acc[e] = acc.get(e, 0) + ca * cb
    den = da * db
    return LaurentSeries({e: Fraction(n, den) for e, n in acc.items()}, prec)


def inverse(b: LaurentSeries, precision=None) -> LaurentSeries:
    """Multiplicative inverse of ``b``.

    For exact ``b`` that is not a monomial the inverse is an infinite series,
    so a finite target ``precision`` must be supplied.
    """
    b = _coerce(b)
    if b.is_zero():
        if b.is_exact:
            raise ZeroDivisorError("zero divisor")
        raise PrecisionError(
            f"insufficient precision: divisor has no known nonzero coefficient below {b.precision}/24"
        )
    v = b.valuation
    if len(b) == 1 and b.is_exact:
        return LaurentSeries({-v: 1 / b[v]})
    natural = b.precision - 2 * v
    if precision is None:
        precision = natural
    precision = min(precision, natural)
    if precision == INF:
        raise PrecisionError("inverse of an exact non-monomial series needs a target precision")
    length = precision + v  # relative length in 1/24 units
    if length <= 0:
        return LaurentSeries(None, precision)
    terms, den = _integer_terms(b)
    rel = [(e - v, c) for e, c in terms]
    step = reduce(math.gcd, (r for r, _ in rel[1:]), 0) or length
    rel = [(r // step, c) for r, c in rel if r < length]
    m = (length - 1) // step + 1
    # 1/b = den * q^(-v) * sum_k C_k / b0^(k+1) x^k with x = q^(step/24)
    b0 = rel[0][1]
    C = [0] * m
    C[0] = 1
    pw = [1]
    for k in range(1, m):
        s = 0
        for j, bj in rel[1:]:
            if j > k:
                break
            while len(pw) <= j:
                pw.append(pw[-1] * b0)
            s += bj * C[k - j] * pw[j - 1]
        C[k] = -s
    out = {}
    p = b0
    for k in range(m):
        if C[k]:
            out[k * step - v] = Fraction(den * C[k], p)
        p *= b0
    return LaurentSeries(out, precision)


def _exact_quotient(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries | None:
    """Long division of two exact Laurent polynomials; None if it leaves a remainder."""
    rem = dict(a.items())
    b_terms = list(b.items())
    top_b, lead = b_terms[-1]
    out = {}
    while rem:
        e = max(rem)
        if e - top_b < a.valuation - b.valuation:
            return None
        c = rem[e] / lead
        shift = e - top_b
        out[shift] = c
        for eb, cb in b_terms:
            k = eb + shift
            v = rem.get(k, 0) - c * cb
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentSeries(out)


def div(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    a, b = _coerce(a), _coerce(b)
    if b.is_zero():
        inverse(b)  # raises the right error
    vb = b.valuation
    target = min(a.precision - vb, b.precision - 2 * vb + a.valuation)
    if a.is_zero():
        return LaurentSeries(None, target)
    if target == INF and not (len(b) == 1 and b.is_exact):
        exact = _exact_quotient(a, b)
        if exact is None:
            raise PrecisionError("quotient of exact series is not a finite Laurent series; truncate an operand first")
        return exact
    inv = inverse(b, None if target == INF else target - a.valuation)
    return mul(a, inv)


def int_pow(a: LaurentSeries, k: int) -> LaurentSeries:
    a = _coerce(a)
    if k < 0:
        return inverse(int_pow(a, -k))
    result = ONE
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def scale_arg(a: LaurentSeries, m: int) -> LaurentSeries:
    """f(z) -> f(m z), i.e. q -> q**m."""
    if m < 1:
        raise ValueError("scale factor must be a positive integer")
    return LaurentSeries({m * e: c for e, c in a.items()}, m * a.precision)


def delta(a: LaurentSeries) -> LaurentSeries:
    """q d/dq: the coefficient at exponent e is multiplied by e/24."""
    return LaurentSeries({e: c * Fraction(e, UNIT) for e, c in a.items()}, a.precision)


def dlog(a: LaurentSeries) -> LaurentSeries:
    return div(delta(a), a)


@dataclass(frozen=True)
class Agreement:
    """Outcome of a coefficient comparison below a bound."""

    ok: bool
    exponent: int | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok


def eq_to_order(a: LaurentSeries, b: LaurentSeries, n: int) -> Agreement:
    """Compare coefficients at all exponents < n (1/24 units)."""
    a, b = _coerce(a), _coerce(b)
    for label, s in (("lhs", a), ("rhs", b)):
        if s.precision < n:
            raise PrecisionError(f"{label} known only below exponent {s.precision}/24, comparison needs {n}/24")
    for e in sorted(set(a.exponents()) | set(b.exponents())):
        if e >= n:
            break
        ca, cb = a[e], b[e]
        if ca != cb:
            return Agreement(False, e, ca, cb)
    return Agreement(True)


# ---------------------------------------------------------------------------
# lam-graded series


def _graded(x) -> "GradedSeries":
    if isinstance(x, GradedSeries):
        return x
    return GradedSeries(0, _coerce(x))


@dataclass(frozen=True)
class GradedSeries:
    """``lam**degree * body`` where lam stands for pi*i."""

    degree: int
    body: LaurentSeries

    def __add__(self, other):
        other = _graded(other)
        if other.degree != self.degree:
            raise GradingError(f"cannot add lam^{self.degree} and lam^{other.degree} terms")
        return GradedSeries(self.degree, self.body + other.body)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries(self.degree, -self.body)

    def __sub__(self, other):
        return self + (-_graded(other))

    def __rsub__(self, other):
        return _graded(other) + (-self)

    def __mul__(self, other):
        other = _graded(other)
        return GradedSeries(self.degree + other.degree, self.body * other.body)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _graded(other)
        return GradedSeries(self.degree - other.degree, div(self.body, other.body))

    def __rtruediv__(self, other):
        return _graded(other) / self

    def __pow__(self, k: int):
        return GradedSeries(self.degree * k, int_pow(self.body, k))

    @property
    def precision(self):
        return self.body.precision

    def lam(self, k: int = 1) -> "GradedSeries":
        return GradedSeries(self.degree + k, self.body)

    def dump(self) -> str:
        return self.body.dump(self.degree)


def z_deriv(g: GradedSeries) -> GradedSeries:
    """d/dz = 2*lam*delta."""
    g = _graded(g)
    return GradedSeries(g.degree + 1, scale(delta(g.body), 2))
