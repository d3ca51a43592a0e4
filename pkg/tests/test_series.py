from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modforms2.catalog import d_cal, e_tilde_2, eisenstein_level1, eisenstein_level2, theta
from modforms2.series import (
    INF,
    UNIT,
    GradedSeries,
    GradingError,
    LaurentSeries,
    PrecisionError,
    ZeroDivisorError,
    delta,
    div,
    dlog,
    eq_to_order,
    inverse,
    scale_arg,
    z_deriv,
)

Q = LaurentSeries.monomial(UNIT)


def qs(*coeffs, precision=None):
    return LaurentSeries.from_q_coefficients(coeffs, precision)


def agree(a, b):
    n = min(a.precision, b.precision)
    return bool(eq_to_order(a, b, n))


# ---------------------------------------------------------------------------
# strategies

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def series(draw, min_val=-30, max_val=30, step=None, nonzero_lead=False, finite=True):
    step = step or draw(st.sampled_from([1, 3, 8, 12, 24]))
    val = draw(st.integers(min_val // step, max_val // step)) * step
    n = draw(st.integers(1, 8))
    coeffs = {val + step * k: draw(rationals) for k in range(n)}
    if nonzero_lead and coeffs[val] == 0:
        coeffs[val] = Fraction(1)
    precision = val + step * n + draw(st.integers(0, 30)) if finite else INF
    return LaurentSeries(coeffs, precision)


units = series(nonzero_lead=True)

# ---------------------------------------------------------------------------
# examples


def test_add_examples():
    assert (1 + Q) + (1 - Q) == LaurentSeries.constant(2)
    f = eisenstein_level1(2, 6)
    assert f + LaurentSeries() == f
    assert (f + 24 * Q).q(1) == 0


def test_mul_examples():
    assert (1 + Q) * (1 - Q) == 1 - Q * Q
    et2 = qs(1, 24, 24, 96, 24, precision=5 * UNIT)
    assert (et2 * et2).q_coefficients(5) == [1, 48, 624, 1344, 5232]
    q18 = LaurentSeries.monomial(3)
    assert (q18 * q18) == LaurentSeries.monomial(6)


def test_div_examples():
    assert div(1 - Q * Q, 1 - Q) == 1 + Q
    d = qs(1, 8, 28, 64, precision=4 * UNIT)
    assert inverse(d).q_coefficients(4) == [1, -8, 36, -128]
    j2 = e_tilde_2(8) ** 2 / d_cal(8)
    assert [j2[e] for e in (-24, 0, 24, 48)] == [1, 40, 276, -2048]


def test_pow_examples():
    assert (1 + Q) ** 2 == 1 + 2 * Q + Q * Q
    d3 = d_cal(6) ** 3
    assert d3.valuation == 3 * UNIT and d3.q(3) == 1
    t8 = theta(2, 4) ** 8
    assert t8.valuation == UNIT and t8[UNIT] == 256


def test_scale_arg_examples():
    e2 = eisenstein_level1(2, 6)
    assert scale_arg(e2, 2).q_coefficients(5) == [1, 0, -24, 0, -72]
    assert scale_arg(e2, 1) == e2
    assert (2 * scale_arg(e2, 2) - e2).q_coefficients(5) == [1, 24, 24, 96, 24]
    with pytest.raises(ValueError):
        scale_arg(e2, 0)


def test_delta_and_dlog_examples():
    assert delta(Q**3) == 3 * Q**3
    assert delta(LaurentSeries.constant(5)) == LaurentSeries(precision=INF)
    assert delta(d_cal(5)).q_coefficients(5) == [0, 1, 16, 84, 256]
    assert dlog(Q) == LaurentSeries.constant(1)


def test_z_deriv_examples():
    g = z_deriv(GradedSeries(0, Q))
    assert g.degree == 1 and g.body == 2 * Q
    e2 = eisenstein_level1(2, 10)
    y = GradedSeries(1, e2)
    y3 = z_deriv(z_deriv(z_deriv(y)))
    assert y3.degree == 4 and y3.body == 8 * delta(delta(delta(e2)))
    chazy = y3 - 2 * y * z_deriv(z_deriv(y)) + 3 * z_deriv(y) ** 2
    assert chazy.degree == 4 and chazy.body.is_zero()


def test_eq_to_order_examples():
    f = eisenstein_level1(2, 4)
    assert eq_to_order(f, f, 4 * UNIT)
    assert eq_to_order(1 + Q, 1 + Q + Q**100, 50 * UNIT)
    res = eq_to_order(f, eisenstein_level2(2, 4), UNIT * 4)
    assert not res and res.exponent == UNIT and (res.lhs, res.rhs) == (-24, 8)
    with pytest.raises(PrecisionError, match="lhs"):
        eq_to_order(f, f, 5 * UNIT)


def test_precision_errors():
    f = qs(1, 2, 3)
    with pytest.raises(PrecisionError):
        f.q(3)
    with pytest.raises(ZeroDivisorError, match="zero divisor"):
        inverse(LaurentSeries())
    with pytest.raises(PrecisionError, match="insufficient precision"):
        inverse(LaurentSeries(precision=48))
    with pytest.raises(PrecisionError):
        div(LaurentSeries.constant(1), 1 + Q)  # exact quotient is infinite


def test_exact_monomial_inverse():
    inv = inverse(LaurentSeries.monomial(-24, Fraction(1, 64)))
    assert inv.is_exact and inv == LaurentSeries.monomial(24, 64)


def test_dump_format():
    text = (Q + Fraction(1, 2) * Q**2).truncate(3 * UNIT).dump(2)
    assert text.splitlines() == ["valuation=24 precision=72 lambda=2", "24/24\t1/1", "48/24\t1/2"]
    assert LaurentSeries.constant(1).dump().startswith("valuation=0 precision=inf")


def test_grading_rejects_mixed_degrees():
    a = GradedSeries(1, Q)
    with pytest.raises(GradingError):
        a + GradedSeries(0, Q)
    assert (a * a).degree == 2 and (a / a).degree == 0


# ---------------------------------------------------------------------------
# properties (each runs on well over 100 random truncated series)

PROPS = settings(max_examples=150, deadline=None)


@PROPS
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert agree(a + b, b + a)
    assert agree(a * b, b * a)
    assert agree((a + b) + c, a + (b + c))
    assert agree((a * b) * c, a * (b * c))
    assert agree(a * (b + c), a * b + a * c)
    assert agree(a - a, LaurentSeries())
    assert agree(a * 1, a)


@PROPS
@given(series(), series())
def test_leibniz(a, b):
    assert agree(delta(a * b), delta(a) * b + a * delta(b))


@PROPS
@given(units, units)
def test_dlog_of_product(a, b):
    assert agree(dlog(a * b), dlog(a) + dlog(b))


@PROPS
@given(series(), units)
def test_div_inverts_mul(a, b):
    assert agree((a * b) / b, a)
    assert agree(b * inverse(b), LaurentSeries.constant(1))


@PROPS
@given(series(), series(), st.integers(1, 4))
def test_scale_arg_chain_rule_and_homomorphism(a, b, m):
    assert agree(delta(scale_arg(a, m)), m * scale_arg(delta(a), m))
    assert agree(scale_arg(a * b, m), scale_arg(a, m) * scale_arg(b, m))
    assert agree(scale_arg(a + b, m), scale_arg(a, m) + scale_arg(b, m))


@st.composite
def exact_and_truncation(draw):
    exact = draw(series(finite=False, nonzero_lead=True))
    cut = exact.valuation + draw(st.integers(1, 60))
    return exact, exact.truncate(cut)


@PROPS
@given(exact_and_truncation(), exact_and_truncation())
def test_precision_is_never_optimistic(pa, pb):
    (ea, ta), (eb, tb) = pa, pb
    prod = ta * tb
    assert eq_to_order(prod, ea * eb, prod.precision)
    quot = ta / tb
    # the exact quotient, expanded well past the claimed precision
    ref = ea * inverse(eb, quot.precision - ea.valuation + 48)
    assert eq_to_order(quot, ref, quot.precision)


@PROPS
@given(st.integers(-3, 3), st.integers(-3, 3), series())
def test_graded_add_requires_equal_degree(d1, d2, a):
    x, y = GradedSeries(d1, a), GradedSeries(d2, a)
    if d1 == d2:
        assert (x + y).degree == d1
    else:
        with pytest.raises(GradingError):
            x + y
