import cmath
import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from modforms2 import catalog
from modforms2.numeric import (
    DomainError,
    GroupError,
    HalfPlaneError,
    IntegrationError,
    Matrix2,
    SingularityError,
    eval_series,
    field_rhs,
    hyp2f1,
    make_field,
    potential_V,
    rk_integrate,
    schwarz_map_check,
    transform_residual,
)
from modforms2.numeric.checks import (
    ode_check,
    series_state,
    shadow_battery,
    transform_battery,
    yg_check,
)
from modforms2.numeric.hypergeom import hyp2f1_terms
from modforms2.numeric.jets import Jet
from modforms2.numeric.transforms import (
    random_complex_sl2,
    random_gamma0_2,
    random_sl2z,
    y_transform_residual,
)
from modforms2.series import GradedSeries, LaurentSeries

# ---------------------------------------------------------------------------
# evaluation


def test_eval_e2_at_i_is_three_over_pi():
    ev = eval_series(catalog.eisenstein_level1(2, 60), 1j)
    assert abs(ev.value - 3 / math.pi) < 1e-10
    assert 0 <= ev.tail_estimate < 1e-30


def test_eval_constant_and_grading():
    ev = eval_series(LaurentSeries.constant(1), 0.3 + 2j)
    assert ev.value == 1 and ev.tail_estimate == 0
    g = GradedSeries(2, LaurentSeries.constant(1))
    assert abs(eval_series(g, 1j).value + math.pi**2) < 1e-12


def test_delta_equals_eta_24_numerically():
    z = 0.1 + 1j
    d = eval_series(catalog.delta_fn(60), z).value
    e = eval_series(catalog.eta(60), z).value
    assert abs(d - e**24) <= 1e-12 * abs(d)


def test_eval_rejects_lower_half_plane():
    with pytest.raises(HalfPlaneError):
        eval_series(LaurentSeries.constant(1), 0.5 - 1j)


def test_fractional_exponents_use_z_directly():
    z = -0.7 + 0.9j
    t2 = eval_series(catalog.theta(2, 60), z).value
    direct = sum(cmath.exp(math.pi * 1j * z * (n + 0.5) ** 2) for n in range(-30, 30))
    assert abs(t2 - direct) < 1e-13


# ---------------------------------------------------------------------------
# fields


def test_chazy_rhs_transcription():
    y = np.array([1 + 2j, 0.5j, -1.0])
    out = field_rhs(make_field("chazy"), 1j, y)
    assert np.allclose(out, [0.5j, -1.0, 2 * y[0] * y[2] - 3 * y[1] ** 2])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=3, max_size=3))
def test_dh_is_gdh_zero_after_rescaling(u):
    """The pairwise-sum Halphen system is gDH(0,0,0) under u -> -u/2."""
    u = np.array(u)
    dh = field_rhs(make_field("dh"), 1j, u)
    gdh0 = field_rhs(make_field("gdh", (0, 0, 0)), 1j, -u / 2)
    assert np.allclose(dh, -2 * gdh0, atol=1e-9)
    # and the printed pairwise relations hold for the dh field
    assert np.allclose([dh[0] + dh[1], dh[1] + dh[2], dh[2] + dh[0]], [u[0] * u[1], u[1] * u[2], u[2] * u[0]])


def test_eq18_denominator_at_i_is_nonzero():
    y, y1, _ = series_state("eq18", 1j)
    assert abs(2 * y1 - y * y) > 1e-3


def test_guards():
    with pytest.raises(SingularityError, match="2y' - y\\^2"):
        field_rhs(make_field("eq18"), 1j, [2.0, 2.0, 0.0])
    with pytest.raises(SingularityError, match="s'"):
        field_rhs(make_field("schwarzian", (0.5, 0, 0)), 1j, [0.3, 0.0, 1.0])
    with pytest.raises(ValueError):
        make_field("nosuch")


def test_potential_value_at_half():
    assert potential_V(0.5, (0.5, 0, 0)) == pytest.approx(10.0)


# ---------------------------------------------------------------------------
# integrator


def test_linear_field_reaches_e():
    r = rk_integrate(lambda z, w: w, [1.0], 0, 1, tol=1e-12)
    assert abs(r.state[0] - math.e) <= 1e-10


def test_convergence_with_tolerance():
    errs = [abs(rk_integrate(lambda z, w: w, [1.0], 0, 2, tol=t).state[0] - math.exp(2)) for t in (1e-6, 1e-9)]
    assert errs[1] < errs[0] / 100


def test_path_independence():
    f = make_field("chazy")
    y0 = series_state("chazy", 1j)
    direct = rk_integrate(f, y0, 1j, 0.4 + 0.8j, 1e-11).state
    mid = rk_integrate(f, y0, 1j, 0.5 + 1.2j, 1e-11).state
    via = rk_integrate(f, mid, 0.5 + 1.2j, 0.4 + 0.8j, 1e-11).state
    assert np.linalg.norm(direct - via) <= 1e-8 * np.linalg.norm(direct)


def test_step_underflow_raises():
    def blowup(z, w):
        if z.real >= 0.5:  # impassable wall
            raise SingularityError("test", 0.0, z)
        return np.array([1.0])

    with pytest.raises(IntegrationError, match="underflow"):
        rk_integrate(blowup, [0.0], 0, 1, tol=1e-10)


@pytest.mark.parametrize("kind", ["chazy", "eq18", "dh", "gdh", "schwarzian"])
def test_ode_cross_validation(kind):
    rep = ode_check(kind)
    assert rep.passed, rep.as_dict()


def test_gdh_to_second_point():
    assert ode_check("gdh", z1=0.3 + 0.9j).residual <= 1e-8


# ---------------------------------------------------------------------------
# general solution of the third-order equation from the Schwarzian


def test_yg_solution_satisfies_third_order_equation():
    for z1 in (0.4 + 0.8j, -0.3 + 0.9j):
        assert yg_check(z1).residual <= 1e-6
    # a non-modular solution of the same Schwarzian equation
    state = series_state("schwarzian", 1j) * np.array([1.02, 0.97 + 0.03j, 1.05])
    assert yg_check(0.4 + 0.8j, state0=state).residual <= 1e-6


def test_yg_with_extra_half_factor_fails():
    assert yg_check(0.4 + 0.8j, factor=0.5).residual > 1e-2


# ---------------------------------------------------------------------------
# jets


def test_jet_arithmetic_matches_closed_forms():
    z0 = 0.3 + 0.2j
    x = Jet.variable(z0, 4)
    f = (x * x + 1) / (x - 2)
    # derivatives of (z^2+1)/(z-2) = z + 2 + 5/(z-2)
    w = z0 - 2
    expected = [z0 + 2 + 5 / w, 1 - 5 / w**2, 10 / w**3, -30 / w**4, 120 / w**5]
    assert np.allclose(f.derivatives(), expected)
    g = x.compose_into([cmath.exp(z0)] * 5)
    assert np.allclose(g.derivatives(), [cmath.exp(z0)] * 5)


# ---------------------------------------------------------------------------
# transformations


def test_matrix_predicates_and_parsing():
    assert Matrix2(1, 0, 2, 1).is_Gamma0_2()
    assert Matrix2(0, -1, 1, 0).is_SL2Z() and not Matrix2(0, -1, 1, 0).is_Gamma0_2()
    assert not Matrix2(2, 0, 0, 1).is_SL2Z()
    assert Matrix2.parse("1,0,2,1") == Matrix2(1, 0, 2, 1)
    with pytest.raises(GroupError):
        Matrix2(1, 2, 2, 4)


def test_random_generators():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = random_sl2z(rng)
        assert m.is_SL2Z() and max(abs(complex(x)) for x in m.entries()) <= 10
        g = random_gamma0_2(rng)
        assert g.is_Gamma0_2() and max(abs(complex(x)) for x in g.entries()) <= 10
    c = random_complex_sl2(rng, 1.1j)
    assert abs(c.det - 1) < 1e-12 and c(1.1j).imag >= 0.8


def test_transformation_law_examples():
    assert transform_residual("E2_law", Matrix2(1, 1, 0, 1), 0.2 + 1j) < 1e-13
    assert transform_residual("Ecal2_law", Matrix2(1, 0, 2, 1), 1j) <= 1e-9
    with pytest.raises(GroupError):
        transform_residual("Ecal2_law", Matrix2(0, -1, 1, 0), 1j)
    with pytest.raises(GroupError):
        transform_residual("E2_law", Matrix2(2, 0, 0, 1), 1j)


def test_transform_battery_passes():
    reports = transform_battery(seed=11)
    assert all(r.passed for r in reports), [r.as_dict() for r in reports if not r.passed]


def test_y_transform_needs_shift_minus_two():
    rng = np.random.default_rng(5)
    m = random_complex_sl2(rng, 1.1j)
    assert y_transform_residual(m, 1.1j) <= 1e-7
    assert y_transform_residual(m, 1.1j, shift=-1.0) > 1e-3


def test_transform_rejects_non_unimodular_complex_matrix():
    with pytest.raises(GroupError):
        transform_residual("y_transform", Matrix2(2, 0, 0, 1), 1j)


# ---------------------------------------------------------------------------
# hypergeometric and Schwarz map


def test_hyp2f1_examples():
    assert hyp2f1(0.25, 0.25, 0.5, 0) == 1
    terms = hyp2f1_terms(0.25, 0.25, 0.5, 0.3, 6)
    for k in range(5):
        assert terms[k + 1] / terms[k] == pytest.approx(0.3 * (0.25 + k) ** 2 / ((0.5 + k) * (1 + k)))
    h = 1e-6
    slope = (hyp2f1(0.25, 0.25, 0.5, h) - hyp2f1(0.25, 0.25, 0.5, -h)) / (2 * h)
    assert slope == pytest.approx(1 / 8, rel=1e-8)


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from([0.25, 0.75, 1.5, -0.5]),
    st.sampled_from([0.25, 0.75, 2.0]),
    st.sampled_from([0.5, 1.5, 3.0]),
    st.floats(-0.8, 0.8),
)
def test_hyp2f1_against_scipy(a, b, c, s):
    assert hyp2f1(a, b, c, s) == pytest.approx(scipy.special.hyp2f1(a, b, c, s), rel=1e-13, abs=1e-14)


def test_hyp2f1_domain():
    with pytest.raises(DomainError):
        hyp2f1(0.25, 0.25, 0.5, 0.9)
    with pytest.raises(DomainError):
        hyp2f1(0.25, 0.25, -1, 0.1)


def test_schwarz_map():
    worst, devs = schwarz_map_check()
    assert worst <= 1e-6 and len(devs) == 6
    with pytest.raises(DomainError):
        schwarz_map_check([0.9])


def test_five_point_stencil_is_too_coarse_near_zero():
    """With h = 1e-3 the 5-point stencil misses the gate, dominated by s = 0.1."""
    worst, devs = schwarz_map_check(method="fd5")
    assert worst > 1e-6 and devs.index(worst) == 0


# ---------------------------------------------------------------------------
# numeric shadow of the exact suite


def test_shadow_battery():
    reports = shadow_battery()
    assert reports and all(r.passed for r in reports), [r.as_dict() for r in reports if not r.passed]
