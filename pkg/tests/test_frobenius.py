from fractions import Fraction

import pytest

from hypergeo.core.errors import DomainError, ParameterError, ResonanceError
from hypergeo.frobenius import (
    LogSeries,
    apply_theta,
    build_ode_polys,
    contiguity_raise,
    extend_coefficients,
    leading_magnitude,
    ode_residual,
    poly_from_shifts,
    taylor_at,
)
from hypergeo.numeric import principal_pow
from hypergeo.series import HyperParams, pochhammer
from tests.helpers import close, gz

F = Fraction
PLAIN = HyperParams((F(1, 2), F(1, 3)), (F(1, 5),))


def _relative_residual(ode, s, z, prec):
    return ode_residual(ode, s, z, prec) / leading_magnitude(s, z, prec)


# ----------------------------------------------------------------
# Polynomials

def test_poly_from_shifts():
    assert poly_from_shifts([F(1), F(2)]) == (2, 3, 1)
    assert poly_from_shifts([]) == (1,)


def test_taylor_at():
    # (1+t)^2 + 3(1+t) + 2
    assert taylor_at((F(2), F(3), F(1)), F(1)) == (6, 5, 1)
    assert taylor_at((F(2), F(3), F(1)), F(0)) == (2, 3, 1)


def test_build_ode_polys():
    ode = build_ode_polys(PLAIN)
    assert ode.P == poly_from_shifts([F(0), F(-4, 5)])
    assert ode.Q == poly_from_shifts([F(1, 2), F(1, 3)])
    assert ode.degree == 2


# ----------------------------------------------------------------
# Recurrence

def test_first_layer():
    s = extend_coefficients(build_ode_polys(PLAIN), F(1, 2), 1, [F(1)], 1)
    assert s.coeffs[1][0] == F(39, 70)
    assert s.is_exact


def test_simple_root_matches_pochhammer_ratios():
    a, b = PLAIN.upper
    (c,) = PLAIN.lower
    s = extend_coefficients(build_ode_polys(PLAIN), a, 1, [F(1)], 20)
    for i in range(21):
        want = pochhammer(a, i) * pochhammer(a - c + 1, i) / (pochhammer(F(1), i) * pochhammer(a - b + 1, i))
        assert s.coeffs[i][0] == want


def test_resonance():
    params = HyperParams((F(1, 2), F(3, 2)), (F(3, 4),))
    with pytest.raises(ResonanceError) as exc:
        extend_coefficients(build_ode_polys(params), F(1, 2), 1, [F(1)], 3)
    assert exc.value.details["i"] == 1


def test_indicial_violation():
    ode = build_ode_polys(PLAIN)
    with pytest.raises(ParameterError):
        extend_coefficients(ode, F(1, 4), 1, [F(1)], 3)
    # simple root asked for a double one
    with pytest.raises(ParameterError):
        extend_coefficients(ode, F(1, 2), 2, [F(1), F(0)], 3)
    with pytest.raises(ParameterError):
        extend_coefficients(ode, F(1, 2), 1, [F(1), F(0)], 3)


def test_numeric_matches_exact(example1, prec):
    ode = build_ode_polys(example1)
    exact = extend_coefficients(ode, F(10, 3), 2, [F(1), F(-2)], 12)
    approx = extend_coefficients(ode, F(10, 3), 2, [F(1), F(-2)], 12, prec)
    assert not approx.is_exact
    for el, al in zip(exact.coeffs, approx.coeffs):
        for e, a in zip(el, al):
            assert close(a, prec.real(e), prec.eps() * max(1, abs(prec.real(e))) * 100)


# ----------------------------------------------------------------
# theta and contiguity

def test_apply_theta():
    s = LogSeries(F(1, 2), 2, ((F(1), F(0)), (F(0), F(1))))
    t = apply_theta(s)
    assert t.coeffs == ((F(-1, 2), F(0)), (F(1), F(-3, 2)))


def test_contiguity_raise_guards():
    s = LogSeries(F(1, 2), 1, ((F(1),),))
    with pytest.raises(DomainError):
        contiguity_raise(s, 0)
    zero = LogSeries(F(1, 2), 1, ((F(0),), (F(0),)))
    assert contiguity_raise(zero, F(1, 2)).is_zero()


def test_contiguity_raise_binomial(prec):
    # 1F0(1/2) at infinity, raised to 1F0(3/2) = (1 - z)^(-3/2)
    params = HyperParams((F(1, 2),))
    s = extend_coefficients(build_ode_polys(params), F(1, 2), 1, [F(1)], 60, prec)
    raised = contiguity_raise(s, F(1, 2))
    z = gz(10, 10)
    want = principal_pow(prec.complex(1) - prec.complex(z), F(-3, 2), prec)
    assert close(raised.evaluate(z), want, 1e-35 * abs(want))


# ----------------------------------------------------------------
# Residuals

def test_residual_of_zero_series(example1, prec):
    s = LogSeries(F(10, 3), 2, ((F(0), F(0)), (F(0), F(0))))
    assert ode_residual(build_ode_polys(example1), s, gz(13, 13), prec) == 0


def test_residual_needs_outside_point(example1, prec):
    s = extend_coefficients(build_ode_polys(example1), F(10, 3), 2, [F(1), F(0)], 5)
    with pytest.raises(DomainError):
        ode_residual(build_ode_polys(example1), s, gz("1/2"), prec)


def test_residual_small_at_forty_layers(example1, prec):
    s = extend_coefficients(build_ode_polys(example1), F(10, 3), 2, [F(1), F(0)], 40)
    assert _relative_residual(build_ode_polys(example1), s, gz(13, 13), prec) < 1e-38


def test_residual_decays_with_order(example1, prec):
    ode = build_ode_polys(example1)
    rel = []
    for n in (10, 20, 40):
        s = extend_coefficients(ode, F(10, 3), 2, [F(1), F(0)], n)
        rel.append(_relative_residual(ode, s, gz(13, 13), prec))
    assert rel[0] > rel[1] > rel[2]


def test_residual_flags_corruption(example1, prec):
    s = extend_coefficients(build_ode_polys(example1), F(10, 3), 2, [F(1), F(0)], 40)
    bad = s.with_coefficient(3, 0, s.coeffs[3][0] * F(1001, 1000))
    assert _relative_residual(build_ode_polys(example1), bad, gz(13, 13), prec) > 1e-10


def test_residual_log_case(prec):
    # 2F1(1,1;2;z) = -log(1-z)/z: double root at -1
    params = HyperParams((F(1), F(1)), (F(2),))
    ode = build_ode_polys(params)
    s = extend_coefficients(ode, F(1), 2, [F(0), F(1)], 30)
    z = gz(5, 5)
    assert _relative_residual(ode, s, z, prec) < 1e-15


def test_series_helpers(prec):
    s = extend_coefficients(build_ode_polys(PLAIN), F(1, 2), 1, [F(1)], 6)
    assert s.N == 6
    assert s.truncated(2).N == 2
    with pytest.raises(DomainError):
        s.evaluate(gz(3))
    with pytest.raises(DomainError):
        s.evaluate(0, prec)
    with pytest.raises(ParameterError):
        LogSeries(F(1), 2, ((F(1),),))
