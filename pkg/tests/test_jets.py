from fractions import Fraction

import pytest

from hypergeo.core.errors import DomainError
from hypergeo.jets import (
    LaurentJet,
    constant_jet,
    gamma_jet,
    jet_exp,
    jet_inv,
    jet_sum,
    linear_jet,
    pochhammer_jet,
    pochhammer_jets,
    rgamma_jet,
)
from hypergeo.special import gamma
from tests.helpers import close


def _same(x: LaurentJet, y: LaurentJet, tol) -> bool:
    if x.valuation != y.valuation or x.order != y.order:
        return False
    return all(close(a, b, tol * max(1, abs(b))) for a, b in zip(x.coeffs, y.coeffs))


def test_product_of_jets(prec):
    x = LaurentJet(0, (1, 2, 0), prec)
    y = LaurentJet(0, (3, 1, 0), prec)
    assert (x * y).coeffs == tuple(prec.complex(c) for c in (3, 7, 2))


def test_shift_and_scale(prec):
    x = LaurentJet(0, (1, 2), prec).shift(-1).scale(3)
    assert x.valuation == -1
    assert x.coeffs == (prec.complex(3), prec.complex(6))
    assert x.coefficient(-2) == 0
    with pytest.raises(DomainError):
        x.coefficient(1)
    assert LaurentJet(0, (0, 0, 5), prec).normalized().valuation == 2


def test_product_adds_valuations(prec):
    x = LaurentJet(-1, (1, 1), prec)
    y = LaurentJet(1, (2, 0), prec)
    out = x * y
    assert out.valuation == 0
    assert out.coeffs == (prec.complex(2), prec.complex(2))


def test_add_aligns_valuations(prec):
    out = LaurentJet(-1, (1, 0, 0), prec) + constant_jet(5, 2, prec)
    assert out.valuation == -1
    assert out.coefficient(0) == 5
    assert out.top == 1


def test_coefficient_beyond_order(prec):
    with pytest.raises(DomainError):
        constant_jet(1, 2, prec).coefficient(2)
    assert constant_jet(1, 2, prec).coefficient(-3) == 0


def test_empty_jet_rejected(prec):
    with pytest.raises(DomainError):
        LaurentJet(0, (), prec)


def test_exp(prec):
    out = jet_exp(LaurentJet(0, (0, 2, 0), prec))
    assert out.coeffs == tuple(prec.complex(c) for c in (1, 2, 2))


def test_exp_of_pole_part(prec):
    with pytest.raises(DomainError):
        jet_exp(LaurentJet(-1, (1, 0, 0), prec))


def test_inverse(prec):
    out = jet_inv(linear_jet(2, 1, 3, prec))
    want = (Fraction(1, 2), Fraction(-1, 4), Fraction(1, 8))
    assert out.valuation == 0
    assert all(close(a, prec.real(b), 10 * prec.eps()) for a, b in zip(out.coeffs, want))


def test_inverse_of_zero(prec):
    with pytest.raises(DomainError):
        jet_inv(LaurentJet(0, (0, 0), prec))


def test_linear_jet_at_zero_has_valuation_one(prec):
    j = linear_jet(0, 3, 2, prec)
    assert j.valuation == 1
    assert j.coefficient(1) == 3


def test_gamma_jet_regular(gctx, prec):
    ctx = prec.ctx
    g = gctx.euler
    j = gamma_jet(1, 1, 3, gctx)
    want = (1, -g, g ** 2 / 2 + ctx.pi ** 2 / 12)
    assert j.valuation == 0
    assert all(close(a, b, 10 * prec.eps()) for a, b in zip(j.coeffs, want))


def test_gamma_jet_at_pole(gctx, prec):
    ctx = prec.ctx
    g = gctx.euler
    j = gamma_jet(0, 1, 3, gctx)
    want = (1, -g, g ** 2 / 2 + ctx.pi ** 2 / 12)
    assert j.valuation == -1
    assert all(close(a, b, 10 * prec.eps()) for a, b in zip(j.coeffs, want))


def test_gamma_jet_pole_without_direction(gctx):
    with pytest.raises(DomainError):
        gamma_jet(-2, 0, 3, gctx)


def test_functional_equation_regular(gctx, prec):
    z = Fraction(1, 3)
    lhs = gamma_jet(z + 1, 1, 4, gctx)
    rhs = linear_jet(prec.complex(z), 1, 4, prec) * gamma_jet(z, 1, 4, gctx)
    assert _same(lhs, rhs, 100 * prec.eps())


def test_functional_equation_at_pole(gctx, prec):
    # Gamma(-1 + eps) = Gamma(eps) / (-1 + eps)
    lhs = gamma_jet(-1, 1, 3, gctx)
    rhs = gamma_jet(0, 1, 3, gctx) * jet_inv(linear_jet(-1, 1, 3, prec))
    assert lhs.valuation == -1
    assert close(lhs.coeffs[0], -1, 10 * prec.eps())
    assert _same(lhs, rhs, 100 * prec.eps())


def test_gamma_jet_matches_gamma_near_point(gctx, prec):
    eps = Fraction(1, 10 ** 10)
    z = Fraction(1, 3)
    j = gamma_jet(z, 1, 6, gctx)
    want = gamma(prec.real(z) + prec.real(eps), gctx)
    assert close(j.evaluate(eps), want, 1000 * prec.eps())


def test_gamma_jet_direction_scales(gctx, prec):
    # Gamma(z + 2 eps): k-th coefficient picks up 2**k
    a = gamma_jet(Fraction(5, 2), 1, 4, gctx)
    b = gamma_jet(Fraction(5, 2), 2, 4, gctx)
    for k in range(4):
        assert close(b.coeffs[k], 2 ** k * a.coeffs[k], 100 * prec.eps())


def test_rgamma_jet_at_pole(gctx, prec):
    j = rgamma_jet(0, 1, 3, gctx)
    assert j.valuation == 1
    assert close(j.coeffs[0], 1, 10 * prec.eps())
    assert close(j.coeffs[1], gctx.euler, 10 * prec.eps())


def test_rgamma_jet_without_direction(gctx, prec):
    j = rgamma_jet(-2, 0, 2, gctx)
    assert j.is_zero()


def test_pochhammer_jet(prec):
    j = pochhammer_jet(1, 1, 3, 2, prec)
    assert j.coeffs == (prec.complex(6), prec.complex(11))


def test_pochhammer_chain(prec):
    chain = pochhammer_jets(1, 1, 3, 2, prec)
    assert [tuple(j.coeffs) for j in chain] == [
        tuple(prec.complex(c) for c in pair) for pair in ((1, 0), (1, 1), (2, 3), (6, 11))
    ]


def test_jet_sum(prec):
    out = jet_sum([constant_jet(1, 2, prec), linear_jet(1, 1, 2, prec), linear_jet(0, 2, 2, prec)])
    assert out.valuation == 0
    assert out.coeffs == (prec.complex(2), prec.complex(3))
