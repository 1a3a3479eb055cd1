"""
Truncated Laurent series in a formal parameter eps ("jets").

A jet is sum_k coeffs[k] * eps**(valuation + k), k < order. Parameter
derivatives and eps -> 0 limits of Gamma ratios become coefficient reads.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Sequence, Tuple, Union

from hypergeo.core.errors import DomainError
from hypergeo.numeric import BigComplex, ComplexLike, Precision
from hypergeo.special import GammaContext, gamma, pole_index, polygamma, rgamma


def jet_precision(prec: Precision, order: int) -> Precision:
    return prec.with_guard(32 + 10 * order)


@dataclass(frozen=True)
class LaurentJet:
    valuation: int
    coeffs: Tuple[Any, ...]
    prec: Precision

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("jet order must be >= 1")
        object.__setattr__(self, "coeffs", tuple(self.prec.complex(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def top(self) -> int:
        return self.valuation + self.order - 1

    def coefficient(self, power: int) -> BigComplex:
        if power < self.valuation:
            return self.prec.ctx.mpc(0)
        if power > self.top:
            raise DomainError(
                "coefficient beyond truncation order",
                details={"power": power, "top": self.top},
            )
        return self.coeffs[power - self.valuation]

    def normalized(self) -> "LaurentJet":
        """Strips exactly-zero leading coefficients (keeps at least one)."""
        k = 0
        while k < self.order - 1 and not self.coeffs[k]:
            k += 1
        if k == 0:
            return self
        return LaurentJet(self.valuation + k, self.coeffs[k:], self.prec)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scale(self, c: ComplexLike) -> "LaurentJet":
        f = self.prec.complex(c)
        return LaurentJet(self.valuation, tuple(f * a for a in self.coeffs), self.prec)

    def shift(self, k: int) -> "LaurentJet":
        """Multiplication by eps**k."""
        return LaurentJet(self.valuation + k, self.coeffs, self.prec)

    def evaluate(self, eps: ComplexLike) -> BigComplex:
        ctx = self.prec.ctx
        e = self.prec.complex(eps)
        return ctx.fsum(a * ctx.power(e, self.valuation + k) for k, a in enumerate(self.coeffs))

    def __mul__(self, other: "LaurentJet") -> "LaurentJet":
        return jet_mul(self, other)

    def __add__(self, other: "LaurentJet") -> "LaurentJet":
        return jet_add(self, other)

    def __neg__(self) -> "LaurentJet":
        return self.scale(-1)

    def __sub__(self, other: "LaurentJet") -> "LaurentJet":
        return jet_add(self, -other)


def _finer(x: LaurentJet, y: LaurentJet) -> Precision:
    return x.prec if x.prec.bits >= y.prec.bits else y.prec


def constant_jet(c: ComplexLike, order: int, prec: Precision) -> LaurentJet:
    ctx = prec.ctx
    return LaurentJet(0, (prec.complex(c),) + (ctx.mpc(0),) * (order - 1), prec)


def linear_jet(c0: ComplexLike, a: Union[Fraction, int], order: int, prec: Precision) -> LaurentJet:
    """c0 + a*eps; valuation 1 when c0 == 0."""
    ctx = prec.ctx
    w = prec.complex(c0)
    slope = prec.complex(Fraction(a))
    if not w:
        return LaurentJet(1, (slope,) + (ctx.mpc(0),) * (order - 1), prec)
    rest = (slope,) + (ctx.mpc(0),) * (order - 2) if order > 1 else ()
    return LaurentJet(0, (w,) + rest, prec)


def jet_mul(x: LaurentJet, y: LaurentJet) -> LaurentJet:
    prec = _finer(x, y)
    ctx = prec.ctx
    n = min(x.order, y.order)
    a, b = x.coeffs, y.coeffs
    coeffs = tuple(ctx.fdot(a[: k + 1], b[k::-1]) for k in range(n))
    return LaurentJet(x.valuation + y.valuation, coeffs, prec)


def jet_add(x: LaurentJet, y: LaurentJet) -> LaurentJet:
    prec = _finer(x, y)
    low = min(x.valuation, y.valuation)
    high = min(x.top, y.top)
    if high < low:
        raise DomainError("jets do not overlap", details={"low": low, "high": high})
    return LaurentJet(low, tuple(x.coefficient(p) + y.coefficient(p) for p in range(low, high + 1)), prec)


def jet_exp(x: LaurentJet) -> LaurentJet:
    """exp of a jet without pole part; result truncated at x.top."""
    ctx = x.prec.ctx
    for p in range(x.valuation, 0):
        if x.coefficient(p):
            raise DomainError("exp of a jet with a pole part", details={"power": p})
    if x.top < 0:
        raise DomainError("jet has no constant term within its order")

    a = [x.coefficient(p) for p in range(0, x.top + 1)]
    head = ctx.exp(a[0])
    b = [ctx.mpc(1)]
    for n in range(1, len(a)):
        b.append(ctx.fsum(k * a[k] * b[n - k] for k in range(1, n + 1)) / n)
    return LaurentJet(0, tuple(head * c for c in b), x.prec)


def jet_inv(x: LaurentJet) -> LaurentJet:
    xn = x.normalized()
    if xn.is_zero():
        raise DomainError("reciprocal of a zero jet")
    ctx = xn.prec.ctx
    a = xn.coeffs
    inv0 = 1 / a[0]
    b = [inv0]
    for n in range(1, xn.order):
        b.append(-inv0 * ctx.fdot(a[1 : n + 1], b[n - 1 :: -1]))
    return LaurentJet(-xn.valuation, tuple(b), xn.prec)


# -------------------------
# Gamma jets
# -------------------------

def _regular_gamma_jet(w: BigComplex, a: Fraction, order: int, g: GammaContext) -> LaurentJet:
    prec = g.prec
    head = gamma(w, g)
    if a == 0 or order == 1:
        return constant_jet(head, order, prec)

    ar = prec.real(a)
    log_part = [prec.ctx.mpc(0)]
    for k in range(1, order):
        log_part.append(polygamma(k - 1, w, g) * ar ** k / math.factorial(k))
    return jet_exp(LaurentJet(0, tuple(log_part), prec)).scale(head)


def gamma_jet(z0: ComplexLike, a: Union[Fraction, int], order: int, ctx: GammaContext) -> LaurentJet:
    """Gamma(z0 + a*eps) to `order` coefficients; valuation -1 at a pole."""
    a = Fraction(a)
    g = GammaContext.at(jet_precision(ctx.prec, order))
    prec = g.prec
    w = prec.complex(z0)

    pole = pole_index(w, prec)
    if pole is None:
        return _regular_gamma_jet(w, a, order, g)
    if a == 0:
        raise DomainError("gamma_jet at a pole needs a nonzero direction", details={"pole": pole})

    # Gamma(z) = Gamma(z+m+1) / (z (z+1) ... (z+m)) con z = -m + a*eps
    m = -pole
    num = _regular_gamma_jet(w + m + 1, a, order, g)
    den = constant_jet(1, order, prec)
    for t in range(m + 1):
        den = den * linear_jet(w + t, a, order, prec)
    return num * jet_inv(den)


def rgamma_jet(z0: ComplexLike, a: Union[Fraction, int], order: int, ctx: GammaContext) -> LaurentJet:
    """1/Gamma(z0 + a*eps); valuation +1 at a pole of Gamma."""
    a = Fraction(a)
    if a == 0:
        g = GammaContext.at(jet_precision(ctx.prec, order))
        return constant_jet(rgamma(z0, g), order, g.prec)
    return jet_inv(gamma_jet(z0, a, order, ctx))


def pochhammer_jets(
    x0: ComplexLike, a: Union[Fraction, int], n: int, order: int, prec: Precision
) -> List[LaurentJet]:
    """(x0 + a*eps)_m for m = 0..n."""
    w = prec.complex(x0)
    out = [constant_jet(1, order, prec)]
    for t in range(n):
        out.append(out[-1] * linear_jet(w + t, a, order, prec))
    return out


def pochhammer_jet(
    x0: ComplexLike, a: Union[Fraction, int], m: int, order: int, prec: Precision
) -> LaurentJet:
    """(x0 + a*eps)_m."""
    return pochhammer_jets(x0, a, m, order, prec)[-1]


def jet_sum(jets: Sequence[LaurentJet]) -> LaurentJet:
    it = iter(jets)
    total = next(it)
    for j in it:
        total = total + j
    return total
