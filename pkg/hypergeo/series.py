"""
Taylor evaluation of pFq-1 inside the unit disk, plus exact binary splitting
for Gaussian-rational arguments.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from hypergeo.core.errors import DomainError, ParameterError, UnsupportedInputError
from hypergeo.numeric import (
    BigComplex,
    BigReal,
    ComplexLike,
    GaussianRational,
    Precision,
    as_rational,
    parse_rational_list,
)

logger = logging.getLogger("hypergeo")

METHODS = ("taylor", "binary_splitting", "connection", "euler_integral")


@dataclass(frozen=True)
class HyperParams:
    upper: Tuple[Fraction, ...]
    lower: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(as_rational(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(as_rational(b) for b in self.lower))

        if not self.upper:
            raise ParameterError("at least one upper parameter is required")
        if len(self.upper) != len(self.lower) + 1:
            raise ParameterError(
                "pFq-1 needs exactly one more upper than lower parameter",
                details={"upper": len(self.upper), "lower": len(self.lower)},
            )
        bad = [str(b) for b in self.lower if b.denominator == 1 and b <= 0]
        if bad:
            raise ParameterError("lower parameter is a nonpositive integer", details={"lower": bad})

    @classmethod
    def parse(cls, upper: str, lower: str = "") -> "HyperParams":
        return cls(tuple(parse_rational_list(upper)), tuple(parse_rational_list(lower)))

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def growth(self) -> float:
        """Exponent s in |t_k| ~ k^s |z|^k."""
        return float(sum(self.upper) - sum(self.lower) - 1)

    def with_upper(self, upper: Iterable[Fraction]) -> "HyperParams":
        return HyperParams(tuple(upper), self.lower)

    def __str__(self) -> str:
        up = ",".join(str(a) for a in self.upper)
        low = ",".join(str(b) for b in self.lower)
        return f"{self.p}F{self.p - 1}({up};{low})"


@dataclass(frozen=True)
class TruncationPolicy:
    """max_terms counts the summed terms k = 0 .. max_terms - 1."""

    max_terms: int
    target_digits: int
    stop_early: bool = True

    def __post_init__(self):
        if self.max_terms < 1:
            raise ParameterError("max_terms must be >= 1", details={"max_terms": self.max_terms})

    @property
    def last_index(self) -> int:
        return self.max_terms - 1

    @classmethod
    def from_terms(cls, terms: int) -> "TruncationPolicy":
        """Fixed truncation (k = 0..terms), digits = terms + 10."""
        if terms < 0:
            raise ParameterError("terms must be >= 0", details={"terms": terms})
        return cls(max_terms=terms + 1, target_digits=terms + 10, stop_early=False)

    @classmethod
    def automatic(cls, digits: int, radius: float, cap: int = 100000, growth: float = 0.0) -> "TruncationPolicy":
        """
        Smallest N with |z|^N N^growth / (1 - |z|) below 10^-(digits + 2),
        plus 10. growth is the exponent of the k^growth factor carried by the
        terms (HyperParams.growth); the stop rule still ends the sum early.
        """
        if radius <= 0:
            return cls(max_terms=1, target_digits=digits)
        if radius >= 1:
            raise DomainError("series diverges for |z| >= 1", details={"abs_z": radius})
        rate = -math.log10(radius)
        need = digits + 2 - math.log10(1 - radius)
        n = math.ceil(need / rate)
        if growth > 0:
            for _ in range(4):
                n = math.ceil((need + growth * math.log10(n)) / rate)
        return cls(max_terms=max(1, min(n + 11, cap)), target_digits=digits)


@dataclass(frozen=True)
class EvalResult:
    value: BigComplex
    err_estimate: BigReal
    terms_used: int
    method: str
    warnings: Tuple[str, ...] = ()
    phases: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag: {self.method}")


def pochhammer(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    a = as_rational(a)
    for t in range(k):
        out *= a + t
    return out


def term_ratio(params: HyperParams, k: int) -> Fraction:
    """t_{k+1} / (z t_k)."""
    num = Fraction(1)
    for a in params.upper:
        num *= a + k
    den = Fraction(k + 1)
    for b in params.lower:
        den *= b + k
    return num / den


# -------------------------
# Direct summation
# -------------------------

def taylor_eval(
    params: HyperParams,
    z: ComplexLike,
    prec: Precision,
    policy: TruncationPolicy,
) -> EvalResult:
    ctx = prec.ctx
    w = prec.complex(z)
    r = abs(w)
    if r >= 1:
        raise DomainError("series diverges for |z| >= 1", details={"abs_z": float(r)})

    total = ctx.mpc(1)
    if not w or policy.max_terms == 1:
        return EvalResult(total, ctx.mpf(0), 0, "taylor")

    threshold = ctx.power(10, -(policy.target_digits + 2))
    term = ctx.mpc(1)
    small = 0
    used = 0
    terminated = False

    for k in range(policy.last_index):
        ratio = term_ratio(params, k)
        if ratio == 0:
            terminated = True
            break
        term = term * w * prec.real(ratio)
        total += term
        used = k + 1

        if policy.stop_early:
            if abs(term) <= threshold * abs(total):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0

    if terminated:
        err = ctx.mpf(0)
    else:
        bound = r * abs(prec.real(term_ratio(params, used)))
        err = abs(term) / (1 - bound) if bound < 1 else ctx.inf

    logger.debug("taylor_stop", extra={"terms": used, "terminated": terminated})
    return EvalResult(total, err, used, "taylor")


# -------------------------
# Binary splitting (exact)
# -------------------------

Gauss = Tuple[int, int]


def _gmul(x: Gauss, y: Gauss) -> Gauss:
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gadd(x: Gauss, y: Gauss) -> Gauss:
    return (x[0] + y[0], x[1] + y[1])


def _gscale(x: Gauss, n: int) -> Gauss:
    return (x[0] * n, x[1] * n)


def _as_gaussian(z: ComplexLike) -> GaussianRational:
    if isinstance(z, GaussianRational):
        return GaussianRational(Fraction(z.re), Fraction(z.im))
    if isinstance(z, (Fraction, int)):
        return GaussianRational(Fraction(z))
    raise UnsupportedInputError(
        "binary splitting needs an exact (Gaussian rational) argument",
        details={"type": type(z).__name__},
    )


def _lcm(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _binary_split(params: HyperParams, z: GaussianRational, terms: int) -> Tuple[GaussianRational, GaussianRational]:
    """Returns (partial sum k=0..terms, last term t_terms), both exact."""
    one = GaussianRational(Fraction(1))
    if terms <= 0:
        return one, one

    zd = _lcm([z.re.denominator, z.im.denominator])
    zn: Gauss = (z.re.numerator * (zd // z.re.denominator), z.im.numerator * (zd // z.im.denominator))

    up_den = 1
    for a in params.upper:
        up_den *= a.denominator
    low_den = 1
    for b in params.lower:
        low_den *= b.denominator

    def p(k: int) -> Gauss:
        n = low_den
        for a in params.upper:
            n *= a.numerator + a.denominator * k
        return _gscale(zn, n)

    def q(k: int) -> int:
        d = zd * up_den * (k + 1)
        for b in params.lower:
            d *= b.numerator + b.denominator * k
        return d

    def split(a: int, b: int) -> Tuple[Gauss, int, Gauss]:
        if b - a == 1:
            pa = p(a)
            return pa, q(a), pa
        mid = (a + b) // 2
        p1, q1, t1 = split(a, mid)
        p2, q2, t2 = split(mid, b)
        return _gmul(p1, p2), q1 * q2, _gadd(_gscale(t1, q2), _gmul(p1, t2))

    P, Q, T = split(0, terms)
    total = GaussianRational(1 + Fraction(T[0], Q), Fraction(T[1], Q))
    last = GaussianRational(Fraction(P[0], Q), Fraction(P[1], Q))
    return total, last


def binary_splitting_eval(params: HyperParams, z: ComplexLike, terms: int) -> GaussianRational:
    """Exact partial sum over k = 0..terms."""
    return _binary_split(params, _as_gaussian(z), terms)[0]


def binary_splitting_result(
    params: HyperParams,
    z: ComplexLike,
    prec: Precision,
    terms: int,
) -> EvalResult:
    zq = _as_gaussian(z)
    if zq.abs2() >= 1:
        raise DomainError("series diverges for |z| >= 1")
    ctx = prec.ctx

    total, last = _binary_split(params, zq, terms)
    r = abs(prec.complex(zq))
    bound = r * abs(prec.real(term_ratio(params, terms)))
    tail = abs(prec.complex(last))
    if not tail:
        err = ctx.mpf(0)
    else:
        err = tail / (1 - bound) if bound < 1 else ctx.inf
    return EvalResult(prec.complex(total), err, max(terms, 0), "binary_splitting")
