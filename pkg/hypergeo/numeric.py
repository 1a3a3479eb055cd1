"""
Multiprecision substrate.

Precision is always explicit: every operation takes a `Precision` and works in
an mpmath context that belongs to that precision (one context per bit size and
per thread, so nobody shares or mutates a global `mp.prec`).

Conventions
-----------
- Rationals are `fractions.Fraction`, exact complex rationals are `GaussianRational`.
- BigReal / BigComplex are mpmath `mpf` / `mpc` values.
- Branch: arg in (-pi, pi]. For real z > 1, log(-z) = ln z + i*pi.
"""
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Tuple, Union

from mpmath.ctx_mp import MPContext

from hypergeo.core.errors import DomainError, ParseError

LOG10_2 = math.log10(2)
MIN_BITS = 64

BigReal = Any
BigComplex = Any

# Contextos mpmath por hilo y por precision
_local = threading.local()


def _context_for(bits: int) -> MPContext:
    cache: Dict[int, MPContext] = getattr(_local, "contexts", None)
    if cache is None:
        cache = {}
        _local.contexts = cache
    ctx = cache.get(bits)
    if ctx is None:
        ctx = MPContext()
        ctx.prec = bits
        cache[bits] = ctx
    return ctx


class GaussianRational(NamedTuple):
    re: Fraction
    im: Fraction = Fraction(0)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


ComplexLike = Union[GaussianRational, Fraction, int, float, complex, BigReal, BigComplex]


@dataclass(frozen=True)
class Precision:
    bits: int

    def __post_init__(self):
        if self.bits < MIN_BITS:
            raise DomainError(
                f"Precision must be at least {MIN_BITS} bits",
                details={"bits": self.bits},
            )

    @classmethod
    def from_digits(cls, digits: int) -> "Precision":
        if digits < 1:
            raise DomainError("digits must be >= 1", details={"digits": digits})
        return cls(max(MIN_BITS, math.ceil(digits / LOG10_2)))

    @classmethod
    def for_terms(cls, terms: int) -> "Precision":
        """Decimal policy of the reference tables: terms + 10 digits."""
        return cls.from_digits(terms + 10)

    @property
    def digits(self) -> int:
        return math.floor(self.bits * LOG10_2)

    def with_guard(self, bits: int) -> "Precision":
        return Precision(self.bits + bits)

    @property
    def ctx(self) -> MPContext:
        return _context_for(self.bits)

    def real(self, x: Any) -> BigReal:
        ctx = self.ctx
        if isinstance(x, Fraction):
            return ctx.fdiv(x.numerator, x.denominator)
        if hasattr(x, "_mpc_") or isinstance(x, complex):
            raise TypeError("real() got a complex value")
        return ctx.mpf(x)

    def complex(self, x: ComplexLike) -> BigComplex:
        ctx = self.ctx
        if isinstance(x, GaussianRational):
            return ctx.mpc(self.real(x.re), self.real(x.im))
        if hasattr(x, "_mpc_") or isinstance(x, complex):
            return ctx.mpc(self.real(x.real), self.real(x.imag))
        return ctx.mpc(self.real(x))

    def eps(self) -> BigReal:
        return self.ctx.ldexp(self.ctx.mpf(1), -self.bits)


def as_rational(x: Union[Fraction, int, str]) -> Fraction:
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


# -------------------------
# Branch-fixed elementary functions
# -------------------------

def principal_log(z: ComplexLike, prec: Precision) -> BigComplex:
    w = prec.complex(z)
    if not w:
        raise DomainError("log(0) is undefined")
    return prec.ctx.log(w)


def principal_pow(base: ComplexLike, exponent: ComplexLike, prec: Precision) -> BigComplex:
    """exp(exponent * principal_log(base))."""
    ctx = prec.ctx
    b = prec.complex(base)
    e = prec.complex(exponent)
    if not b:
        if e.real <= 0:
            raise DomainError("0 raised to a power with Re <= 0", details={"exponent": str(e)})
        return ctx.mpc(0)
    return ctx.exp(e * ctx.log(b))


def round_to_digits(x: ComplexLike, digits: int) -> Tuple[str, str]:
    """
    Fixed-point strings for (re, im) with a shared number of decimals chosen so
    the larger part carries `digits` significant digits.
    """
    if digits < 1:
        raise DomainError("digits must be >= 1", details={"digits": digits})

    prec = Precision.from_digits(digits + 20)
    ctx = prec.ctx
    w = prec.complex(x)
    big = max(abs(w.real), abs(w.imag))

    if not big:
        decimals = digits - 1
    else:
        exponent = int(ctx.floor(ctx.log10(big)))
        decimals = digits - 1 - exponent
        # log10 puede errar por 1 cerca de potencias de 10
        scaled = abs(int(ctx.nint(big * ctx.power(10, decimals))))
        if scaled >= 10 ** digits:
            decimals -= 1
        elif scaled < 10 ** (digits - 1):
            decimals += 1

    return _fixed(w.real, decimals, ctx), _fixed(w.imag, decimals, ctx)


def _fixed(v: BigReal, decimals: int, ctx: MPContext) -> str:
    n = int(ctx.nint(v * ctx.power(10, decimals)))
    sign = "-" if n < 0 else ""
    n = abs(n)
    if decimals <= 0:
        return f"{sign}{n * 10 ** (-decimals)}"
    s = str(n).rjust(decimals + 1, "0")
    return f"{sign}{s[:-decimals]}.{s[-decimals:]}"


def format_complex(parts: Tuple[str, str]) -> str:
    re_s, im_s = parts
    if im_s.startswith("-"):
        return f"{re_s}-{im_s[1:]}i"
    return f"{re_s}+{im_s}i"


# -------------------------
# Parsing ("10/3", "1.3", "13+13i", "-5+i")
# -------------------------

_NUMBER = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?")


def _to_fraction(token: str, text: str, position: int) -> Fraction:
    if "/" in token:
        num, den = token.split("/", 1)
        if int(den) == 0:
            raise ParseError("zero denominator", text=text, position=position + len(num) + 1)
        return Fraction(num) / Fraction(den)
    return Fraction(token)


def parse_rational(text: str) -> Fraction:
    s = (text or "").strip()
    pos = 0
    sign = 1
    if s[:1] in ("+", "-"):
        sign = -1 if s[0] == "-" else 1
        pos = 1

    m = _NUMBER.match(s, pos)
    if not m:
        raise ParseError("expected a rational number", text=text, position=pos)
    if m.end() != len(s):
        raise ParseError("unexpected character", text=text, position=m.end())
    return sign * _to_fraction(m.group(0), text, pos)


def parse_rational_list(text: str) -> List[Fraction]:
    s = (text or "").strip()
    if not s:
        return []

    out: List[Fraction] = []
    offset = 0
    for chunk in s.split(","):
        try:
            out.append(parse_rational(chunk))
        except ParseError as exc:
            raise ParseError(exc.message, text=text, position=offset + (exc.position or 0)) from exc
        offset += len(chunk) + 1
    return out


def parse_complex(text: str) -> GaussianRational:
    """Whitespace-free "a+bi" / "a-bi" / "bi" / "a", parts decimal or rational."""
    s = text or ""
    if not s:
        raise ParseError("empty complex number", text=text, position=0)

    re_part = Fraction(0)
    im_part = Fraction(0)
    seen_real = seen_imag = False
    pos = 0

    while pos < len(s):
        start = pos
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        elif start > 0:
            raise ParseError("expected '+' or '-'", text=text, position=pos)

        m = _NUMBER.match(s, pos)
        value = Fraction(1)
        if m:
            value = _to_fraction(m.group(0), text, pos)
            pos = m.end()

        if pos < len(s) and s[pos] in "ij":
            if seen_imag:
                raise ParseError("duplicate imaginary part", text=text, position=pos)
            im_part = sign * value
            seen_imag = True
            pos += 1
            continue

        if not m:
            raise ParseError("expected a number", text=text, position=pos)
        if seen_real or seen_imag:
            raise ParseError("unexpected real part", text=text, position=start)
        re_part = sign * value
        seen_real = True

    return GaussianRational(re_part, im_part)
