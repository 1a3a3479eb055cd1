"""
Independent checks: Euler's integral for 2F1 and the table of published values.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import List, Literal, Optional, Tuple

import mpmath

from hypergeo.core.errors import DomainError, NotFoundError, ParameterError
from hypergeo.numeric import (
    BigComplex,
    BigReal,
    ComplexLike,
    GaussianRational,
    Precision,
    as_rational,
    parse_complex,
)
from hypergeo.schemas import ReferenceRecord
from hypergeo.series import EvalResult, HyperParams
from hypergeo.special import GammaContext, gamma, rgamma

logger = logging.getLogger("hypergeo")

RULES = ("trapezoid", "double_exponential")


@dataclass(frozen=True)
class QuadratureSpec:
    rule: Literal["trapezoid", "double_exponential"]
    samples: int
    prec: Precision

    def __post_init__(self):
        if self.rule not in RULES:
            raise ParameterError("unknown quadrature rule", details={"rule": self.rule})
        if self.samples < 8:
            raise ParameterError("quadrature needs at least 8 samples", details={"samples": self.samples})

    @property
    def max_degree(self) -> int:
        """tanh-sinh level; each level doubles the node count."""
        return max(6, self.samples.bit_length() - 3)


# -------------------------
# Euler integral
# -------------------------

def _check_euler_domain(a: Fraction, c: Fraction, w: BigComplex) -> None:
    if not (c > a > 0):
        raise DomainError(
            "Euler integral needs Re c > Re a > 0",
            details={"a": str(a), "c": str(c)},
        )
    if w.imag == 0 and w.real >= 1:
        raise DomainError("Euler integral is undefined on the cut [1, inf)", details={"z": str(w)})


def euler_integral_2f1(
    a: Fraction, b: Fraction, c: Fraction, z: ComplexLike, spec: QuadratureSpec
) -> EvalResult:
    """
    G(c)/(G(a)G(c-a)) * int_0^1 t^(a-1) (1-t)^(c-a-1) (1-tz)^(-b) dt
    """
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    prec = spec.prec
    ctx = prec.ctx
    w = prec.complex(z)
    _check_euler_domain(a, c, w)

    g = GammaContext.at(prec)
    head = gamma(c, g) * rgamma(a, g) * rgamma(c - a, g)
    e1 = prec.real(a - 1)
    e2 = prec.real(c - a - 1)
    e3 = -prec.real(b)

    def integrand(t):
        return ctx.power(t, e1) * ctx.power(1 - t, e2) * ctx.power(1 - t * w, e3)

    if spec.rule == "double_exponential":
        value, err = _double_exponential(a, c, e3, w, spec)
    else:
        value, err = _trapezoid(integrand, spec.samples, prec)

    result = EvalResult(head * value, abs(head) * err, spec.samples, "euler_integral")
    logger.debug("euler_integral", extra={"rule": spec.rule, "samples": spec.samples, "err": float(result.err_estimate)})
    return result


def _double_exponential(a: Fraction, c: Fraction, e3: BigReal, w: BigComplex, spec: QuadratureSpec):
    """
    Splits [0, 1] at 1/2 and moves both endpoints to an origin: t = s^(1/a)
    on the lower half, 1 - t = v^(1/(c-a)) on the upper one. The Jacobians
    absorb t^(a-1) and (1-t)^(c-a-1), so both pieces are bounded at 0 and the
    mass the truncated node list skips next to an endpoint is negligible.
    """
    prec = spec.prec
    ctx = prec.ctx
    half = ctx.mpf(1) / 2
    ra = prec.real(a)
    rb = prec.real(c - a)

    def lower(s):
        t = ctx.power(s, 1 / ra)
        return ctx.power(1 - t, rb - 1) * ctx.power(1 - t * w, e3) / ra

    def upper(v):
        u = ctx.power(v, 1 / rb)
        return ctx.power(1 - u, ra - 1) * ctx.power(1 - (1 - u) * w, e3) / rb

    lower_pts = [ctx.mpf(0), ctx.power(half, ra)]
    upper_pts = [ctx.mpf(0), ctx.power(half, rb)]
    if w:
        # punto de |1 - tz| minimo
        t_star = w.real / abs(w) ** 2
        if 0 < t_star < half:
            lower_pts.insert(1, ctx.power(t_star, ra))
        elif half < t_star < 1:
            upper_pts.insert(1, ctx.power(1 - t_star, rb))

    v1, err1 = ctx.quad(lower, lower_pts, method="tanh-sinh", error=True, maxdegree=spec.max_degree)
    v2, err2 = ctx.quad(upper, upper_pts, method="tanh-sinh", error=True, maxdegree=spec.max_degree)
    return v1 + v2, err1 + err2


def _trapezoid_sum(f, n: int, prec: Precision) -> BigComplex:
    ctx = prec.ctx
    h = ctx.mpf(1) / n
    return h * ctx.fsum(f(k * h) for k in range(1, n))


def _trapezoid(f, n: int, prec: Precision) -> Tuple[BigComplex, BigReal]:
    """Interior nodes kh, k = 1..n-1 (endpoint terms dropped); error from the half-step rule."""
    full = _trapezoid_sum(f, n, prec)
    half = _trapezoid_sum(f, n // 2, prec)
    return full, abs(full - half)


# -------------------------
# Reference table
# -------------------------

@dataclass(frozen=True)
class ReferenceEntry:
    case: str
    params: HyperParams
    z: GaussianRational
    value_re: str
    value_im: str
    source: str
    published_digits: int
    normative: bool = True

    @property
    def decimals(self) -> int:
        """Decimal places published for the coarser of the two parts."""
        return min(_decimals(self.value_re), _decimals(self.value_im))

    def value(self, prec: Optional[Precision] = None) -> BigComplex:
        prec = prec or Precision.from_digits(self.published_digits + 5)
        return prec.ctx.mpc(prec.real(self.value_re), prec.real(self.value_im))

    def to_record(self) -> ReferenceRecord:
        return ReferenceRecord(
            case=self.case,
            upper=[str(a) for a in self.params.upper],
            lower=[str(b) for b in self.params.lower],
            z=str(self.z),
            value_re=self.value_re,
            value_im=self.value_im,
            source=self.source,
            digits=self.published_digits,
            normative=self.normative,
        )

    @classmethod
    def from_record(cls, rec: ReferenceRecord) -> "ReferenceEntry":
        return cls(
            case=rec.case,
            params=HyperParams(tuple(as_rational(a) for a in rec.upper), tuple(as_rational(b) for b in rec.lower)),
            z=parse_complex(rec.z),
            value_re=rec.value_re,
            value_im=rec.value_im,
            source=rec.source,
            published_digits=rec.digits,
            normative=rec.normative,
        )


def _decimals(text: str) -> int:
    return len(text.split(".", 1)[1]) if "." in text else 0


def _read_lines() -> List[str]:
    data = resources.files("hypergeo").joinpath("data/reference_values.jsonl")
    return [line for line in data.read_text(encoding="utf-8").splitlines() if line.strip()]


@lru_cache(maxsize=1)
def _table() -> Tuple[ReferenceEntry, ...]:
    return tuple(ReferenceEntry.from_record(ReferenceRecord.model_validate_json(line)) for line in _read_lines())


def reference_table() -> List[ReferenceEntry]:
    return list(_table())


def lookup(params: HyperParams, z: ComplexLike, source: str) -> ReferenceEntry:
    zq = parse_complex(z) if isinstance(z, str) else z
    for entry in _table():
        if entry.params == params and entry.z == zq and entry.source == source:
            return entry
    raise NotFoundError(
        "no published value for this case",
        details={"params": str(params), "z": str(zq), "source": source},
    )


def export_reference_table(path: str) -> int:
    """Writes the table as JSON lines; returns the record count."""
    entries = _table()
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(entry.to_record().model_dump_json() + "\n")
    return len(entries)


def significant_digits(value: BigComplex, reference: BigComplex) -> float:
    """-log10 of the relative difference (inf when identical)."""
    diff = abs(value - reference)
    scale = abs(reference)
    if not diff:
        return math.inf
    if not scale:
        return float(-mpmath.log10(diff))
    return float(-mpmath.log10(diff / scale))
