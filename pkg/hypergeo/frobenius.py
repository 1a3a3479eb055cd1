"""
Log-series solutions at z = infinity for the pFq-1 operator

    P(theta) - z Q(theta),   P = theta prod_j (theta + b_j - 1),   Q = prod_k (theta + a_k)

in the basis phi_{i,j}(z) = (-z)^(-alpha) z^(-i) log(-z)^j, on which

    theta phi_{i,j} = -(alpha + i) phi_{i,j} + j phi_{i,j-1},   z phi_{i,j} = phi_{i-1,j}.

Coefficients are exact Fractions when no precision is given, otherwise mpc.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, List, Optional, Sequence, Tuple

from hypergeo.core.errors import DomainError, ParameterError, ResonanceError
from hypergeo.numeric import BigComplex, BigReal, ComplexLike, Precision, principal_log, principal_pow
from hypergeo.series import HyperParams

logger = logging.getLogger("hypergeo")

Poly = Tuple[Fraction, ...]


# -------------------------
# Exact polynomials in theta (ascending coefficients)
# -------------------------

def poly_from_shifts(shifts: Sequence[Fraction]) -> Poly:
    """prod (theta + s)."""
    out: List[Fraction] = [Fraction(1)]
    for s in shifts:
        nxt = [Fraction(0)] * (len(out) + 1)
        for k, c in enumerate(out):
            nxt[k] += c * s
            nxt[k + 1] += c
        out = nxt
    return tuple(out)


def taylor_at(poly: Poly, x: Fraction) -> Poly:
    """Coefficients of poly(x + t) in t, i.e. poly^(m)(x)/m!."""
    coeffs = list(poly)
    n = len(coeffs)
    # Horner repetido (desplazamiento de Taylor)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            coeffs[k] += x * coeffs[k + 1]
    return tuple(coeffs)


@dataclass(frozen=True)
class ODEPolys:
    P: Poly
    Q: Poly

    @property
    def degree(self) -> int:
        return len(self.Q) - 1

    def p_taylor(self, x: Fraction) -> Poly:
        return taylor_at(self.P, x)

    def q_taylor(self, x: Fraction) -> Poly:
        return taylor_at(self.Q, x)


def build_ode_polys(params: HyperParams) -> ODEPolys:
    P = poly_from_shifts([Fraction(0)] + [b - 1 for b in params.lower])
    Q = poly_from_shifts(list(params.upper))
    return ODEPolys(P=P, Q=Q)


# -------------------------
# LogSeries
# -------------------------

@dataclass(frozen=True)
class LogSeries:
    alpha: Fraction
    logdeg: int
    coeffs: Tuple[Tuple[Any, ...], ...]
    prec: Optional[Precision] = None

    def __post_init__(self):
        if self.logdeg < 1:
            raise ParameterError("logdeg must be >= 1")
        if not self.coeffs or any(len(layer) != self.logdeg for layer in self.coeffs):
            raise ParameterError("every layer needs logdeg coefficients")

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        return not any(c for layer in self.coeffs for c in layer)

    def with_coefficient(self, i: int, j: int, value: Any) -> "LogSeries":
        layers = [list(layer) for layer in self.coeffs]
        layers[i][j] = value
        return LogSeries(self.alpha, self.logdeg, tuple(tuple(l) for l in layers), self.prec)

    def truncated(self, N: int) -> "LogSeries":
        return LogSeries(self.alpha, self.logdeg, self.coeffs[: N + 1], self.prec)

    def sum_at(self, z: ComplexLike, prec: Optional[Precision] = None) -> Tuple[BigComplex, BigReal]:
        """(value at z, magnitude of the last layer's contribution)."""
        prec = prec or self.prec
        if prec is None:
            raise DomainError("exact series need a precision to be evaluated")
        return _sum_layers(self.alpha, self.coeffs, 0, z, prec)

    def evaluate(self, z: ComplexLike, prec: Optional[Precision] = None) -> BigComplex:
        return self.sum_at(z, prec)[0]


def _sum_layers(
    alpha: Fraction,
    layers: Sequence[Sequence[Any]],
    first: int,
    z: ComplexLike,
    prec: Precision,
) -> Tuple[BigComplex, BigReal]:
    ctx = prec.ctx
    w = prec.complex(z)
    if not w:
        raise DomainError("log-series at infinity cannot be evaluated at z = 0")

    L = principal_log(-w, prec)
    head = principal_pow(-w, -prec.real(alpha), prec)
    inv = 1 / w
    power = ctx.power(w, -first) if first else ctx.mpc(1)

    total = ctx.mpc(0)
    last = ctx.mpc(0)
    for layer in layers:
        inner = ctx.mpc(0)
        for c in reversed(layer):
            inner = inner * L + prec.complex(c)
        last = power * inner
        total += last
        power *= inv
    return head * total, abs(head * last)


def _lift_for(prec: Optional[Precision]) -> Callable[[Fraction], Any]:
    if prec is None:
        return lambda q: q
    return prec.real


def _zero_for(prec: Optional[Precision]) -> Any:
    return Fraction(0) if prec is None else prec.ctx.mpc(0)


def _value_for(prec: Optional[Precision], c: Any) -> Any:
    return Fraction(c) if prec is None else prec.complex(c)


def _act(taylor: Poly, layer: Sequence[Any], lift: Callable[[Fraction], Any], zero: Any) -> List[Any]:
    """Image of one layer under R(theta), given the Taylor coefficients of R at -(alpha + i)."""
    q = len(layer)
    out = []
    for j in range(q):
        acc = zero
        for m in range(q - j):
            if m >= len(taylor) or not taylor[m]:
                continue
            acc = acc + lift(taylor[m] * math.perm(j + m, m)) * layer[j + m]
        out.append(acc)
    return out


# -------------------------
# Recurrence
# -------------------------

def extend_coefficients(
    ode: ODEPolys,
    alpha: Fraction,
    q: int,
    c0: Sequence[Any],
    N: int,
    prec: Optional[Precision] = None,
) -> LogSeries:
    """
    Fills c_j^i for i = 1..N from c_j^0:

        sum_m Q^(m)(-alpha-i)/m! (j+m)!/j! c_{j+m}^i
            = sum_m P^(m)(-alpha-i+1)/m! (j+m)!/j! c_{j+m}^{i-1}

    solved from j = q-1 down to 0. `prec=None` keeps everything exact.
    """
    alpha = Fraction(alpha)
    if len(c0) != q:
        raise ParameterError("c0 must have one entry per log power", details={"q": q, "len": len(c0)})
    if N < 0:
        raise ParameterError("N must be >= 0")

    indicial = ode.q_taylor(-alpha)
    if any(indicial[m] != 0 for m in range(min(q, len(indicial)))):
        raise ParameterError(
            "-alpha is not a root of Q with the requested multiplicity",
            details={"alpha": str(alpha), "q": q},
        )

    wp = prec.with_guard(10 * q) if prec is not None else None
    lift = _lift_for(wp)
    zero = _zero_for(wp)

    layers: List[Tuple[Any, ...]] = [tuple(_value_for(wp, c) for c in c0)]
    for i in range(1, N + 1):
        x = -alpha - i
        qt = ode.q_taylor(x)
        if qt[0] == 0:
            raise ResonanceError(
                "Q(-alpha-i) = 0: integer difference between upper parameters",
                details={"alpha": str(alpha), "i": i},
            )
        rhs = _act(ode.p_taylor(x + 1), layers[-1], lift, zero)

        cur: List[Any] = [zero] * q
        pivot = lift(qt[0])
        for j in range(q - 1, -1, -1):
            acc = rhs[j]
            for m in range(1, q - j):
                if m < len(qt) and qt[m]:
                    acc = acc - lift(qt[m] * math.perm(j + m, m)) * cur[j + m]
            cur[j] = acc / pivot
        layers.append(tuple(cur))

    return LogSeries(alpha, q, tuple(layers), wp)


def apply_theta(s: LogSeries) -> LogSeries:
    lift = _lift_for(s.prec)
    zero = _zero_for(s.prec)
    q = s.logdeg
    layers = []
    for i, layer in enumerate(s.coeffs):
        factor = lift(-(s.alpha + i))
        layers.append(
            tuple(
                factor * layer[j] + ((j + 1) * layer[j + 1] if j + 1 < q else zero)
                for j in range(q)
            )
        )
    return LogSeries(s.alpha, q, tuple(layers), s.prec)


def contiguity_raise(s: LogSeries, a: Fraction) -> LogSeries:
    """(theta + a)/a: expansion of F(..., a+1, ...) from that of F(..., a, ...)."""
    a = Fraction(a)
    if a == 0:
        raise DomainError("contiguity raise needs a nonzero parameter")
    lift = _lift_for(s.prec)
    t = apply_theta(s)
    inv = lift(1 / a)
    av = lift(a)
    layers = tuple(
        tuple((tc + av * sc) * inv for tc, sc in zip(tl, sl))
        for tl, sl in zip(t.coeffs, s.coeffs)
    )
    return LogSeries(s.alpha, s.logdeg, layers, s.prec)


def residual_layers(ode: ODEPolys, s: LogSeries) -> List[Tuple[Any, ...]]:
    """Coefficients of [P(theta) - z Q(theta)] s on layers i = -1..N."""
    lift = _lift_for(s.prec)
    zero = _zero_for(s.prec)
    q = s.logdeg
    empty = tuple([zero] * q)
    layers = list(s.coeffs)

    out = []
    for k in range(-1, s.N + 1):
        here = layers[k] if k >= 0 else empty
        nxt = layers[k + 1] if k + 1 <= s.N else empty
        x = -s.alpha - k
        p_part = _act(ode.p_taylor(x), here, lift, zero)
        q_part = _act(ode.q_taylor(x - 1), nxt, lift, zero)
        out.append(tuple(a - b for a, b in zip(p_part, q_part)))
    return out


def ode_residual(ode: ODEPolys, s: LogSeries, z: ComplexLike, prec: Precision) -> BigReal:
    w = prec.complex(z)
    if abs(w) <= 1:
        raise DomainError("residual is evaluated outside the unit disk", details={"abs_z": float(abs(w))})
    if s.is_zero():
        return prec.ctx.mpf(0)
    value, _ = _sum_layers(s.alpha, residual_layers(ode, s), -1, w, prec)
    return abs(value)


def leading_magnitude(s: LogSeries, z: ComplexLike, prec: Precision) -> BigReal:
    """|(-z)^(-alpha) sum_j c_j^0 log(-z)^j|, the scale residuals are compared against."""
    value, _ = _sum_layers(s.alpha, s.coeffs[:1], 0, z, prec)
    return abs(value)
