"""
Gamma family at arbitrary precision.

The heavy lifting (argument shift + Stirling series with Bernoulli numbers,
reflection for Re z << 0) is mpmath's; this module pins the precision, the
pole handling and the constants the connection formulas need.
"""
import threading
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from hypergeo.core.errors import DomainError, PoleError
from hypergeo.numeric import BigComplex, BigReal, ComplexLike, Precision

_CONTEXTS: Dict[int, "GammaContext"] = {}
_CONTEXTS_LOCK = threading.Lock()


@dataclass
class GammaContext:
    prec: Precision
    _constants: Dict[str, Any] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @classmethod
    def at(cls, prec: Precision) -> "GammaContext":
        """Shared context per precision (constants computed once)."""
        with _CONTEXTS_LOCK:
            gctx = _CONTEXTS.get(prec.bits)
            if gctx is None:
                gctx = cls(prec)
                _CONTEXTS[prec.bits] = gctx
            return gctx

    def with_guard(self, bits: int) -> "GammaContext":
        return GammaContext.at(self.prec.with_guard(bits))

    @property
    def euler(self) -> BigReal:
        """Euler's constant gamma = -psi(1)."""
        value = self._constants.get("euler")
        if value is None:
            # Misses may compute twice; both threads get the same digits
            value = +self.prec.ctx.euler
            with self._lock:
                value = self._constants.setdefault("euler", value)
        return value


def pole_index(z: ComplexLike, prec: Precision) -> Optional[int]:
    """Returns -n if z is the Gamma pole -n, else None."""
    w = prec.complex(z)
    if w.imag == 0 and prec.ctx.isnpint(w.real):
        return int(w.real)
    return None


def log_gamma(z: ComplexLike, ctx: GammaContext) -> BigComplex:
    n = pole_index(z, ctx.prec)
    if n is not None:
        raise PoleError(n)
    return ctx.prec.ctx.loggamma(ctx.prec.complex(z))


def gamma(z: ComplexLike, ctx: GammaContext) -> BigComplex:
    n = pole_index(z, ctx.prec)
    if n is not None:
        raise PoleError(n)
    return ctx.prec.ctx.gamma(ctx.prec.complex(z))


def rgamma(z: ComplexLike, ctx: GammaContext) -> BigComplex:
    """1/Gamma(z); exactly 0 at the poles."""
    mp = ctx.prec.ctx
    if pole_index(z, ctx.prec) is not None:
        return mp.mpc(0)
    return mp.rgamma(ctx.prec.complex(z))


def polygamma(n: int, z: ComplexLike, ctx: GammaContext) -> BigComplex:
    if n < 0:
        raise DomainError("polygamma order must be >= 0", details={"n": n})
    pole = pole_index(z, ctx.prec)
    if pole is not None:
        raise PoleError(pole)
    return ctx.prec.ctx.psi(n, ctx.prec.complex(z))
