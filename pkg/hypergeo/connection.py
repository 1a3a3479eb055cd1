"""
Connection formulas at infinity, generic and degenerate, and the evaluator
dispatch.

Generic parameters use the Gamma-ratio coefficients C_i of the classical
connection formula. A group of q equal upper parameters is handled by the
collinear perturbation a_i = a + o_i*eps (o_i = 0..q-1): the generic sum is
meromorphic in eps with a removable singularity at 0, so its eps^0 part is
the degenerate expansion. Only layer 0 is taken that way; the remaining
layers come from the ODE recurrence. Integer differences are collapsed to
the smallest member and restored with contiguity raises (experimental).
"""
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from hypergeo.core.config import Settings, get_settings
from hypergeo.core.errors import (
    AnnulusError,
    ConsistencyError,
    DegeneracyError,
    DomainError,
    ParameterError,
    UnsupportedDegeneracyError,
)
from hypergeo.frobenius import LogSeries, build_ode_polys, contiguity_raise, extend_coefficients
from hypergeo.jets import (
    LaurentJet,
    constant_jet,
    gamma_jet,
    jet_inv,
    jet_precision,
    jet_sum,
    pochhammer_jets,
    rgamma_jet,
)
from hypergeo.numeric import BigComplex, BigReal, ComplexLike, Precision, as_rational
from hypergeo.oracle import QuadratureSpec, euler_integral_2f1
from hypergeo.schemas import ExpansionDump, SeriesDump
from hypergeo.series import (
    EvalResult,
    HyperParams,
    TruncationPolicy,
    binary_splitting_result,
    taylor_eval,
)
from hypergeo.special import GammaContext, gamma, rgamma

logger = logging.getLogger("hypergeo")


# -------------------------
# Grouping
# -------------------------

@dataclass(frozen=True)
class ParamGroup:
    alpha: Fraction
    members: Tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class RaiseStep:
    index: int
    shift: int


@dataclass(frozen=True)
class ParamGrouping:
    groups: Tuple[ParamGroup, ...]
    normalization_plan: Tuple[RaiseStep, ...] = ()

    def normalized(self, params: HyperParams) -> HyperParams:
        upper = list(params.upper)
        for g in self.groups:
            for i in g.members:
                upper[i] = g.alpha
        return params.with_upper(upper)

    @property
    def is_generic(self) -> bool:
        return all(g.multiplicity == 1 for g in self.groups) and not self.normalization_plan


def group_parameters(params: HyperParams) -> ParamGrouping:
    classes: Dict[Fraction, List[int]] = {}
    for i, a in enumerate(params.upper):
        classes.setdefault(a - math.floor(a), []).append(i)

    groups: List[ParamGroup] = []
    plan: List[RaiseStep] = []
    for members in classes.values():
        base = min(params.upper[i] for i in members)
        groups.append(ParamGroup(base, tuple(members)))

        for i in members:
            shift = int(params.upper[i] - base)
            if not shift:
                continue
            if any(base + k == 0 for k in range(shift)):
                raise UnsupportedDegeneracyError(
                    "raise plan passes through a zero parameter; contiguity plus repetition "
                    "is only conjectured to cover every degenerate case",
                    details={"index": i, "base": str(base), "shift": shift},
                )
            plan.append(RaiseStep(i, shift))

    return ParamGrouping(tuple(groups), tuple(plan))


# -------------------------
# Leading coefficients
# -------------------------

def _check_isolated(params: HyperParams, i: int) -> None:
    a_i = params.upper[i]
    for k, a_k in enumerate(params.upper):
        if k != i and (a_k - a_i).denominator == 1:
            raise DegeneracyError(
                "upper parameters differ by an integer; use the degenerate path",
                details={"i": i, "k": k, "difference": str(a_k - a_i)},
            )


def connection_coefficient(params: HyperParams, i: int, prec: Precision) -> BigComplex:
    """C_i = prod_j G(b_j)/G(b_j - a_i) * prod_{k!=i} G(a_k - a_i)/G(a_k)."""
    _check_isolated(params, i)
    g = GammaContext.at(prec)
    a_i = params.upper[i]

    value = prec.ctx.mpc(1)
    for b in params.lower:
        value *= gamma(b, g) * rgamma(b - a_i, g)
    for k, a_k in enumerate(params.upper):
        if k != i:
            value *= gamma(a_k - a_i, g) * rgamma(a_k, g)
    return value


def generic_coefficients(params: HyperParams, prec: Precision) -> List[BigComplex]:
    for i in range(params.p):
        _check_isolated(params, i)
    return [connection_coefficient(params, i, prec) for i in range(params.p)]


def _perturbed_coefficient(
    params: HyperParams, group: ParamGroup, position: int, prec: Precision
) -> LaurentJet:
    """C_i(eps) for the member at `position` of `group` (offset o_i = position)."""
    q = group.multiplicity
    g = GammaContext.at(prec)
    wp = jet_precision(prec, q)
    alpha = group.alpha
    o_i = position

    jet = constant_jet(1, q, wp)
    for b in params.lower:
        jet = jet * constant_jet(gamma(b, g), q, wp) * rgamma_jet(b - alpha, -o_i, q, g)

    members = set(group.members)
    for o_k, k in enumerate(group.members):
        if o_k == o_i:
            continue
        jet = jet * gamma_jet(0, o_k - o_i, q, g) * rgamma_jet(alpha, o_k, q, g)

    for k, a_k in enumerate(params.upper):
        if k in members:
            continue
        jet = jet * gamma_jet(a_k - alpha, -o_i, q, g) * constant_jet(rgamma(a_k, g), q, wp)
    return jet


def _log_power_terms(coefficient: LaurentJet, offset: int, j: int) -> LaurentJet:
    """C_i(eps) * (-o_i eps)^j / j!: the log(-z)^j part of C_i (-z)^(-o_i eps)."""
    factor = Fraction((-offset) ** j, math.factorial(j))
    return coefficient.shift(j).scale(factor)


def _leading_layer(
    params: HyperParams, group: ParamGroup, prec: Precision
) -> List[Tuple[LaurentJet, List[LaurentJet]]]:
    coefficients = [_perturbed_coefficient(params, group, pos, prec) for pos in range(group.multiplicity)]
    out = []
    for j in range(group.multiplicity):
        terms = [_log_power_terms(c, pos, j) for pos, c in enumerate(coefficients)]
        out.append((jet_sum(terms), terms))
    return out


def _pole_residual(layer: Sequence[Tuple[LaurentJet, List[LaurentJet]]], prec: Precision) -> BigReal:
    ctx = prec.ctx
    worst = ctx.mpf(0)
    for total, terms in layer:
        for power in range(total.valuation, 0):
            scale = max(abs(t.coefficient(power)) for t in terms)
            if not scale:
                continue
            worst = max(worst, abs(total.coefficient(power)) / scale)
    return worst


def pole_cancellation_residual(
    grouping: ParamGrouping, g: int, params: HyperParams, prec: Precision
) -> BigReal:
    """Largest relative eps^(-m) coefficient left in the within-group sum."""
    group = grouping.groups[g]
    if group.multiplicity == 1:
        return prec.ctx.mpf(0)
    return _pole_residual(_leading_layer(grouping.normalized(params), group, prec), prec)


def degenerate_leading_coefficients(
    grouping: ParamGrouping, g: int, params: HyperParams, prec: Precision
) -> List[BigComplex]:
    """c_j^0, j = 0..q-1, for group g."""
    group = grouping.groups[g]
    norm = grouping.normalized(params)
    if group.multiplicity == 1:
        return [connection_coefficient(norm, group.members[0], prec)]

    layer = _leading_layer(norm, group, prec)
    residual = _pole_residual(layer, prec)
    if residual > prec.eps():
        raise ConsistencyError(
            "eps-pole parts of the degenerate sum do not cancel",
            details={"group": g, "residual": float(residual), "bits": prec.bits},
        )
    return [prec.complex(total.coefficient(0)) for total, _ in layer]


# -------------------------
# Expansion at infinity
# -------------------------

@dataclass(frozen=True)
class ConnectionExpansion:
    params: HyperParams
    series: Tuple[LogSeries, ...]
    N: int
    prec: Precision
    grouping: Optional[ParamGrouping] = None


def _replay_plan(
    grouping: ParamGrouping, norm: HyperParams, series: List[LogSeries]
) -> List[LogSeries]:
    for step in grouping.normalization_plan:
        a = norm.upper[step.index]
        for k in range(step.shift):
            series = [contiguity_raise(s, a + k) for s in series]
    return series


def expansion_at_infinity(params: HyperParams, N: int, prec: Precision) -> ConnectionExpansion:
    grouping = group_parameters(params)
    norm = grouping.normalized(params)
    ode = build_ode_polys(norm)

    series: List[LogSeries] = []
    for g, group in enumerate(grouping.groups):
        c0 = degenerate_leading_coefficients(grouping, g, params, prec)
        series.append(extend_coefficients(ode, group.alpha, group.multiplicity, c0, N, prec))

    series = _replay_plan(grouping, norm, series)
    logger.debug(
        "expansion_built",
        extra={"params": str(params), "N": N, "bits": prec.bits, "groups": len(grouping.groups)},
    )
    return ConnectionExpansion(params, tuple(series), N, prec, grouping)


def limit_expansion(params: HyperParams, N: int, prec: Precision) -> ConnectionExpansion:
    """
    Every layer c_j^i as the eps^0 part of the perturbed generic sum, Pochhammer
    jets of the infinity-side series included. Slow; cross-checks the recurrence.
    """
    grouping = group_parameters(params)
    norm = grouping.normalized(params)

    series: List[LogSeries] = []
    for group in grouping.groups:
        series.append(_limit_series(norm, group, N, prec))

    series = _replay_plan(grouping, norm, series)
    return ConnectionExpansion(params, tuple(series), N, prec, grouping)


def _limit_series(params: HyperParams, group: ParamGroup, N: int, prec: Precision) -> LogSeries:
    q = group.multiplicity
    wp = jet_precision(prec, q)
    alpha = group.alpha
    members = set(group.members)

    coefficients = [_perturbed_coefficient(params, group, pos, prec) for pos in range(q)]

    # Parametros (x0, pendiente) de la serie en infinito de cada miembro
    chains = []
    for o_i in range(q):
        ups = [(alpha, o_i)] + [(alpha - b + 1, o_i) for b in params.lower]
        downs = [(Fraction(1), o_i - o_k) for o_k in range(q) if o_k != o_i]
        downs += [(alpha - a_k + 1, o_i) for k, a_k in enumerate(params.upper) if k not in members]
        chains.append((
            [pochhammer_jets(x0, slope, N, q, wp) for x0, slope in ups],
            [pochhammer_jets(x0, slope, N, q, wp) for x0, slope in downs],
        ))

    factorial = 1
    layers = []
    for m in range(N + 1):
        factorial *= max(m, 1)
        running = []
        for ups, downs in chains:
            jet = constant_jet(Fraction(1, factorial), q, wp)
            for chain in ups:
                jet = jet * chain[m]
            for chain in downs:
                jet = jet * jet_inv(chain[m])
            running.append(jet)

        layer = []
        for j in range(q):
            terms = [_log_power_terms(c * running[o_i], o_i, j) for o_i, c in enumerate(coefficients)]
            layer.append(prec.complex(jet_sum(terms).coefficient(0)))
        layers.append(tuple(layer))

    return LogSeries(alpha, q, tuple(layers), prec)


# -------------------------
# Evaluation
# -------------------------

def evaluate_at_infinity(exp: ConnectionExpansion, z: ComplexLike) -> EvalResult:
    prec = exp.prec
    ctx = prec.ctx
    w = prec.complex(z)
    r = abs(w)
    if r <= 1:
        raise DomainError("expansion at infinity needs |z| > 1", details={"abs_z": float(r)})

    warnings: Tuple[str, ...] = ()
    if w.imag == 0 and w.real > 1:
        warnings = ("branch_cut",)
        logger.warning("branch_cut_boundary", extra={"z": str(w)})

    total = ctx.mpc(0)
    tail = ctx.mpf(0)
    for s in exp.series:
        if s.is_zero():
            continue
        value, last = s.sum_at(w, prec)
        total += value
        tail += last

    err = tail / (r - 1) + abs(total) * prec.eps()
    return EvalResult(total, err, exp.N, "connection", warnings=warnings)


def choose_order(digits: int, radius: float) -> int:
    """N = ceil(digits / log10|z|) + 10."""
    return math.ceil(digits / math.log10(radius)) + 10


def dispatch_method(radius: float, settings: Settings) -> str:
    """Depends on |z| only."""
    if radius <= settings.inner_radius:
        return "taylor"
    if radius >= settings.outer_radius:
        return "connection"
    raise AnnulusError(
        "unit-circle neighborhood unsupported",
        details={"abs_z": radius, "inner": settings.inner_radius, "outer": settings.outer_radius},
    )


def evaluate(
    params: HyperParams,
    z: ComplexLike,
    digits: int,
    *,
    method: Optional[str] = None,
    terms: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> EvalResult:
    settings = settings or get_settings()
    prec = Precision.from_digits(digits + settings.guard_digits)
    w = prec.complex(z)
    radius = float(abs(w))

    chosen = method or dispatch_method(radius, settings)
    started = time.perf_counter()

    if chosen == "taylor":
        policy = (
            TruncationPolicy.from_terms(terms)
            if terms is not None
            else TruncationPolicy.automatic(digits, radius, settings.max_taylor_terms, params.growth)
        )
        result = taylor_eval(params, w, prec, policy)
        phases = {"setup": 0.0, "summation": time.perf_counter() - started}

    elif chosen == "binary_splitting":
        n = terms if terms is not None else TruncationPolicy.automatic(
            digits, radius, settings.max_taylor_terms, params.growth
        ).last_index
        result = binary_splitting_result(params, z, prec, n)
        phases = {"setup": 0.0, "summation": time.perf_counter() - started}

    elif chosen == "connection":
        if radius <= 1:
            raise DomainError("expansion at infinity needs |z| > 1", details={"abs_z": radius})
        n = terms if terms is not None else choose_order(digits, radius)
        exp = expansion_at_infinity(params, n, prec)
        built = time.perf_counter()
        result = evaluate_at_infinity(exp, w)
        phases = {"setup": built - started, "summation": time.perf_counter() - built}

    elif chosen == "euler_integral":
        if params.p != 2:
            raise ParameterError("Euler integral is implemented for 2F1 only", details={"p": params.p})
        a, b = params.upper
        (c,) = params.lower
        spec = QuadratureSpec("double_exponential", samples=terms or 1024, prec=prec)
        result = euler_integral_2f1(a, b, c, w, spec)
        phases = {"setup": 0.0, "summation": time.perf_counter() - started}

    else:
        raise ParameterError("unknown method", details={"method": chosen})

    return EvalResult(
        result.value,
        result.err_estimate,
        result.terms_used,
        result.method,
        warnings=result.warnings,
        phases=phases,
    )


# -------------------------
# Dump / load
# -------------------------

def expansion_to_dict(exp: ConnectionExpansion) -> Dict[str, Any]:
    prec = exp.prec
    ctx = prec.ctx
    n = prec.digits + 5

    series = []
    for s in exp.series:
        coeffs = [
            [(ctx.nstr(prec.complex(c).real, n), ctx.nstr(prec.complex(c).imag, n)) for c in layer]
            for layer in s.coeffs
        ]
        series.append(SeriesDump(alpha=str(s.alpha), logdeg=s.logdeg, coeffs=coeffs))

    dump = ExpansionDump(
        upper=[str(a) for a in exp.params.upper],
        lower=[str(b) for b in exp.params.lower],
        N=exp.N,
        bits=prec.bits,
        series=series,
    )
    return dump.model_dump()


def expansion_from_dict(data: Dict[str, Any]) -> ConnectionExpansion:
    try:
        dump = ExpansionDump.model_validate(data)
    except ValidationError as exc:
        raise ParameterError("malformed expansion dump", details={"errors": exc.errors()}) from exc

    prec = Precision(dump.bits)
    ctx = prec.ctx
    params = HyperParams(tuple(as_rational(a) for a in dump.upper), tuple(as_rational(b) for b in dump.lower))

    series = []
    for sd in dump.series:
        layers = tuple(
            tuple(ctx.mpc(prec.real(re), prec.real(im)) for re, im in layer) for layer in sd.coeffs
        )
        series.append(LogSeries(as_rational(sd.alpha), sd.logdeg, layers, prec))
    return ConnectionExpansion(params, tuple(series), dump.N, prec)
