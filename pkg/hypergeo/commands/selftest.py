"""
Invariant suites run against the installed build. Each suite returns
(passed, detail); the command exits 1 if any suite fails.
"""
import logging
import random
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from hypergeo.commands import write_json
from hypergeo.connection import (
    evaluate,
    expansion_at_infinity,
    group_parameters,
    pole_cancellation_residual,
)
from hypergeo.core.config import Settings
from hypergeo.core.errors import DomainError, HyperError
from hypergeo.frobenius import build_ode_polys, leading_magnitude, ode_residual
from hypergeo.numeric import GaussianRational, Precision
from hypergeo.oracle import QuadratureSpec, euler_integral_2f1, lookup, significant_digits
from hypergeo.schemas import OUTPUT_FORMATS
from hypergeo.series import HyperParams
from hypergeo.special import GammaContext, gamma

logger = logging.getLogger("hypergeo")

SuiteResult = Tuple[bool, str]

EXAMPLE1 = HyperParams((Fraction(10, 3), Fraction(10, 3)), (Fraction(7, 2),))
EXAMPLE2 = HyperParams((Fraction(7, 2), Fraction(7, 2)), (Fraction(31, 5),))
EXAMPLE3 = HyperParams((Fraction(7, 2),) * 3, (Fraction(31, 5), Fraction(36, 7)))

RESIDUAL_POINTS = (
    GaussianRational(Fraction(13), Fraction(13)),
    GaussianRational(Fraction(2), Fraction(2)),
    GaussianRational(Fraction(-5), Fraction(1)),
)
RESIDUAL_ORDERS = (10, 20, 40)
# Residuo relativo maximo aceptado al orden mas alto
RESIDUAL_CEILING = Fraction(1, 10 ** 10)

# (params, z, source, digits lost to the published working precision)
REFERENCE_CHECKS = (
    (EXAMPLE1, GaussianRational(Fraction(13), Fraction(13)), "mathematica-50", 2),
    (EXAMPLE2, GaussianRational(Fraction(13, 10), Fraction(9, 5)), "mathematica-50", 2),
    (EXAMPLE3, GaussianRational(Fraction(13), Fraction(13)), "mathematica-10", 1),
)


def register(sub) -> None:
    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("-d", "--digits", type=int, default=None)
    p.add_argument("--inject-corruption", action="store_true", help="perturb one coefficient (test hook)")
    p.add_argument("-o", "--output", choices=OUTPUT_FORMATS[:2], default="text")
    p.set_defaults(func=run)


# -------------------------
# Suites
# -------------------------

def gamma_identities(digits: int, **_) -> SuiteResult:
    prec = Precision.from_digits(digits + 10)
    ctx = prec.ctx
    g = GammaContext.at(prec)
    rng = random.Random(7)
    tol = ctx.ldexp(ctx.mpf(1), -(prec.bits - 8))

    worst = ctx.mpf(0)
    for _ in range(10):
        w = ctx.mpc(rng.uniform(-8, 8), rng.uniform(-8, 8))
        rec = abs(gamma(w + 1, g) - w * gamma(w, g)) / abs(gamma(w + 1, g))
        refl_ref = ctx.pi / ctx.sin(ctx.pi * w)
        refl = abs(gamma(w, g) * gamma(1 - w, g) - refl_ref) / abs(refl_ref)
        worst = max(worst, rec, refl)
    return worst <= tol, f"worst relative error {ctx.nstr(worst, 3)}"


def pole_cancellation(digits: int, **_) -> SuiteResult:
    prec = Precision.from_digits(digits + 10)
    worst = prec.ctx.mpf(0)
    for params in (EXAMPLE1, EXAMPLE3):
        grouping = group_parameters(params)
        for g in range(len(grouping.groups)):
            worst = max(worst, pole_cancellation_residual(grouping, g, params, prec))
    return worst <= prec.eps(), f"worst eps-pole residue {prec.ctx.nstr(worst, 3)}"


def residuals(digits: int, corrupt: bool = False, **_) -> SuiteResult:
    prec = Precision.from_digits(digits + 10)
    ode = build_ode_polys(EXAMPLE1)
    details: List[str] = []
    ok = True

    for z in RESIDUAL_POINTS:
        rel = []
        for n in RESIDUAL_ORDERS:
            exp = expansion_at_infinity(EXAMPLE1, n, prec)
            s = exp.series[0]
            if corrupt:
                s = s.with_coefficient(3, 0, s.coeffs[3][0] * prec.real(Fraction(1001, 1000)))
            rel.append(ode_residual(ode, s, z, prec) / leading_magnitude(s, z, prec))
        decays = all(b < a for a, b in zip(rel, rel[1:]))
        small = rel[-1] <= prec.real(RESIDUAL_CEILING)
        ok = ok and decays and small
        details.append(f"{z}: {prec.ctx.nstr(rel[-1], 3)}")
    return ok, "; ".join(details)


def oracle_agreement(digits: int, **_) -> SuiteResult:
    prec = Precision.from_digits(digits + 10)
    worst = float("inf")
    for params, z in (
        (EXAMPLE1, GaussianRational(Fraction(13), Fraction(13))),
        (EXAMPLE2, GaussianRational(Fraction(13, 10), Fraction(9, 5))),
    ):
        a, b = params.upper
        (c,) = params.lower
        quad = euler_integral_2f1(a, b, c, z, QuadratureSpec("double_exponential", 1024, prec))
        value = evaluate(params, z, digits).value
        worst = min(worst, significant_digits(value, quad.value))
    return worst >= min(15, digits - 1), f"min agreement {worst:.1f} digits"


def reference_table(digits: int, **_) -> SuiteResult:
    details: List[str] = []
    ok = True
    for params, z, source, slack in REFERENCE_CHECKS:
        entry = lookup(params, z, source)
        # nunca comparar mas alla de lo publicado
        usable = min(digits, entry.published_digits)
        value = evaluate(params, z, usable).value
        got = significant_digits(value, entry.value())
        ok = ok and got >= usable - slack
        details.append(f"{entry.case}/{source}: {got:.1f}")
    return ok, "; ".join(details)


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "gamma_identities": gamma_identities,
    "pole_cancellation": pole_cancellation,
    "residuals": residuals,
    "oracle_agreement": oracle_agreement,
    "reference_table": reference_table,
}


def run_suites(digits: int, corrupt: bool = False) -> Dict[str, SuiteResult]:
    report: Dict[str, SuiteResult] = {}
    for name, suite in SUITES.items():
        try:
            report[name] = suite(digits, corrupt=corrupt)
        except HyperError as exc:
            report[name] = (False, f"{exc.code}: {exc.message}")
        logger.info("suite_done", extra={"suite": name, "passed": report[name][0]})
    return report


def run(args, settings: Settings) -> int:
    digits = args.digits if args.digits is not None else settings.default_digits
    if digits < 1:
        raise DomainError("digits must be >= 1", details={"digits": digits})
    report = run_suites(digits, corrupt=args.inject_corruption)

    if args.output == "json":
        write_json({name: {"passed": ok, "detail": detail} for name, (ok, detail) in report.items()})
    else:
        for name, (ok, detail) in report.items():
            print(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")
    return 0 if all(ok for ok, _ in report.values()) else 1
