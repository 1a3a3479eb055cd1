"""
Reruns the three published examples over several truncations, and samples
|r20 - r10| over a grid of z for the difference plot.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

from hypergeo.commands import format_error, write_csv
from hypergeo.connection import ConnectionExpansion, evaluate_at_infinity, expansion_at_infinity
from hypergeo.core.config import Settings
from hypergeo.core.errors import NotFoundError, ParseError
from hypergeo.numeric import GaussianRational, Precision, round_to_digits
from hypergeo.series import HyperParams

logger = logging.getLogger("hypergeo")

DEFAULT_TERMS = (5, 10, 20, 40, 80)
BENCH_HEADER = ["case", "terms", "digits", "seconds", "value_re", "value_im", "err_estimate"]
GRID_HEADER = ["x", "y", "diff"]
GRID_DIGITS = 30


@dataclass(frozen=True)
class BenchCase:
    name: str
    params: HyperParams
    z: GaussianRational


BENCH_CASES: Dict[str, BenchCase] = {
    "example1": BenchCase(
        "example1",
        HyperParams((Fraction(10, 3), Fraction(10, 3)), (Fraction(7, 2),)),
        GaussianRational(Fraction(13), Fraction(13)),
    ),
    "example2": BenchCase(
        "example2",
        HyperParams((Fraction(7, 2), Fraction(7, 2)), (Fraction(31, 5),)),
        GaussianRational(Fraction(13, 10), Fraction(9, 5)),
    ),
    "example3": BenchCase(
        "example3",
        HyperParams((Fraction(7, 2),) * 3, (Fraction(31, 5), Fraction(36, 7))),
        GaussianRational(Fraction(13), Fraction(13)),
    ),
}


def register(sub) -> None:
    p = sub.add_parser("bench", help="reproduce the example tables (CSV)")
    p.add_argument("case", nargs="*", help="case names (default: all; example2 with --grid)")
    p.add_argument("--cases", default=None, help="comma separated; empty for none")
    p.add_argument("--terms", default=",".join(str(t) for t in DEFAULT_TERMS))
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--grid", action="store_true", help="emit |r20 - r10| over a z grid instead")
    p.add_argument("-xrange", "--xrange", default="-3:3")
    p.add_argument("-yrange", "--yrange", default="-3:3")
    p.add_argument("--step", default="0.25")
    p.set_defaults(func=run)


def parse_cases(text: str) -> List[BenchCase]:
    names = [n.strip() for n in (text or "").split(",") if n.strip()]
    unknown = [n for n in names if n not in BENCH_CASES]
    if unknown:
        raise NotFoundError("unknown bench case", details={"cases": unknown, "known": list(BENCH_CASES)})
    return [BENCH_CASES[n] for n in names]


def parse_range(text: str) -> Tuple[Fraction, Fraction]:
    lo, sep, hi = (text or "").partition(":")
    if not sep:
        raise ParseError("range must look like lo:hi", text=text, position=len(text or ""))
    try:
        a, b = Fraction(lo), Fraction(hi)
    except ValueError as exc:
        raise ParseError("range bounds must be numbers", text=text, position=0) from exc
    if a > b:
        raise ParseError("range is empty", text=text, position=0)
    return a, b


# -------------------------
# Table rows
# -------------------------

def bench_row(case: BenchCase, terms: int) -> List[str]:
    """digits = terms + 10, expansion truncated at N = terms."""
    digits = terms + 10
    prec = Precision.for_terms(terms)
    started = time.perf_counter()
    exp = expansion_at_infinity(case.params, terms, prec)
    result = evaluate_at_infinity(exp, case.z)
    seconds = time.perf_counter() - started

    re_s, im_s = round_to_digits(result.value, digits)
    return [case.name, str(terms), str(digits), f"{seconds:.6f}", re_s, im_s, format_error(result.err_estimate)]


def bench_rows(cases: Sequence[BenchCase], terms: Sequence[int], jobs: int = 1) -> List[List[str]]:
    work = [(c, t) for c in cases for t in terms]
    if jobs <= 1:
        return [bench_row(c, t) for c, t in work]
    # Casos independientes: el orden de salida se conserva
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda ct: bench_row(*ct), work))


# -------------------------
# Difference grid
# -------------------------

def _frange(lo: Fraction, hi: Fraction, step: Fraction) -> Iterator[Fraction]:
    x = lo
    while x <= hi:
        yield x
        x += step


def difference_grid(
    case: BenchCase,
    xrange: Tuple[Fraction, Fraction],
    yrange: Tuple[Fraction, Fraction],
    step: Fraction,
    *,
    low: int = 10,
    high: int = 20,
) -> List[Tuple[Fraction, Fraction, float]]:
    """|r_high - r_low| at every grid point with |z| > 1."""
    if step <= 0:
        raise ParseError("step must be positive", text=str(step), position=0)
    prec = Precision.from_digits(GRID_DIGITS)
    full = expansion_at_infinity(case.params, high, prec)
    short = replace(full, series=tuple(s.truncated(low) for s in full.series), N=low)

    out = []
    for x in _frange(*xrange, step):
        for y in _frange(*yrange, step):
            z = GaussianRational(x, y)
            if z.abs2() <= 1:
                continue
            diff = abs(_value(full, z) - _value(short, z))
            out.append((x, y, float(diff)))
    logger.info("grid_done", extra={"case": case.name, "points": len(out)})
    return out


def _value(exp: ConnectionExpansion, z: GaussianRational):
    return evaluate_at_infinity(exp, z).value


def _selected(args) -> List[BenchCase]:
    if args.case:
        return parse_cases(",".join(args.case))
    if args.cases is not None:
        return parse_cases(args.cases)
    if args.grid:
        return [BENCH_CASES["example2"]]
    return list(BENCH_CASES.values())


def run(args, settings: Settings) -> int:
    cases = _selected(args)
    if args.grid:
        if not cases:
            raise NotFoundError("grid needs one case")
        case = cases[0]
        try:
            step = Fraction(args.step)
        except ValueError as exc:
            raise ParseError("step must be a number", text=args.step, position=0) from exc
        points = difference_grid(case, parse_range(args.xrange), parse_range(args.yrange), step)
        write_csv(GRID_HEADER, [[float(x), float(y), f"{d:.6e}"] for x, y, d in points])
        return 0

    try:
        terms = [int(t) for t in args.terms.split(",") if t.strip()]
    except ValueError as exc:
        raise ParseError("terms must be integers", text=args.terms, position=0) from exc
    jobs = args.jobs or settings.bench_jobs
    write_csv(BENCH_HEADER, bench_rows(cases, terms, jobs))
    return 0
