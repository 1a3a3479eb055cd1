import logging

from hypergeo.commands import format_error, format_value, write_csv, write_json
from hypergeo.connection import evaluate
from hypergeo.core.config import Settings
from hypergeo.core.run_id import current_run_id
from hypergeo.numeric import round_to_digits
from hypergeo.schemas import OUTPUT_FORMATS, CliRequest
from hypergeo.series import METHODS

logger = logging.getLogger("hypergeo")


def register(sub) -> None:
    p = sub.add_parser("eval", help="evaluate pFq-1 at one point")
    p.add_argument("-p", "--upper", required=True, help="upper parameters, e.g. 10/3,10/3")
    p.add_argument("-q", "--lower", default="", help="lower parameters, e.g. 7/2")
    p.add_argument("-z", required=True, help="argument, e.g. 13+13i")
    p.add_argument("-d", "--digits", type=int, default=None)
    p.add_argument("-n", "--terms", type=int, default=None)
    p.add_argument("--method", choices=METHODS, default=None)
    p.add_argument("-o", "--output", choices=OUTPUT_FORMATS, default="text")
    p.set_defaults(func=run)


def run(args, settings: Settings) -> int:
    req = CliRequest(
        subcommand="eval",
        upper=args.upper,
        lower=args.lower,
        z=args.z,
        digits=args.digits if args.digits is not None else settings.default_digits,
        terms=args.terms,
        method=args.method,
        output=args.output,
    )
    result = evaluate(req.params, req.z_value, req.digits, method=req.method, terms=req.terms, settings=settings)
    logger.info("eval_done", extra={"method": result.method, "terms": result.terms_used})

    if req.output == "json":
        re_s, im_s = round_to_digits(result.value, req.digits)
        write_json(
            {
                "params": str(req.params),
                "z": req.z,
                "value": {"re": re_s, "im": im_s},
                "method": result.method,
                "terms_used": result.terms_used,
                "err_estimate": format_error(result.err_estimate),
                "warnings": list(result.warnings),
                "phases": result.phases,
                "run_id": current_run_id(),
            }
        )
    elif req.output == "csv":
        re_s, im_s = round_to_digits(result.value, req.digits)
        write_csv(
            ["value_re", "value_im", "method", "terms_used", "err_estimate"],
            [[re_s, im_s, result.method, result.terms_used, format_error(result.err_estimate)]],
        )
    else:
        print(format_value(result.value, req.digits))
        print(f"method: {result.method}")
        print(f"terms_used: {result.terms_used}")
        print(f"err_estimate: {format_error(result.err_estimate)}")
        for name, seconds in result.phases.items():
            print(f"{name}_seconds: {seconds:.6f}")
        for w in result.warnings:
            print(f"warning: {w}")
    return 0
