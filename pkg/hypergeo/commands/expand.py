from hypergeo.commands import format_value, write_csv, write_json
from hypergeo.connection import expansion_at_infinity, expansion_to_dict, limit_expansion
from hypergeo.core.config import Settings
from hypergeo.numeric import Precision, round_to_digits
from hypergeo.schemas import OUTPUT_FORMATS, CliRequest

BUILDERS = {
    "recurrence": expansion_at_infinity,
    "limit": limit_expansion,
}


def register(sub) -> None:
    p = sub.add_parser("expand", help="print the coefficients c_j^i of the expansion at infinity")
    p.add_argument("-p", "--upper", required=True)
    p.add_argument("-q", "--lower", default="")
    p.add_argument("-n", "--terms", type=int, required=True, help="last layer N (layers 0..N)")
    p.add_argument("-d", "--digits", type=int, default=None)
    p.add_argument("--method", choices=tuple(BUILDERS), default="recurrence")
    p.add_argument("-o", "--output", choices=OUTPUT_FORMATS, default="text")
    p.set_defaults(func=run)


def run(args, settings: Settings) -> int:
    req = CliRequest(
        subcommand="expand",
        upper=args.upper,
        lower=args.lower,
        digits=args.digits if args.digits is not None else settings.default_digits,
        terms=args.terms,
        method=args.method,
        output=args.output,
    )
    prec = Precision.from_digits(req.digits + settings.guard_digits)
    exp = BUILDERS[req.method](req.params, req.terms, prec)

    if req.output == "json":
        write_json(expansion_to_dict(exp))
        return 0

    if req.output == "csv":
        rows = []
        for g, s in enumerate(exp.series):
            for i, layer in enumerate(s.coeffs):
                for j, c in enumerate(layer):
                    re_s, im_s = round_to_digits(c, req.digits)
                    rows.append([g, str(s.alpha), i, j, re_s, im_s])
        write_csv(["group", "alpha", "i", "j", "re", "im"], rows)
        return 0

    print(f"{exp.params}  N={exp.N}")
    for g, s in enumerate(exp.series):
        print(f"group {g}: alpha={s.alpha} logdeg={s.logdeg}")
        for i, layer in enumerate(s.coeffs):
            for j, c in enumerate(layer):
                print(f"  c[{i}][{j}] = {format_value(c, req.digits)}")
    return 0
