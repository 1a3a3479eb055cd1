import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from pydantic import ValidationError

from hypergeo.commands import bench, eval as eval_cmd, expand, selftest
from hypergeo.core.config import get_settings
from hypergeo.core.errors import INTERNAL_ERROR_EXIT, HyperError, ParseError, error_body
from hypergeo.core.run_id import configure_logging, current_run_id
from hypergeo.schemas import SUBCOMMANDS

logger = logging.getLogger("hypergeo")

# Opciones cuyo valor puede empezar con '-' ("-z -5+1i", "-xrange -3:3")
VALUE_OPTIONS = {"-z", "-p", "-q", "-xrange", "-yrange", "--xrange", "--yrange", "--upper", "--lower"}


class CliParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ParseError(message, text=" ".join(sys.argv[1:]))


def glue_negative_values(argv: Sequence[str]) -> List[str]:
    out: List[str] = []
    k = 0
    while k < len(argv):
        tok = argv[k]
        nxt = argv[k + 1] if k + 1 < len(argv) else ""
        if tok in VALUE_OPTIONS and nxt.startswith("-") and len(nxt) > 1:
            out.append(f"{tok}={nxt}")
            k += 2
            continue
        out.append(tok)
        k += 1
    return out


def build_parser() -> CliParser:
    parser = CliParser(prog="hypergeo", description="Arbitrary-precision pFq-1 evaluation")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", parser_class=CliParser)
    sub.required = True

    commands = {"eval": eval_cmd, "expand": expand, "bench": bench, "selftest": selftest}
    for name in SUBCOMMANDS:
        commands[name].register(sub)
    return parser


def _log_level(verbose: int, default: str) -> str:
    if verbose >= 2:
        return "DEBUG"
    if verbose == 1:
        return "INFO"
    return default


def _emit_error(code: str, message: str, details=None) -> None:
    body = error_body(code=code, message=message, run_id=current_run_id(), details=details)
    print(json.dumps(body, default=str), file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args_in = list(sys.argv[1:] if argv is None else argv)
    try:
        settings = get_settings()
        args = build_parser().parse_args(glue_negative_values(args_in))
        configure_logging(_log_level(args.verbose, settings.log_level))
        return args.func(args, settings)

    except ValidationError as exc:
        _emit_error("validation_error", "Invalid request", {"errors": exc.errors(include_url=False)})
        return ParseError.exit_code

    except HyperError as exc:
        _emit_error(exc.code, exc.message, exc.details)
        return exc.exit_code

    except Exception:
        logger.exception("unhandled_exception")
        _emit_error("internal_error", "Unexpected error")
        return INTERNAL_ERROR_EXIT
