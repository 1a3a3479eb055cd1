import csv
import json
import sys
from typing import Any, Dict, Iterable, Sequence

import mpmath

from hypergeo.numeric import BigComplex, format_complex, round_to_digits


def format_value(value: BigComplex, digits: int) -> str:
    return format_complex(round_to_digits(value, digits))


def format_error(err) -> str:
    # 3 cifras bastan para una cota
    return mpmath.nstr(err, 3)


def write_json(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, default=str))


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
