import argparse
import json
from fractions import Fraction

from hypergeo.commands import selftest
from hypergeo.commands.bench import BENCH_CASES, BENCH_HEADER, difference_grid
from hypergeo.connection import expansion_from_dict
from hypergeo.main import _log_level, build_parser, glue_negative_values, main
from hypergeo.schemas import OUTPUT_FORMATS, SUBCOMMANDS


def _error(capsys) -> dict:
    return json.loads(capsys.readouterr().err)


# ----------------------------------------------------------------
# eval

def test_eval_json(capsys):
    code = main(["eval", "-p", "10/3,10/3", "-q", "7/2", "-z", "13+13i", "-d", "20", "-o", "json"])
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    assert body["method"] == "connection"
    assert body["value"]["re"].startswith("0.00004646537447339349")
    assert body["value"]["im"].startswith("0.00009888640350642182")
    assert body["params"] == "2F1(10/3,10/3;7/2)"
    assert set(body["phases"]) == {"setup", "summation"}
    assert body["run_id"]


def test_eval_at_zero(capsys):
    assert main(["eval", "-p", "2", "-z", "0", "-d", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "1.000000000+0.000000000i"
    assert "method: taylor" in lines

    assert main(["eval", "-p", "1,1", "-q", "2", "-z", "0", "-d", "10"]) == 0
    assert capsys.readouterr().out.startswith("1.000000000+0.000000000i")


def test_eval_csv(capsys):
    assert main(["eval", "-p", "1/2", "-z", "1/4", "-d", "10", "-o", "csv"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "value_re,value_im,method,terms_used,err_estimate"
    # (3/4)^(-1/2)
    assert row.startswith("1.154700538,0.000000000,taylor,")


def test_eval_negative_argument(capsys):
    assert main(["eval", "-p", "1,1", "-q", "2", "-z", "-5+1i", "-d", "15"]) == 0
    out = capsys.readouterr().out
    assert "method: connection" in out


def test_eval_annulus_exit_code(capsys):
    assert main(["eval", "-p", "10/3,10/3", "-q", "7/2", "-z", "1"]) == 4
    err = _error(capsys)
    assert err["error"]["code"] == "annulus_unsupported"
    assert err["details"]["abs_z"] == 1.0


def test_eval_parse_error(capsys):
    assert main(["eval", "-p", "1/0", "-z", "2"]) == 2
    err = _error(capsys)
    assert err["error"]["code"] == "parse_error"
    assert err["details"]["position"] == 2


def test_eval_bad_complex(capsys):
    assert main(["eval", "-p", "1/2", "-z", "1+2"]) == 2
    assert _error(capsys)["error"]["code"] == "parse_error"


def test_eval_validation_error(capsys):
    assert main(["eval", "-p", "1/2", "-z", "2", "-d", "0"]) == 2
    assert _error(capsys)["error"]["code"] == "validation_error"


def test_unknown_option(capsys):
    assert main(["eval", "--nope"]) == 2
    assert _error(capsys)["error"]["code"] == "parse_error"


def test_eval_unsupported_degeneracy(capsys):
    assert main(["eval", "-p", "-1,1", "-q", "1/2", "-z", "5+5i"]) == 6
    err = _error(capsys)
    assert err["error"]["code"] == "unsupported_degeneracy"
    assert "conjectured" in err["error"]["message"]


def test_eval_pinned_run_id(capsys, monkeypatch):
    monkeypatch.setenv("HYPERGEO_RUN_ID", "run_fixed")
    assert main(["eval", "-p", "2", "-z", "1"]) == 4
    assert _error(capsys)["error"]["run_id"] == "run_fixed"


# ----------------------------------------------------------------
# expand

def test_expand_binomial(capsys):
    assert main(["expand", "-p", "2", "-n", "3", "-d", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "1F0(2;)  N=3"
    assert lines[1] == "group 0: alpha=2 logdeg=1"
    # (1 - z)^(-2) = (-z)^(-2) sum (i + 1) z^(-i)
    assert lines[2:] == [
        "  c[0][0] = 1.000000000+0.000000000i",
        "  c[1][0] = 2.000000000+0.000000000i",
        "  c[2][0] = 3.000000000+0.000000000i",
        "  c[3][0] = 4.000000000+0.000000000i",
    ]


def test_expand_json_round_trip(capsys):
    assert main(["expand", "-p", "10/3,10/3", "-q", "7/2", "-n", "4", "-d", "20", "-o", "json"]) == 0
    exp = expansion_from_dict(json.loads(capsys.readouterr().out))
    assert exp.N == 4
    assert exp.series[0].logdeg == 2
    assert str(exp.params) == "2F1(10/3,10/3;7/2)"


def test_expand_csv_limit(capsys):
    assert main(["expand", "-p", "10/3,10/3", "-q", "7/2", "-n", "2", "--method", "limit", "-o", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "group,alpha,i,j,re,im"
    assert len(lines) == 1 + 3 * 2


# ----------------------------------------------------------------
# bench

def test_bench_no_cases(capsys):
    assert main(["bench", "--cases", ""]) == 0
    assert capsys.readouterr().out.splitlines() == [",".join(BENCH_HEADER)]


def test_bench_example1(capsys):
    assert main(["bench", "example1", "--terms", "5,10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    five = lines[1].split(",")
    assert five[:3] == ["example1", "5", "15"]
    assert five[4].startswith("0.00004646545068")
    ten = lines[2].split(",")
    assert ten[4].startswith("0.0000464653744733")


def test_bench_unknown_case(capsys):
    assert main(["bench", "example9"]) == 7
    assert _error(capsys)["error"]["code"] == "not_found"


def test_bench_bad_range(capsys):
    assert main(["bench", "--grid", "-xrange", "3"]) == 2


def test_bench_grid(capsys):
    code = main(["bench", "--grid", "-xrange", "-2:2", "-yrange", "-2:2", "--step", "1"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,y,diff"
    # 25 grid points minus the 5 with |z| <= 1
    assert len(lines) == 1 + 20


def test_grid_difference_falls_off_with_radius():
    case = BENCH_CASES["example2"]
    edge = Fraction(6, 5)
    ring = difference_grid(case, (-edge, edge), (-edge, edge), Fraction(1, 20))
    near = max(d for x, y, d in ring if Fraction(105, 100) ** 2 <= x * x + y * y <= edge * edge)
    outer = difference_grid(case, (Fraction(-4), Fraction(4)), (Fraction(-4), Fraction(4)), Fraction(1, 4))
    far = max(d for x, y, d in outer if x * x + y * y >= 9)
    assert near / far >= 1e6


# ----------------------------------------------------------------
# selftest

def test_selftest_passes(capsys):
    assert main(["selftest", "-d", "20"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == len(selftest.SUITES)


def test_selftest_detects_corruption(capsys):
    assert main(["selftest", "-d", "20", "--inject-corruption", "-o", "json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["residuals"]["passed"] is False
    assert report["gamma_identities"]["passed"] is True


# ----------------------------------------------------------------
# helpers

def test_glue_negative_values():
    assert glue_negative_values(["eval", "-z", "-5+1i", "-p", "1"]) == ["eval", "-z=-5+1i", "-p", "1"]
    assert glue_negative_values(["-xrange", "-3:3", "-v"]) == ["-xrange=-3:3", "-v"]
    assert glue_negative_values(["-z"]) == ["-z"]
    assert glue_negative_values(["-d", "-5"]) == ["-d", "-5"]


def test_log_level():
    assert _log_level(0, "WARNING") == "WARNING"
    assert _log_level(1, "WARNING") == "INFO"
    assert _log_level(3, "WARNING") == "DEBUG"


def test_parser_covers_subcommands_and_formats(capsys):
    parser = build_parser()
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    assert tuple(sub.choices) == SUBCOMMANDS
    assert OUTPUT_FORMATS == ("text", "json", "csv")
    assert main(["eval", "-p", "1/2", "-z", "1/4", "-o", "xml"]) == 2
    assert _error(capsys)["error"]["code"] == "parse_error"
