from __future__ import annotations

import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from wgcalc.cli import main
from wgcalc.combinat import IntegerPartition
from wgcalc.exactalg import RationalFunction, UniPolynomial
from wgcalc.weingarten import wg_unitary


def parse_poly(text: str) -> UniPolynomial:
    """Read back a polynomial printed as e.g. ``N^5 - 5N^3 + 4N``."""
    out = UniPolynomial()
    for sign, coeff, var, power in re.findall(r"([+-]?)\s*(\d*)(N(?:\^(\d+))?)?", text.replace(" ", "")):
        if not coeff and not var:
            continue
        c = int(coeff) if coeff else 1
        k = (int(power) if power else 1) if var else 0
        out = out + UniPolynomial.monomial(k, -c if sign == "-" else c)
    return out


def parse_rf(text: str) -> RationalFunction:
    num, _, den = text.partition("/")
    strip = lambda s: s[1:-1] if s.startswith("(") and s.endswith(")") else s
    d = parse_poly(strip(den)) if den else UniPolynomial.constant(1)
    return RationalFunction(parse_poly(strip(num)), d)


def exit_code(argv) -> int:
    try:
        return main(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_fn_unitary(capsys):
    code, out, _ = run(capsys, "fn", "--group", "U", "--type", "3", "--n", "symbolic")
    assert code == 0 and out == "2/(N^5 - 5N^3 + 4N)"


def test_fn_orthogonal(capsys):
    code, out, _ = run(capsys, "fn", "--group", "O", "--type", "2")
    assert code == 0 and out == "-1/(N^3 + N^2 - 2N)"


def test_integrate_symmetric(capsys):
    code, out, _ = run(capsys, "integrate", "--group", "S", "--n", "3", "--monomial", "1,2;1,2")
    assert code == 0 and out == "1/3"


@pytest.mark.parametrize("parts", ["1", "2", "1,1", "3", "2,1", "4", "2,2", "3,1,1"])
def test_printed_formula_round_trips(capsys, parts):
    _, out, _ = run(capsys, "fn", "--group", "U", "--type", parts)
    assert parse_rf(out) == wg_unitary(IntegerPartition.parse(parts))


def test_numeric_fn(capsys):
    code, out, _ = run(capsys, "fn", "--group", "U", "--type", "3", "--n", "3")
    assert code == 0 and Fraction(out) == Fraction(1, 60)
    code, out, _ = run(capsys, "fn", "--group", "S", "--type", "2", "--n", "4")
    assert Fraction(out) == Fraction(1, 12)


def test_json(capsys):
    code, out, _ = run(capsys, "integrate", "--group", "Sp", "--monomial", "1,1;N+1,N+1", "--json")
    payload = json.loads(out)
    assert code == 0
    assert set(payload) == {"query", "value", "regime", "stable"}
    assert RationalFunction.from_json(payload["value"]).format() == "1/(2N)"
    assert payload["regime"] == "symbolic"


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--d", "3", "--rho", "1,2,3", "--sigma", "2,3,1")
    assert code == 0 and out.endswith("MATCH")
    assert "\n0\t2\t2\n" in out + "\n"


def test_gram(capsys):
    code, out, _ = run(capsys, "gram", "--group", "U", "--d", "2", "--n", "3")
    assert code == 0
    assert [line.split("\t")[1:] for line in out.splitlines()] == [["9", "3"], ["3", "9"]]


def test_mc_verify(capsys):
    code, out, _ = run(capsys, "mc-verify", "--group", "O", "--n", "3", "--monomial", "1,2;1,3;2,2;2,3",
                       "--samples", "20000")
    assert code == 0 and out.endswith("PASS")


def test_mc_verify_failure_exit(capsys, monkeypatch):
    import wgcalc.cli as cli

    monkeypatch.setattr(cli, "integrate", lambda *a, **k: Fraction(1))
    code, out, _ = run(capsys, "mc-verify", "--group", "U", "--n", "2", "--monomial", "conj:1,1 plain:1,1",
                       "--samples", "5000")
    assert code == 3 and out.endswith("FAIL")


@pytest.mark.parametrize(
    "argv, code",
    [
        (["fn", "--group", "X", "--type", "2"], 1),
        (["fn", "--group", "U"], 1),
        (["fn", "--group", "U", "--type", "2", "--n", "0"], 1),
        (["integrate", "--group", "O", "--monomial", "1,2;1,x"], 1),
        (["fn", "--group", "COE", "--type", "3", "--n", "1"], 2),
        (["integrate", "--group", "COE", "--n", "1", "--monomial", "conj:1,2 plain:1,2"], 1),
        (["integrate", "--group", "O", "--n", "2", "--monomial", "1,5;1,1"], 1),
        (["gram", "--group", "Sp", "--d", "4", "--n", "8"], 2),
        (["gram", "--group", "COE", "--d", "2"], 1),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert exit_code(argv) == code


def test_syntax_error_reports_column(capsys):
    code, _, err = run(capsys, "integrate", "--group", "O", "--monomial", "1,2;1,3;2,x")
    assert code == 1 and "column 11" in err


def _subprocess(*argv):
    return subprocess.run([sys.executable, "-m", "wgcalc.cli", *argv], capture_output=True)


def test_byte_identical_runs():
    argv = ["mc-verify", "--group", "Sp", "--n", "2", "--monomial", "1,1;N+1,N+1", "--samples", "5000", "--json"]
    a, b = _subprocess(*argv), _subprocess(*argv)
    assert a.returncode == 0 and a.stdout == b.stdout


def test_usage_exit_code_from_argparse():
    assert _subprocess("fn", "--group", "U", "--type", "2", "--n", "zero").returncode == 1
