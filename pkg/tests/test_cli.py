import json
import subprocess
import sys
from decimal import Decimal, localcontext

import pytest

from stirling_series.cli import main, render_text

COMMANDS = [
    ["bernoulli", "--max-k", "12"],
    ["coeffs", "--system", "--K", "5"],
    ["coeffs", "--closed-form"],
    ["coeffs", "--printed", "--K", "3"],
    ["coeffs", "--as-published", "--K", "5"],
    ["eval", "--form", "stirling", "--n", "10", "--terms", "3", "--base", "ten"],
    ["eval", "--form", "demoivre", "--n", "5/2", "--terms", "2"],
    ["truncate", "--n", "2", "--max-terms", "10"],
    ["wallis", "--n", "10", "--what", "product"],
    ["wallis", "--n", "100", "--what", "pi"],
    ["wallis", "--n", "1000", "--what", "constant"],
    ["schaar", "--a", "5", "--m", "2", "--tol", "1e-9"],
    ["table", "--start", "10", "--stop", "50", "--step", "10"],
    ["audit", "--edition-a", "1730", "--edition-b", "1756"],
    ["checksum", "123", "6.55976303287678"],
    ["checksum", "--edition", "1730"],
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def body(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


def test_bernoulli_lists_fractions(capsys):
    code, out, _ = run(["bernoulli", "--max-k", "12"], capsys)
    assert code == 0
    rows = dict(ln.split() for ln in body(out))
    assert rows["10"] == "5/66"
    assert rows["12"] == "-691/2730"


def test_eval_base_ten(capsys):
    code, out, _ = run(["eval", "--form", "stirling", "--n", "10", "--terms", "3", "--base", "ten"], capsys)
    assert code == 0
    rows = dict(ln.split() for ln in body(out))
    assert abs(Decimal(rows["value"]) - Decimal("6.55976303")) < Decimal("1e-8")
    assert Decimal(rows["envelope_bound"]) < Decimal("1e-10")


def test_audit_lines(capsys):
    code, out, _ = run(["audit", "--edition-a", "1730", "--edition-b", "1756"], capsys)
    assert code == 0
    lines = body(out)
    assert len(lines) == 20
    assert lines[0].split()[1] == "+1e-5"


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a))
def test_json_regenerates_text(argv, capsys):
    code, text, _ = run(argv, capsys)
    assert code == 0
    code, js, _ = run(argv + ["--format", "json"], capsys)
    payload = json.loads(js)
    assert isinstance(payload, dict)
    assert set(payload) == {"command", "columns", "rows", "notes"}
    assert render_text(payload) == text
    code, csv_out, _ = run(argv + ["--format", "csv"], capsys)
    assert csv_out.splitlines()[0] == ",".join(payload["columns"])
    assert len(csv_out.splitlines()) == len(payload["rows"]) + 1


@pytest.mark.parametrize("argv", [
    ["eval", "--n", "7", "--terms", "4"],
    ["eval", "--form", "stirling", "--n", "3", "--terms", "2", "--base", "10"],
    ["wallis", "--n", "50", "--what", "pi"],
])
def test_precision_doubling_agrees(argv, capsys):
    p = 15
    _, a, _ = run(argv + ["--precision", str(p), "--format", "json"], capsys)
    _, b, _ = run(argv + ["--precision", str(2 * p), "--format", "json"], capsys)
    ra, rb = json.loads(a)["rows"], json.loads(b)["rows"]
    for x, y in zip(ra, rb):
        with localcontext() as ctx:
            ctx.prec = p
            assert Decimal(x[1]) == +Decimal(y[1])


def test_precision_env_and_flag(monkeypatch, capsys):
    monkeypatch.setenv("STIRLING_PRECISION", "12")
    _, out, _ = run(["eval", "--n", "10", "--format", "json"], capsys)
    v = json.loads(out)["rows"][0][1]
    assert len(v.replace(".", "").lstrip("0")) == 12
    _, out, _ = run(["eval", "--n", "10", "--format", "json", "--precision", "20"], capsys)
    v = json.loads(out)["rows"][0][1]
    assert len(v.replace(".", "").lstrip("0")) == 20


@pytest.mark.parametrize("argv,flag", [
    (["eval", "--n", "abc"], "--n"),
    (["eval"], "--n"),
    (["wallis", "--n", "10", "--what", "tau"], "--what"),
    (["eval", "--n", "3", "--base", "7"], "--base"),
    (["bernoulli", "--max-k", "3", "--frobnicate"], "--frobnicate"),
    (["coeffs", "--printed", "--closed-form"], "--closed-form"),
])
def test_usage_errors_exit_2(argv, flag, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert flag in err


@pytest.mark.parametrize("argv", [
    ["eval", "--n", "0"],
    ["schaar", "--a", "-1"],
    ["table", "--start", "50", "--stop", "10"],
    ["checksum", "12a"],
])
def test_computation_errors_exit_1(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1
    assert out == ""
    assert "error" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stirling_series.cli", "coeffs", "--K", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "-1/12" in proc.stdout
