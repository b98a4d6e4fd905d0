"""Command-line interface: output format, determinism and exit codes."""
import csv
import io
import json
import subprocess
import sys

import pytest

from xx0 import __version__
from xx0.cli import build_parser, emit, format_float, main


def run(args, capsysbinary):
    code = main(args)
    out, err = capsysbinary.readouterr()
    return code, out, err.decode()


def parse_csv(data):
    text = data.decode()
    meta = {}
    lines = text.split("\n")
    body = []
    for ln in lines:
        if ln.startswith("# "):
            k, v = ln[2:].split("=", 1)
            meta[k] = json.loads(v)
        elif ln:
            body.append(ln)
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    return meta, rows[0], rows[1:]


def test_format_float_round_trip():
    for x in (0.1, 1 / 3, 2.718281828459045, 1e-300, -5e300, 123456789.123):
        assert float(format_float(x)) == x
    assert format_float(float("nan")) == "nan" and format_float(float("-inf")) == "-inf"
    assert format_float(True) == "true" and format_float(7) == "7"


def test_emit_empty_is_header_only():
    data = emit({"seed": 1}, ["a", "b"], [])
    assert data == b'# seed=1\na,b\n'


def test_emit_row_round_trip():
    row = [0.1, 1 / 3, 1e-17]
    meta, cols, rows = parse_csv(emit({}, ["x", "y", "z"], [row]))
    assert [float(v) for v in rows[0]] == row


def test_emit_json_and_bad_format():
    obj = json.loads(emit({"seed": 9}, ["x"], [[1.5]], "json"))
    assert obj == {"meta": {"seed": 9}, "columns": ["x"], "rows": [[1.5]]}
    with pytest.raises(ValueError):
        emit({}, [], [], "xml")


def test_tw_row_count(capsysbinary):
    code, out, _ = run(["tw", "--xmin", "-8", "--xmax", "4", "--step", "0.25"], capsysbinary)
    assert code == 0
    meta, cols, rows = parse_csv(out)
    assert cols == ["x", "F", "right_tail", "left_tail"]
    assert len(rows) == 49
    assert "\r" not in out.decode()
    assert meta["tool"] == "xx0" and meta["version"] == __version__ and meta["seed"] == 12345


def test_zfun_cross_method(capsysbinary):
    code, out, _ = run(["zfun", "--model", "selberg", "--t", "1.0", "--nf", "4", "--method", "toeplitz,selberg"],
                       capsysbinary)
    assert code == 0
    _, cols, rows = parse_csv(out)
    assert [r[cols.index("method")] for r in rows] == ["toeplitz", "selberg"]
    assert float(rows[1][cols.index("rel_gap")]) < 1e-10


def test_zfun_gw_methods(capsysbinary):
    code, out, _ = run(["zfun", "--model", "gw", "--t", "1.0", "--nf", "4", "--method", "toeplitz,series,fredholm"],
                       capsysbinary)
    assert code == 0
    _, cols, rows = parse_csv(out)
    assert all(float(r[cols.index("rel_gap")]) < 1e-8 for r in rows)


def test_zfun_discrete(capsysbinary):
    code, out, _ = run(["zfun", "--model", "gw", "--nf", "3", "--N", "9", "--method", "toeplitz,fredholm"],
                       capsysbinary)
    assert code == 0
    _, cols, rows = parse_csv(out)
    assert float(rows[1][cols.index("rel_gap")]) < 1e-8


def test_corr(capsysbinary):
    code, out, _ = run(["corr", "--model", "selberg", "--t", "2", "--nf", "3", "--lam", "2,1",
                        "--method", "toeplitz,selberg"], capsysbinary)
    assert code == 0
    _, cols, rows = parse_csv(out)
    assert float(rows[1][cols.index("rel_gap")]) < 1e-10


@pytest.mark.parametrize("args", [
    ["phase", "--model", "gw-finite", "--grid", "5"],
    ["phase", "--model", "selberg", "--walls"],
    ["phase", "--model", "quadratic", "--n-min", "1", "--n-max", "3", "--grid", "5"],
    ["expand", "--N", "11"],
    ["nibm", "--nf", "2", "--t", "3", "--samples", "2000"],
])
def test_subcommands_succeed(args, capsysbinary):
    code, out, _ = run(args, capsysbinary)
    assert code == 0
    _, cols, rows = parse_csv(out)
    assert rows


def test_json_contains_seed(capsysbinary):
    code, out, _ = run(["expand", "--N", "5", "--format", "json", "--seed", "77"], capsysbinary)
    assert code == 0
    obj = json.loads(out)
    assert obj["meta"]["seed"] == 77 and obj["meta"]["config"]["N"] == 5


def test_deterministic_bytes(capsysbinary):
    args = ["nibm", "--nf", "2", "--t", "4", "--samples", "5000", "--seed", "3"]
    _, a, _ = run(args, capsysbinary)
    _, b, _ = run(args + ["--threads", "3"], capsysbinary)
    _, c, _ = run(args, capsysbinary)
    assert a == c
    # the thread cap is recorded in the config but never changes the records
    assert parse_csv(a)[2] == parse_csv(b)[2]


def test_threads_env(monkeypatch):
    monkeypatch.setenv("XX0_THREADS", "5")
    assert build_parser().parse_args(["expand"]).threads == 5


def test_out_file(tmp_path, capsysbinary):
    p = tmp_path / "o.csv"
    assert main(["expand", "--N", "3", "--out", str(p)]) == 0
    assert p.read_bytes().startswith(b"# config=")


@pytest.mark.parametrize("args", [
    ["expand", "--N", "4"],
    ["zfun", "--method", "bogus"],
    ["zfun", "--model", "gw", "--method", "selberg"],
    ["tw", "--xmin", "-20"],
    ["nibm", "--threads", "0"],
    ["nosuch"],
    ["zfun", "--t", "abc"],
])
def test_validation_errors_exit_2(args, capsysbinary):
    code, _, err = run(args, capsysbinary)
    assert code == 2
    assert err


def test_numerical_failure_exit_1(capsysbinary, monkeypatch):
    # rejection budget exhausted (budget lowered so the test is quick)
    import xx0.nibm
    monkeypatch.setattr(xx0.nibm, "REJECTION_BUDGET", 1000)
    code, _, err = run(["nibm", "--nf", "8", "--t", "30", "--samples", "10", "--no-exact"], capsysbinary)
    assert code == 1 and "numerical failure" in err


def test_help_lists_defaults():
    for sub in ("zfun", "corr", "tw", "phase", "nibm", "expand", "validate"):
        r = subprocess.run([sys.executable, "-m", "xx0", sub, "--help"], capture_output=True, text=True)
        assert r.returncode == 0 and "default" in r.stdout
