import csv
import io
import subprocess
import sys

import pytest

from weinstein.cli import CLT_HEADER, SWEEP_HEADER, VERIFY_HEADER, fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.fixture(scope="module")
def default_verify(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify") / "verify.csv"
    buf = io.StringIO()
    old, sys.stdout = sys.stdout, buf
    try:
        code = main(["verify", "--out", str(out)])
    finally:
        sys.stdout = old
    return code, buf.getvalue(), rows_of(out.read_text())


def test_fmt_round_trips():
    x = 0.1 + 0.2
    assert float(fmt(x)) == x
    assert fmt(3) == "3" and fmt("mass") == "mass"


def test_verify_default_reports_every_check(default_verify):
    code, text, rows = default_verify
    assert rows[0] == VERIFY_HEADER
    body = rows[1:]
    assert len(body) >= 25
    assert {r[4] for r in body} <= {"PASS", "FAIL"}
    failed = [r[1] for r in body if r[4] == "FAIL"]
    # the stated Young constant is violated for r < 2; everything else holds
    assert failed == ["young_stated_constant"]
    assert code == 1
    assert f"{len(body)} checks, {len(body) - 1} passed, 1 failed" in text


def test_verify_covers_all_modules(default_verify):
    modules = {r[0] for r in default_verify[2][1:]}
    assert {"special", "quadrature", "core", "hermite", "inequality", "clt"} <= modules


def test_verify_tight_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--tol", "1e-30")
    assert code == 1
    assert "FAIL" in out


def test_sweep_single_row(capsys):
    code, out, _ = run(capsys, "sweep", "--p-min", "2", "--p-max", "2", "--steps", "1", "--n-functions", "1")
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == SWEEP_HEADER
    assert len(rows) == 2
    row = dict(zip(SWEEP_HEADER, rows[1]))
    assert float(row["p"]) == 2.0 and float(row["q"]) == 2.0
    assert float(row["ratio"]) == pytest.approx(1.0, abs=1e-6)
    assert float(row["bound_constant"]) == 1.0


def test_sweep_default_layout(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "hermite", "--n-functions", "3", "--seed", "5")
    assert code == 0
    rows = rows_of(out)[1:]
    assert len(rows) == 15
    assert [float(r[2]) for r in rows[::3]] == pytest.approx([1.1, 1.325, 1.55, 1.775, 2.0])
    assert [r[5] for r in rows[:3]] == ["5", "6", "7"]
    assert all(float(r[8]) <= 1 + 1e-5 for r in rows)


def test_sweep_rerun_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "sweep", "--family", "RANDOM", "--n-functions", "4", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--p-min", "0.9"],
        ["sweep", "--p-max", "2.5"],
        ["sweep", "--p-min", "1.8", "--p-max", "1.2"],
        ["sweep", "--family", "UNIFORM"],
        ["sweep", "--alpha", "-0.6"],
        ["sweep", "--d", "0"],
        ["sweep", "--orders", "64,48"],
        ["transform", "--function", "sinc", "--points", "-"],
        ["clt", "--n", "a,b"],
        ["bogus"],
        [],
    ],
)
def test_configuration_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_transform_at_origin(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text("# origin then a point\n0 0\n1.0, 0.5\n")
    code, out, _ = run(capsys, "transform", "--function", "gaussian", "--points", str(pts))
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == ["lambda_1", "lambda_2", "re", "im"]
    assert len(rows) == 3
    assert float(rows[1][2]) == pytest.approx(1.0, abs=1e-10)
    assert float(rows[1][3]) == 0.0
    assert float(rows[2][2]) == pytest.approx(2.718281828459045 ** (-0.625), rel=1e-8)


def test_transform_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("0.5 0.5\n"))
    code, out, _ = run(capsys, "transform", "--function", "gaussian_hermite:1,1", "--points", "-")
    assert code == 0 and len(rows_of(out)) == 2


def test_transform_empty_points(tmp_path, capsys):
    pts = tmp_path / "empty.txt"
    pts.write_text("")
    code, out, _ = run(capsys, "transform", "--function", "gaussian", "--points", str(pts))
    assert code == 0
    assert rows_of(out) == [["lambda_1", "lambda_2", "re", "im"]]


def test_transform_wrong_arity(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text("1 2 3\n")
    assert run(capsys, "transform", "--function", "gaussian", "--points", str(pts))[0] == 2


def test_clt_output(capsys):
    code, out, _ = run(capsys, "clt", "--n", "4,8", "--moments", "0,2")
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == CLT_HEADER
    specs = [(r[0], r[1]) for r in rows[1:]]
    assert specs == [("4", "mass"), ("4", "x1^2"), ("4", "x2^2"), ("8", "mass"), ("8", "x1^2"), ("8", "x2^2")]
    assert all(float(r[4]) <= 1e-10 for r in rows[1:])


def test_clt_resource_cap_exit_3(capsys):
    code, _, err = run(capsys, "clt", "--n", "64", "--moments", "2", "--cap", "16")
    assert code == 3
    assert "resource" in err


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# test\nalpha = 1.5\nseed = 11\n")
    _, out, _ = run(capsys, "sweep", "--config", str(cfg), "--steps", "1", "--p-min", "1.5", "--n-functions", "1")
    row = dict(zip(SWEEP_HEADER, rows_of(out)[1]))
    assert row["alpha"] == "1.5" and row["seed"] == "11"
    _, out, _ = run(
        capsys, "sweep", "--config", str(cfg), "--alpha", "0.25", "--steps", "1", "--p-min", "1.5", "--n-functions", "1"
    )
    row = dict(zip(SWEEP_HEADER, rows_of(out)[1]))
    assert row["alpha"] == "0.25" and row["seed"] == "11"


def test_bad_config_file_exit_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "sweep", "--config", str(cfg))[0] == 2
    assert run(capsys, "sweep", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "weinstein", "clt", "--n", "2", "--moments", "0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == ",".join(CLT_HEADER)
