import json

import numpy as np
import pytest

from darbouxkit.cli import UsageError, main, parse_mode
from darbouxkit.solitons import Mode


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0], np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])


def test_parse_mode():
    assert parse_mode("k=1.5,x0=-2") == Mode(1.5, -2.0)
    assert parse_mode("a=2") == Mode(2.0, 0.0)
    with pytest.raises(UsageError):
        parse_mode("x0=1")
    with pytest.raises(UsageError):
        parse_mode("k=one")


def test_soliton_csv_schema_and_peak(tmp_path, capsys):
    out = tmp_path / "m.csv"
    code, _, _ = run(
        capsys, "soliton", "--family", "akns", "--a0", "0.5", "--mode", "k=1,x0=0",
        "--grid", "a=-1:1:201,b=0:0:1", "--field", "Mx", "--out", str(out),
    )
    assert code == 0
    header, data = read_csv(out)
    assert header == "a,b,value"
    assert data.shape == (201, 3)
    assert abs(data[:, 2].max() - 1.0) <= 1e-6
    assert "\r" not in out.read_text()


def test_soliton_output_is_byte_identical(tmp_path, capsys):
    args = ["soliton", "--family", "nlbq", "--solitons", "2", "--a0", "1", "--mode", "a=2", "--mode", "a=3",
            "--grid", "a=-3:3:13,b=-3:3:13"]
    p1, p2 = tmp_path / "1.csv", tmp_path / "2.csv"
    assert run(capsys, *args, "--out", str(p1))[0] == 0
    assert run(capsys, *args, "--out", str(p2))[0] == 0
    assert p1.read_bytes() == p2.read_bytes()
    _, data = read_csv(p1)
    assert data.shape == (169, 3) and np.all(np.isfinite(data))


def test_soliton_to_stdout_row_major(capsys):
    code, out, _ = run(capsys, "soliton", "--family", "akns", "--a0", "0.5", "--grid", "a=0:1:2,b=0:1:3")
    assert code == 0
    rows = out.splitlines()[1:]
    assert [r.split(",")[:2] for r in rows][:3] == [["0.0", "0.0"], ["0.0", "0.5"], ["0.0", "1.0"]]


def test_singular_spec_exits_2(capsys):
    code, _, err = run(capsys, "soliton", "--family", "akns", "--a0", "0.5", "--mode", "k=0")
    assert code == 2
    assert "k1 != 0" in err


def test_mode_count_mismatch_exits_2(capsys):
    code, _, err = run(capsys, "soliton", "--family", "akns", "--solitons", "2", "--a0", "0.5", "--mode", "k=1")
    assert code == 2 and "--solitons" in err


def test_bad_grid_exits_2(capsys):
    code, _, _ = run(capsys, "soliton", "--family", "akns", "--a0", "0.5", "--grid", "a=0:1")
    assert code == 2


def test_argparse_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["soliton", "--family", "kdv", "--a0", "1"])
    assert info.value.code == 2


def test_verify_builtin_passes(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "verify", "--builtin", "akns-two-soliton-full", "--out", str(out))
    assert code == 0
    assert "== akns-two-soliton-full: PASS" in text
    rep = json.loads(out.read_text())
    assert rep["pass"] is True and len(rep["entries"]) == 8


def test_verify_negative_control_exits_1(capsys):
    code, text, _ = run(capsys, "verify", "--builtin", "negative-control-lambda")
    assert code == 1
    assert "FAIL" in text and "[AKNS_LAX_X]" in text


def test_verify_missing_file_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "verify", "--scenario", str(tmp_path / "none.yaml"))
    assert code == 2 and "not found" in err


def test_verify_bad_scenario_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.yaml"
    p.write_text("name: bad\nfamily: akns\nwhatever: 1\n")
    code, _, err = run(capsys, "verify", "--scenario", str(p))
    assert code == 2 and "whatever" in err


def test_verify_scenario_file(tmp_path, capsys):
    p = tmp_path / "s.yaml"
    p.write_text("name: s\nfamily: nlbq\nseed: {a0: 1}\nmodes: [{a: 2}]\nequations: [NLBQ_SYS]\n")
    code, text, _ = run(capsys, "verify", "--scenario", str(p))
    assert code == 0 and "[NLBQ_SYS]" in text


def test_parse_check_tree(capsys):
    code, out, _ = run(capsys, "parse-check", "--expr", "exp(2*x)")
    assert code == 0
    assert "Exp\n  Mul" in out


def test_parse_check_syntax_error(capsys):
    code, _, err = run(capsys, "parse-check", "--expr", "x +")
    assert code == 1
    assert "offset 3" in err
    assert err.rstrip().endswith("   ^")


def test_parse_check_compare(capsys):
    code, out, _ = run(capsys, "parse-check", "--expr", "exp(x)*exp(y)", "--compare", "exp(x+y)", "--eval-at", "0,0")
    assert code == 0 and "EQUAL" in out
    code, out, _ = run(capsys, "parse-check", "--expr", "exp(x)*exp(y)", "--compare", "exp(x-y)", "--eval-at", "0,0")
    assert code == 1 and "DIFFERENT" in out


def test_parse_check_compare_needs_point(capsys):
    assert run(capsys, "parse-check", "--expr", "x", "--compare", "x")[0] == 2
    assert run(capsys, "parse-check", "--expr", "x", "--eval-at", "1")[0] == 2
