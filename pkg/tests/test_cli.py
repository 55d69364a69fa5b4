import json

import pytest

from toffbound.cli import EXIT_CHECK, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main, parse_range, UsageError


@pytest.fixture
def circuits(tmp_path):
    (tmp_path / "toffoli.rc").write_text("bits 3\ntoffoli 0 1 2\n")
    (tmp_path / "cnots.rc").write_text("# Toffoli-free\nbits 6\ncnot 0 1\nnot 2\nperm2 3 4 2 0 3 1\ncnot 5 0\nperm1 1 1 0\n")
    (tmp_path / "broken.rc").write_text("bits 3\ntoffoli 0 1 3\n")
    return tmp_path


def test_parse_range():
    assert parse_range("500:2000:20")[-1] == 2000
    assert parse_range("10:25:10") == [10, 20]
    assert parse_range("7") == [7]
    for bad in ["a:b", "5:1:1", "1:5:0"]:
        with pytest.raises(UsageError):
            parse_range(bad)


def test_verify(capsys):
    assert main(["verify", "--max-n", "4", "--n-random", "20"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 3


def test_verify_mutation(capsys):
    assert main(["verify", "--max-n", "2", "--debug-reverse-orientation"]) == EXIT_CHECK
    assert "FAIL  nonlocal-toffoli" in capsys.readouterr().out


def test_verify_json(capsys):
    assert main(["verify", "--max-n", "3", "--format", "json"]) == EXIT_OK
    checks = json.loads(capsys.readouterr().out)["checks"]
    wht = [c for c in checks if c["name"] == "wht-spectrum"][0]
    assert wht["cases"] == 300


def test_bound_toffoli_test_state(circuits, capsys):
    rc = main(["bound", "--circuit", str(circuits / "toffoli.rc"), "--state", "paper-toffoli", "--format", "json"])
    assert rc == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["toffoli_lower_bound"] == pytest.approx(0.5, abs=1e-9)
    assert d["e_in"] == pytest.approx(2, abs=1e-9) and d["e_out"] == pytest.approx(3, abs=1e-9)
    assert d["sound"] is True


def test_bound_toffoli_free(circuits, capsys):
    rc = main(["bound", "--circuit", str(circuits / "cnots.rc"), "--state", "dicke:6,2", "--format", "json"])
    assert rc == EXIT_OK
    assert json.loads(capsys.readouterr().out)["toffoli_lower_bound"] == pytest.approx(0, abs=1e-9)


def test_bound_errors(circuits, capsys):
    assert main(["bound", "--circuit", str(circuits / "broken.rc"), "--state", "basis:000"]) == EXIT_PARSE
    assert "line 2" in capsys.readouterr().err
    assert main(["bound", "--circuit", str(circuits / "missing.rc"), "--state", "basis:000"]) == EXIT_PARSE
    assert main(["bound", "--circuit", str(circuits / "toffoli.rc"), "--state", "bogus:1"]) == EXIT_PARSE
    assert main(["bound", "--circuit", str(circuits / "toffoli.rc")]) == EXIT_USAGE
    assert main(["bound", "--state", "basis:000"]) == EXIT_USAGE
    assert main(["bound", "--function", "shannon:10,0.8", "--state", "dicke:10,2"]) == EXIT_PARSE
    assert main(["frobnicate"]) == EXIT_USAGE


def test_bound_search_deterministic(capsys, tmp_path):
    args = ["bound", "--function", "shannon:20,0.8", "--search", "--seed", "7", "--budget", "200", "--format", "json"]
    assert main(args + ["-o", str(tmp_path / "a.json")]) == EXIT_OK
    assert main(args + ["-o", str(tmp_path / "b.json")]) == EXIT_OK
    a = (tmp_path / "a.json").read_bytes()
    assert a == (tmp_path / "b.json").read_bytes()
    assert json.loads(a)["toffoli_lower_bound"] > 3.4


def test_shannon_csv(capsys, tmp_path):
    assert main(["shannon", "--p", "0.8", "--n", "10:60:5", "--format", "csv"]) == EXIT_OK
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0] == "n,k,e_in,e_out,bound,e_out_mode"
    assert len(lines) == 1 + 11 + 1
    summary = json.loads(lines[-1])
    assert summary["rows"] == 11 and summary["slope"] > 0
    out_path = tmp_path / "c.csv"
    main(["shannon", "--p", "0.8", "--n", "10:60:5", "--format", "csv", "-o", str(out_path)])
    assert out_path.read_text() == out


def test_shannon_non_integral(capsys):
    assert main(["shannon", "--p", "0.8", "--n", "7:10:1"]) == EXIT_USAGE
    assert "not an integer" in capsys.readouterr().err


def test_shannon_p_half(capsys):
    assert main(["shannon", "--p", "0.5", "--n", "10:100:10", "--format", "json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["slope"] == pytest.approx(0.27999279813568, abs=1e-6)
    assert all(r["e_out"] == 0 for r in d["data"])


def test_shannon_exact_mode(capsys):
    assert main(["shannon", "--p", "0.8", "--n", "5:20:5", "--mode", "exact", "--format", "json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["slope"] is None and d["e_out_mode"] == "exact"
