import json
import math
import subprocess
import sys

import pytest

from xwitness.cli import main, parse_angle
from xwitness.io import dumps, xmatrix_to_dict
from xwitness.witness import construct_optimal
from xwitness.xcore import XMatrix, build
from xwitness.xstate import ghz, maximally_mixed


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def w3_file(tmp_path):
    path = tmp_path / "w3.json"
    path.write_text(dumps(xmatrix_to_dict(construct_optimal(3))))
    return str(path)


def inline(X):
    return json.dumps(xmatrix_to_dict(X))


@pytest.mark.parametrize("text,value", [
    ("pi", math.pi), ("-pi/2", -math.pi / 2), ("3*pi/4", 3 * math.pi / 4),
    ("0.5", 0.5), ("2pi", 2 * math.pi),
])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


def test_classify_witness(capsys, w3_file):
    code, out, _ = run(capsys, "classify", w3_file)
    rep = json.loads(out)
    assert code == 0
    assert (rep["psd"], rep["gew"], rep["optimal"], rep["decomposable"]) == (False, True, True, True)


def test_classify_states(capsys):
    code, out, _ = run(capsys, "classify", inline(maximally_mixed(3)), "--role", "state")
    assert code == 0 and json.loads(out)["label"] == "fully-bi-separable"
    code, out, _ = run(capsys, "classify", inline(ghz(3)), "--role", "state")
    assert json.loads(out)["label"] == "genuinely-entangled"


def test_classify_text_format(capsys, w3_file):
    code, out, _ = run(capsys, "classify", w3_file, "--format", "text")
    assert code == 0 and out.splitlines()[0].split()[0] == "000"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "classify", "{not json")[0] == 3
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 3
    assert run(capsys, "classify", '{"n": 3, "entries": [{"index": "100"}]}')[0] == 3
    code, _, err = run(capsys, "classify", inline(build(2, {"01": (-1, 1, 0)})))
    assert code == 2 and "01" in err
    assert run(capsys, "optimal", "--n", "3", "--scales", "0")[0] == 2


def test_optimal(capsys):
    code, out, _ = run(capsys, "optimal")
    assert code == 0
    from xwitness.io import xmatrix_from_dict
    assert xmatrix_from_dict(json.loads(out)) == construct_optimal(3)
    code, out, _ = run(capsys, "optimal", "--n", "2", "--i0", "01", "--theta", "pi/2",
                       "--scales", "2", "--r", "3")
    W = xmatrix_from_dict(json.loads(out))
    assert W.n == 2 and W.triple("01")[2] == pytest.approx(3j) and W.triple("00")[:2] == (2, 4.5)


def test_decompose(capsys, w3_file):
    boundary = inline(XMatrix(2, (1, 0), (1, 0), (0, 1)))
    code, out, _ = run(capsys, "decompose", boundary)
    cert = json.loads(out)
    assert code == 0 and len(cert["parts"]) == 1 and cert["parts"][0]["subset"] == [2]
    code, out, _ = run(capsys, "decompose", w3_file, "--subset", "2")
    split = json.loads(out)
    assert code == 0 and split["subset"] == [2] and split["residual"] <= 1e-10
    code, out, err = run(capsys, "decompose", inline(XMatrix(2, (0, 0), (0, 0), (1, 0))))
    assert code == 1 and "-1" in err and json.loads(out)["margin"] == -1


def test_decompose_subset_needs_pair_inequality(capsys):
    bad = inline(build(3, {"000": (0, 0, 1), "001": (0, 0, 1)}))
    assert run(capsys, "decompose", bad, "--subset", "2,3")[0] == 1


def test_detect(capsys, w3_file):
    code, out, _ = run(capsys, "detect", inline(ghz(3)), "--witness", w3_file, "--format", "text")
    assert code == 0 and "DETECTED: genuinely entangled" in out
    assert "pairing: -1" in out
    code, out, _ = run(capsys, "detect", inline(ghz(3)), "--epsilon", "0.001")
    rep = json.loads(out)
    assert rep["detected"] and rep["index"] == "000"
    code, _, _ = run(capsys, "detect", inline(ghz(2)), "--witness", w3_file)
    assert code == 2
    # zero diagonals without --epsilon need regularization
    assert run(capsys, "detect", inline(ghz(3)))[0] == 2


def test_detect_biseparable_is_not_flagged(capsys, w3_file):
    code, out, _ = run(capsys, "detect", inline(maximally_mixed(3)), "--witness", w3_file)
    rep = json.loads(out)
    assert code == 0 and not rep["detected"] and rep["pairing"] >= 0


def test_export(capsys, w3_file):
    code, out, _ = run(capsys, "export", w3_file)
    dense = json.loads(out)["dense"]
    assert len(dense) == 8 and dense[0][7] == [-1.0, 0.0]


def test_out_flag(capsys, tmp_path, w3_file):
    target = tmp_path / "out.json"
    assert run(capsys, "classify", w3_file, "--out", str(target))[0] == 0
    assert json.loads(target.read_text())["gew"]


def test_stdin(monkeypatch, capsys):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO(inline(construct_optimal(3))))
    code, out, _ = run(capsys, "classify", "-")
    assert code == 0 and json.loads(out)["optimal"]


def test_fuzz_deterministic_and_fault(capsys, monkeypatch):
    code, first, _ = run(capsys, "fuzz", "--n", "2", "--trials", "10", "--seed", "5")
    _, second, _ = run(capsys, "fuzz", "--n", "2", "--trials", "10", "--seed", "5")
    assert code == 0 and first == second and json.loads(first)["ok"]
    code, out, _ = run(capsys, "fuzz", "--n", "2", "--trials", "5", "--inject-fault")
    assert code == 1 and json.loads(out)["suites"]["certificate"]["failures"] > 0
    monkeypatch.setenv("XWITNESS_SEED", "5")
    _, env_run, _ = run(capsys, "fuzz", "--n", "2", "--trials", "10")
    assert env_run == first


def test_verify(capsys, w3_file):
    code, out, _ = run(capsys, "verify", w3_file, "--seed", "1")
    rep = json.loads(out)
    assert code == 0 and rep["block_positive"] and rep["agrees"]


def test_module_entry_point(w3_file):
    res = subprocess.run([sys.executable, "-m", "xwitness", "classify", w3_file],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["gew"]
