import json
import subprocess
import sys
from pathlib import Path

import pytest

from critgroups import cli
from critgroups.linalg import AbelianGroup

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "name,text",
    [
        ("intro_G.json", "Z6 = Z2 ⊕ Z3"),
        ("intro_Gpm.json", "Z2 ⊕ Z3 ⊕ Z9"),
        ("tree.json", "K: trivial"),
    ],
)
def test_critgroup(capsys, name, text):
    code, out, _ = run(capsys, "critgroup", SAMPLES / name)
    assert code == 0 and text in out


def test_cover_verify(capsys):
    code, out, _ = run(capsys, "cover", SAMPLES / "octahedron.json", "--verify")
    assert code == 0 and "384 = 192 × 2" in out and "PASS" in out


def test_cover_exactness_json(capsys):
    code, out, _ = run(capsys, "cover", SAMPLES / "intro_voltage.json", "--exactness", "--json")
    assert code == 0
    data = json.loads(out)
    rows = {r["name"]: r for r in data["results"]}
    assert rows["order identity"]["computed"] == "324 = 54 × 6"
    assert AbelianGroup.from_json(rows["K(total)"]["computed"]) == AbelianGroup.from_cyclic([3, 3, 36])
    assert all(r["pass"] is not False for r in data["results"]) and data["passed"]
    assert "timing" not in data


def test_double_verify(capsys):
    code, out, _ = run(capsys, "double", SAMPLES / "intro_G.json", SAMPLES / "intro_Gpm.json", "--verify")
    assert code == 0 and "case: CASE2" in out and "status: PASS" in out


def test_double_exactness_swapped(capsys):
    code, out, _ = run(
        capsys, "double", SAMPLES / "intro_Gpm.json", SAMPLES / "intro_G.json", "--exactness"
    )
    assert code == 0 and "roles swapped" in out and "middle homology: trivial" in out


def test_families(capsys):
    code, out, _ = run(capsys, "families", "crown", "--n", 5, "--k", 2)
    assert code == 0 and "exponent n-2" in out
    code, out, _ = run(capsys, "families", "PATH", "--grid")
    assert code == 0 and out.count("  PASS") == 3


def test_snf(capsys):
    code, out, _ = run(capsys, "snf", SAMPLES / "matrix.json", "--json")
    data = json.loads(out)
    assert code == 0 and data["results"][0]["computed"] == [6, 0]


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--random", 25, "--seed", 7)
    assert code == 0 and out.count("  PASS") == 25
    code, out, _ = run(capsys, "oracle", SAMPLES / "intro_Gpm.json")
    assert code == 0 and "bases 54, |K| 54" in out


def test_json_is_deterministic(capsys):
    args = ("double", SAMPLES / "intro_G.json", SAMPLES / "intro_Gpm.json", "--exactness", "--json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    _, a, _ = run(capsys, "oracle", "--random", 10, "--seed", 3, "--json")
    _, b, _ = run(capsys, "oracle", "--random", 10, "--seed", 3, "--json")
    assert a == b


def test_group_json_roundtrip(capsys):
    _, out, _ = run(capsys, "critgroup", SAMPLES / "intro_Gpm.json", "--json")
    data = json.loads(out)
    g = AbelianGroup.from_json(data["results"][0]["computed"])
    assert g == AbelianGroup.from_cyclic([2, 3, 9])


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "critgroup", bad)[0] == 2
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"vertices": 2, "edges": [{"id": 0, "tail": 0}]}))
    assert run(capsys, "critgroup", missing)[0] == 2
    assert run(capsys, "critgroup", tmp_path / "absent.json")[0] == 2
    assert run(capsys, "cover", SAMPLES / "intro_G.json")[0] == 2
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"vertices": 2, "edges": [{"id": 0, "tail": 0, "head": 0, "kind": "LINK", "sign": 1}]}))
    assert run(capsys, "critgroup", invalid)[0] == 3
    assert run(capsys, "families", "crown", "--n", 4, "--k", 1)[0] == 3
    assert run(capsys, "oracle", SAMPLES / "intro_Gpm.json", "--cap", 3)[0] == 3
    assert run(capsys, "no-such-command")[0] == 2


def test_check_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "matrix_tree_count", lambda g, cap: -1)
    code, out, _ = run(capsys, "oracle", SAMPLES / "intro_Gpm.json")
    assert code == 1 and "FAIL" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "critgroups", "critgroup", str(SAMPLES / "intro_G.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and "Z6 = Z2 ⊕ Z3" in proc.stdout
