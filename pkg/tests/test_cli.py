import json
import subprocess
import sys

import pytest

from conftest import bad_patch, varpi
from posetmap.cli import main, parse_points
from posetmap.pmap import compose, identity, identity_off, unit
from posetmap.serialize import dump, load

SWAP12 = (1, 0, 2)


@pytest.fixture
def files(tmp_path):
    out = {}
    maps = {
        "w": varpi(2),
        "uw": compose(unit(SWAP12), varpi(2)),
        "e": identity_off(3, [(1, 1, 1)]),
        "bad": bad_patch(),
        "id2": identity(2),
    }
    for name, m in maps.items():
        path = tmp_path / f"{name}.json"
        dump(m, str(path))
        out[name] = str(path)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and doc["exit_code"] == code
    return code, doc


def test_validate(capsys, files):
    assert run(capsys, "validate", files["w"])[0] == 0
    code, out, err = run(capsys, "validate", files["bad"])
    assert code == 1 and "(1, 1, 1) (1, 1, 2)" in err
    code, doc = run_json(capsys, "validate", files["bad"])
    assert doc["witnesses"]["monotone"] == [[1, 1, 1], [1, 1, 2]]
    code, doc = run_json(capsys, "validate", "--window", "8", files["w"])
    assert code == 0 and doc["oracle_agrees"]


def test_compose_and_equals(capsys, files, tmp_path):
    out = str(tmp_path / "ww.json")
    assert run(capsys, "compose", files["w"], files["w"], "-o", out)[0] == 0
    assert load(out) == compose(varpi(2), varpi(2))
    code, doc = run_json(capsys, "compose", "--window", "7", files["w"], files["uw"])
    assert code == 0 and doc["result"]["dim"] == 3
    assert run(capsys, "equals", files["w"], files["w"])[0] == 0
    code, _, err = run(capsys, "equals", files["w"], files["uw"])
    assert code == 1 and "differ at" in err
    assert run(capsys, "equals", "--window", "6", files["w"], files["uw"])[0] == 1


def test_structure_commands(capsys, files):
    code, doc = run_json(capsys, "normalize", files["uw"])
    assert code == 0 and doc["sigma"] == [2, 1, 3]
    code, doc = run_json(capsys, "n-alpha", files["w"])
    assert code == 0 and doc["n_alpha"] == 3
    code, doc = run_json(capsys, "axis-perm", files["uw"])
    assert doc["perm"] == [2, 1, 3]
    assert run(capsys, "idempotent", files["e"])[0] == 0
    assert run(capsys, "idempotent", files["w"])[0] == 1
    code, doc = run_json(capsys, "complements", files["w"])
    assert code == 0 and len(doc["dom"]) == 4 and doc["ran"] == []
    code, doc = run_json(capsys, "class", "L", files["w"])
    assert code == 0 and doc["size"] == 6


def test_green(capsys, files):
    code, out, _ = run(capsys, "green", "L", files["uw"], files["w"])
    assert code == 0 and "[2, 1, 3]" in out
    code, doc = run_json(capsys, "green", "D", files["e"], files["w"])
    assert code == 1 and not doc["related"]
    assert run(capsys, "green", "X", files["w"], files["w"])[0] == 2
    assert run(capsys, "green", "L", files["id2"], files["id2"])[0] == 2


def test_order_commands(capsys):
    code, out, _ = run(capsys, "upset-cofinite", "(2,1,1) (1,3,1) (1,1,4)")
    assert code == 0 and "complement size 6" in out
    assert run(capsys, "upset-cofinite", "(2,2,1) (1,1,3)")[0] == 1
    assert run(capsys, "upset-cofinite", "garbage")[0] == 2
    assert run(capsys, "upset-cofinite", "(1,1,1) (2,1,1)")[0] == 2
    code, doc = run_json(capsys, "chain-cover", "2", "3", "4")
    assert code == 0 and doc["count"] == 9
    assert run(capsys, "chain-cover", "1", "3", "4")[0] == 2
    assert parse_points("(1, 2) (3,4)") == [(1, 2), (3, 4)]


def test_eggbox_and_selftest(capsys, tmp_path, monkeypatch):
    dot = str(tmp_path / "egg.dot")
    code, doc = run_json(capsys, "eggbox", "4", "--dot", dot)
    assert code == 0 and doc["count"] >= 1
    assert all(c["rows"] == 6 and c["cols"] == 6 for c in doc["classes"])
    assert open(dot).read().startswith("digraph eggbox")
    monkeypatch.setenv("POSETMAP_SEED", "77")
    code, doc = run_json(capsys, "selftest", "--seeds", "3")
    assert code == 0 and doc["seed"] == 77


def test_format_and_usage_errors(capsys, tmp_path, files):
    broken = tmp_path / "broken.json"
    broken.write_text('{"dim": 3,\n "pieces": [1]}')
    code, _, err = run(capsys, "validate", str(broken))
    assert code == 2 and "pieces[0]" in err
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "validate", "--dim", "2", files["w"])[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_theorem_violation_exit_code(capsys, files, monkeypatch):
    from posetmap import oracle
    monkeypatch.setattr(oracle, "disagreements", lambda *a: ["monotone"])
    code, _, err = run(capsys, "validate", "--window", "5", files["w"])
    assert code == 3 and "THEOREM_VIOLATION" in err


def test_console_script_entry(files):
    proc = subprocess.run([sys.executable, "-m", "posetmap.cli", "validate", files["bad"]],
                          capture_output=True, text=True)
    assert proc.returncode == 1
