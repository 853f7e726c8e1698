from __future__ import annotations

import json
import subprocess
import sys

import pytest

from grpstab.cli import EXIT_CAP, EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from grpstab.report import Report

from conftest import SAMPLES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, json.loads(out) if out else None, err


def test_group_info(capsys):
    code, d, _ = run_json(capsys, "group-info", SAMPLES / "q8.json")
    assert code == EXIT_OK and d["data"]["order"] == 8 and d["data"]["abelianization"] == [2, 2]
    code, d, _ = run_json(capsys, "group-info", "builtin:cyclic:n=1")
    assert code == EXIT_OK and d["data"]["order"] == 1 and "trivial group" in d["notes"]


def test_malformed_table(capsys):
    code, out, err = run(capsys, "group-info", SAMPLES / "bad_table.json")
    assert code == EXIT_INPUT and "repeats entry 2" in err and not out


def test_missing_file_and_bad_builtin(capsys):
    assert run(capsys, "group-info", SAMPLES / "nope.json")[0] == EXIT_INPUT
    assert run(capsys, "group-info", "builtin:cyclic")[0] == EXIT_INPUT
    assert run(capsys, "group-info", "builtin:cyclic:n")[0] == EXIT_INPUT
    assert run(capsys, "series", "builtin:cyclic:n=4", "plcs:6", "3")[0] == EXIT_INPUT


def test_series(capsys):
    code, d, _ = run_json(capsys, "series", "builtin:dihedral:n=4", "lcs", "4")
    assert code == EXIT_OK and d["data"]["orders"] == [8, 2, 1]
    assert [t["index"] for t in d["data"]["terms"]] == [1, 2, 3]
    code, d, _ = run_json(capsys, "series", "builtin:symmetric:n=3", "derived", "3")
    assert d["data"]["orders"] == [6, 3, 1]
    code, d, _ = run_json(capsys, "series", "builtin:symmetric:n=3", "rlcs", "3")
    assert set(d["data"]["orders"]) == {6} and d["notes"]


def test_series_json_round_trips(capsys):
    for args in (("builtin:dihedral:n=8", "lcs", "5"), ("builtin:quaternion8", "pderived:2", "4"),
                 ("builtin:symmetric:n=4", "cohn", "3")):
        code, out, _ = run(capsys, "--format", "json", "series", *args)
        again = Report.from_dict(json.loads(out)).render_json() + "\n"
        assert again == out


def test_text_and_json_share_a_report(capsys):
    _, text, _ = run(capsys, "homology", "builtin:elementary_abelian:p=2,k=2", "2", "z")
    _, d, _ = run_json(capsys, "homology", "builtin:elementary_abelian:p=2,k=2", "2", "z")
    assert d["data"]["torsion"] == [2]
    for key in ("rank", "structure", "ring"):
        assert f"{key}: {d['data'][key]}" in text


def test_homology(capsys):
    _, d, _ = run_json(capsys, "homology", "builtin:cyclic:n=6", "2", "z")
    assert d["data"]["rank"] == 0 and d["data"]["torsion"] == [] and d["data"]["structure"] == "0"
    for g in ("builtin:quaternion8", "builtin:symmetric:n=3", "builtin:cyclic:n=5"):
        _, d, _ = run_json(capsys, "homology", g, "1", "q")
        assert d["data"]["rank"] == 0
    assert run(capsys, "homology", "builtin:cyclic:n=2", "3", "z")[0] == EXIT_INPUT
    assert run(capsys, "homology", "builtin:cyclic:n=2", "1", "z:4")[0] == EXIT_INPUT


def test_cap_refusal(capsys):
    code, out, err = run(capsys, "homology", "builtin:heisenberg:p=3", "2", "z")
    assert code == EXIT_CAP and "676 x 17576" in err
    code, _, _ = run(capsys, "--homology-cap", "27", "homology", "builtin:heisenberg:p=3", "2", "z")
    assert code == EXIT_OK
    code, _, err = run(capsys, "--lattice-cap", "8", "stabilize", "builtin:dihedral:n=8", "lcs",
                       "1", "twoconn", "z")
    assert code == EXIT_CAP


def test_filtration(capsys):
    code, d, _ = run_json(capsys, "filtration", "builtin:dihedral:n=8", "lcs", "2", "z")
    assert code == EXIT_OK and d["data"]["quotient"] == {"rank": 0, "torsion": []}
    code, d, _ = run_json(capsys, "filtration", "builtin:dihedral:n=8", "lcs", "4", "z", "--nesting")
    assert code == EXIT_OK and d["counts"]["fail"] == 0
    code, d, _ = run_json(capsys, "filtration", "builtin:dihedral:n=4", "derived", "1", "mod_p:2")
    assert code == EXIT_OK
    assert run(capsys, "filtration", "builtin:dihedral:n=4", "derived", "1", "weird")[0] == EXIT_INPUT


def test_class_check(capsys):
    code, d, _ = run_json(capsys, "class-check", SAMPLES / "q8_identity.json", "ch", "2")
    assert code == EXIT_OK and d["data"]["verdict"] == "member"
    code, d, _ = run_json(capsys, "class-check", SAMPLES / "z2_to_trivial.json", "twoconn", "z")
    assert code == EXIT_FAIL and d["data"]["verdict"] == "non-member"
    assert d["checks"][0]["name"].startswith("H_1") and d["checks"][0]["data"]["kernel"]
    code, d, _ = run_json(capsys, "class-check", SAMPLES / "d16_to_d8.json", "dwyer", "z", "2")
    assert code == EXIT_OK
    assert run(capsys, "class-check", SAMPLES / "d16_to_d8.json", "dwyer", "z")[0] == EXIT_INPUT


def test_stabilize(capsys):
    code, d, _ = run_json(capsys, "stabilize", "builtin:cyclic:n=2", "lcs", "1", "twoconn", "q")
    assert code == EXIT_OK and d["data"]["lower bound order"] == 2
    assert sum(c["name"].startswith("certificate") for c in d["checks"]) == 1
    code, d, _ = run_json(capsys, "stabilize", "builtin:cyclic:n=2", "lcs", "1", "twoconn", "z")
    assert d["data"]["lower bound"] == d["data"]["baseline"]
    code, d, _ = run_json(capsys, "stabilize", "builtin:cyclic:n=1", "derived", "2", "harvey", "2")
    assert d["data"]["lower bound order"] == 1


def test_verify(capsys, tmp_path):
    code, d, _ = run_json(capsys, "verify", "zero-lemma")
    assert code == EXIT_OK and d["counts"]["fail"] == 0
    code, d, _ = run_json(capsys, "verify", "nesting", "--max-n", "5")
    assert code == EXIT_OK and d["counts"]["pass"] > 0
    one = tmp_path / "one.json"
    one.write_text(json.dumps([{"kind": "builtin", "builtin": "cyclic", "params": {"n": 1}}]))
    code, d, _ = run_json(capsys, "--corpus", one, "verify", "stallings")
    assert code == EXIT_OK and d["title"].endswith("over 1 groups")


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "everything"])
    assert e.value.code == 2


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "grpstab.cli", "series", "builtin:symmetric:n=3",
                          "derived", "3"], capture_output=True, text=True)
    assert out.returncode == 0 and "term 1: order 3" in out.stdout
