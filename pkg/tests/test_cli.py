from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from rookcomplex.cli import main

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "schemas" / "report.schema.json").read_text())


def run(capsys, *argv):
    code = main([*argv, "--no-timing"])
    out = capsys.readouterr()
    return code, out.out, out.err


def payload(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return report["payload"]


def test_fvector(capsys):
    assert payload(capsys, "fvector", "stirling:5", "--formula")["formula"] == [15, 65, 90, 31, 1]
    p = payload(capsys, "fvector", "psi:3,4,2", "--both")
    assert p["equal"] and p["formula"] == p["enumerated"]


def test_parse_error(capsys):
    code, out, err = run(capsys, "fvector", "psi:")
    assert code == 2 and out == "" and "malformed" in err


def test_argparse_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["partitions", "--n", "x", "--k", "2"])
    assert exc.value.code == 2


def test_facets(capsys):
    p = payload(capsys, "facets", "stirling:4", "--by-size")
    assert p["by_size"] == {"2": 2, "3": 11, "4": 1}
    assert p["formula_match"]
    assert payload(capsys, "facets", "stirling:1")["by_size"] == {"1": 1}
    listed = payload(capsys, "facets", "psi:2", "--list")["facets"]
    assert sorted(listed) == [[[1, 1]], [[1, 2]]]


def test_betti(capsys):
    assert payload(capsys, "betti", "stirling:6")["betti"][:4] == [0, 0, 6, 15]
    assert payload(capsys, "betti", "psi:4,0,0")["betti"] == [0, 2, 1]


def test_resource_limit(capsys):
    code, _, err = run(capsys, "betti", "stirling:9")
    assert code == 3 and "allow_large" in err
    code, _, _ = run(capsys, "betti", "stirling:5", "--max-faces", "10")
    assert code == 3


def test_morse(capsys):
    p = payload(capsys, "morse", "stirling:4", "--critical")
    assert p["acyclic"] and p["critical"] == {"1": [[[1, 3], [2, 4]], [[1, 4], [2, 3]]]}
    assert p["wedge"] == {"dim": 1, "spheres": 2}
    code, _, err = run(capsys, "morse", "psi:3,4,2")
    assert code == 2 and "requires a staircase board" in err


def test_partitions_and_gf(capsys):
    p = payload(capsys, "partitions", "--n", "4", "--k", "2", "--intertwined")
    assert p["formula"] == p["brute"] == 4
    p = payload(capsys, "partitions", "--n", "4", "--k", "2", "--list")
    assert p["formula"] == 7 and len(p["partitions"]) == 7
    assert payload(capsys, "gf", "--k", "1", "--terms", "5")["coefficients"] == [0, 0, 1, 4, 11, 26]
    assert payload(capsys, "gf", "--k", "0", "--terms", "3")["coefficients"] == [1, 1, 1, 1]


def test_vd(capsys):
    p = payload(capsys, "vd", "psi:3,4,2", "--certificate")
    assert p["vd"] and p["certificate_verified"] and p["certificate"]["shed"] == [1, 9]
    assert payload(capsys, "vd", "psi:4,0,0", "--bruteforce")["vd"] is False
    p = payload(capsys, "vd", "psi:2,1", "--certificate", "--bruteforce")
    assert p["vd"] and p["bruteforce"] and p["agree"]


def test_vd_without_hypotheses(capsys):
    code, _, err = run(capsys, "vd", "psi:4,0,0")
    assert code == 2 and "does not satisfy" in err


def test_vd_vertex_bound(capsys):
    code, _, _ = run(capsys, "vd", "psi:3,4,2", "--bruteforce")
    assert code == 3


def test_bijection(capsys):
    assert payload(capsys, "bijection", "--n", "5")["ok"]


def test_csv(capsys):
    code, out, _ = run(capsys, "betti", "stirling:5", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["dim", "betti", "torsion"]
    assert rows[3] == ["2", "9", ""]
    assert '"' not in out


def test_deterministic_output(capsys):
    first = run(capsys, "facets", "stirling:5", "--list")
    second = run(capsys, "facets", "stirling:5", "--list")
    assert first == second


def test_timing_field(capsys):
    assert main(["gf", "--k", "1", "--terms", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["timing"] >= 0
    jsonschema.validate(report, SCHEMA)


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "rookcomplex", "fvector", "stirling:3", "--no-timing"],
        capture_output=True, text=True, check=True,
    ).stdout
    report = json.loads(out)
    assert report["board"] == "stirling:3" and report["command"][0] == "fvector"
