from __future__ import annotations

import csv
import json

import pytest

from hassepareto.cli import main, parse_sizes
from hassepareto.hasse import Instance
from hassepareto.instances import fig4_instance


@pytest.fixture
def conflict_file(tmp_path):
    path = tmp_path / "conflict.json"
    Instance(2, (2,), ((1, 2),)).dump(path)
    return path


def test_solve_two_variable(conflict_file, tmp_path, capsys):
    out = tmp_path / "faces.json"
    assert main(["solve", "--input", str(conflict_file), "--output", str(out)]) == 0
    faces = json.loads(out.read_text())
    assert len(faces) == 1 and faces[0]["aggregates"][0]["binding"] == "free"
    assert capsys.readouterr().out.strip() == "1 faces, dims 1"


@pytest.mark.parametrize("algorithm", ["basic", "improved"])
def test_solve_fig4(tmp_path, capsys, algorithm):
    src = tmp_path / "fig4.json"
    fig4_instance().dump(src)
    args = ["solve", "--input", str(src), "--output", str(tmp_path / "f.json"), "--algorithm", algorithm]
    args += ["--dot-diagram", str(tmp_path / "d.dot"), "--dot-tree", str(tmp_path / "t.dot")]
    assert main(args) == 0
    if algorithm == "improved":
        assert capsys.readouterr().out.strip() == "2 faces, dims 5,6"
    assert (tmp_path / "d.dot").read_text().startswith("digraph")
    assert "->" in (tmp_path / "t.dot").read_text()


def test_solve_output_is_deterministic(conflict_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["solve", "--input", str(conflict_file), "--output", str(a)])
    main(["solve", "--input", str(conflict_file), "--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("text", ["{not json", '{"n": 2, "constraints": [[1, 9]]}', '{"n": 2, "x": 1}'])
def test_malformed_input(tmp_path, capsys, text):
    bad = tmp_path / "bad.json"
    bad.write_text(text)
    assert main(["solve", "--input", str(bad), "--output", str(tmp_path / "o.json")]) == 2
    assert "input error" in capsys.readouterr().err


def test_missing_input(tmp_path):
    assert main(["solve", "--input", str(tmp_path / "nope.json"), "--output", str(tmp_path / "o")]) == 2


def test_bad_arguments():
    assert main(["solve"]) == 2
    assert main(["frobnicate"]) == 2


def test_oracle_pass(conflict_file, capsys):
    assert main(["oracle", "--input", str(conflict_file), "--steps", "10"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_oracle_corrupt(conflict_file, capsys):
    assert main(["oracle", "--input", str(conflict_file), "--corrupt"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "witness=" in out


def test_oracle_budget(tmp_path, capsys):
    big = tmp_path / "big.json"
    Instance(20, (1,), ()).dump(big)
    assert main(["oracle", "--input", str(big), "--budget", "100000"]) == 3
    assert "REFUSED" in capsys.readouterr().out


def test_decompose(tmp_path, capsys):
    src = tmp_path / "fig4.json"
    fig4_instance().dump(src)
    args = ["decompose", "--input", str(src), "--output", str(tmp_path / "p.json")]
    assert main(args + ["--expanded", str(tmp_path / "e.json")]) == 0
    assert len(json.loads((tmp_path / "e.json").read_text())) == 2
    assert "product terms" in capsys.readouterr().out


def test_parse_sizes():
    assert parse_sizes("5..13:4") == [5, 9, 13]
    assert parse_sizes("2..4") == [2, 3, 4]
    assert parse_sizes("3,7") == [3, 7]


def test_bench_chain(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--family", "chain", "--sizes", "5..9:2", "--instances", "4", "--csv", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 12
    assert all(r["n_faces"] == "1" for r in rows)
    assert list(rows[0]) == [
        "family", "size", "n", "instance", "seed", "wall_time_s",
        "nodes", "branchings", "n_faces", "time_per_face_s",
    ]


def test_bench_seeds_are_stable(tmp_path):
    cols = ["n", "instance", "nodes", "branchings", "n_faces"]
    runs = []
    for name in ("a.csv", "b.csv"):
        main(["bench", "--family", "grid", "--sizes", "2..3", "--instances", "3", "--seed", "4", "--csv", str(tmp_path / name)])
        runs.append([[r[c] for c in cols] for r in csv.DictReader((tmp_path / name).open())])
    assert runs[0] == runs[1]


def test_screen_small(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["screen", "--rows", "2", "--cols", "2", "--csv", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [int(r["bitmask"]) for r in rows] == list(range(16))
    assert rows[0]["n_faces"] == "1" and rows[0]["max_dimension"] == "0"
    assert rows[15]["n_faces"] == "1" and rows[15]["max_dimension"] == "0"
    joint = list(csv.reader((tmp_path / "s_bivariate.csv").open()))
    assert sum(int(x) for row in joint[1:] for x in row[1:]) == 16


def test_screen_cap(tmp_path, capsys):
    assert main(["screen", "--rows", "5", "--cols", "5", "--csv", str(tmp_path / "s.csv")]) == 3
    assert "REFUSED" in capsys.readouterr().out
