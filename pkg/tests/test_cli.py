"""Command line behavior: formats, files, exit codes."""
from __future__ import annotations

import json

import pytest

from krtorus.cli import main
from krtorus.fields import preset_field
from krtorus.surface import dump_surface


@pytest.fixture(scope="module")
def two_cell_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("fields") / "two-cell.tf"
    path.write_text(dump_surface(preset_field("two-cell")))
    return str(path)


@pytest.fixture(scope="module")
def cyclic_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("fields") / "cyclic-height.tf"
    path.write_text(dump_surface(preset_field("cyclic-height")))
    return str(path)


def test_validate_text(two_cell_file, capsys):
    assert main(["validate", two_cell_file]) == 0
    out = capsys.readouterr().out
    assert out == "chi=0 genus=1 vertices=256 triangles=512\n"


def test_validate_json(two_cell_file, capsys):
    assert main(["validate", two_cell_file, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"chi": 0, "genus": 1, "vertices": 256, "triangles": 512}


def test_validate_stdin(two_cell_file, capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO(
        open(two_cell_file).read()))
    assert main(["validate", "-"]) == 0
    assert "chi=0" in capsys.readouterr().out


def test_reeb_text(two_cell_file, capsys):
    assert main(["reeb", two_cell_file]) == 0
    out = capsys.readouterr().out
    assert "nodes=3 edges=2 is_tree=true" in out
    assert "kinds=saddle,saddle" in out


def test_reeb_dot(two_cell_file, capsys):
    assert main(["reeb", two_cell_file, "--format", "dot"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("graph kr {")


def test_reeb_json(two_cell_file, capsys):
    assert main(["reeb", two_cell_file, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["is_tree"] is True
    assert [n["level"] for n in data["nodes"]] == [-2.0, 0.0, 2.0]
    assert len(data["edges"]) == 2


def test_analyze_json_default(two_cell_file, capsys):
    assert main(["analyze", two_cell_file]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["format"] == "kr-torus/1"
    assert data["group"]["expr"] == "(A_1 x A_2) x Z^2"
    assert data["symmetry"]["n"] == 1
    assert data["symmetry"]["m"] == 1
    assert data["symmetry"]["r"] == 2


def test_analyze_text(two_cell_file, capsys):
    assert main(["analyze", two_cell_file, "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "group: (A_1 x A_2) x Z^2" in out
    assert "n=1 m=1 r=2" in out


def test_analyze_out_file(two_cell_file, tmp_path, capsys):
    target = tmp_path / "report.json"
    assert main(["analyze", two_cell_file, "--out", str(target)]) == 0
    data = json.loads(target.read_text())
    assert data["group"]["expr"] == "(A_1 x A_2) x Z^2"


def test_analyze_rejects_cycle(cyclic_file, capsys):
    assert main(["analyze", cyclic_file]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["code"] == "not-a-tree"
    assert err["error"]["b1"] == 1


def test_analyze_missing_file(capsys):
    assert main(["analyze", "/definitely/not/here.tf"]) == 1
    err = capsys.readouterr().err
    assert "bad-request" in err


def test_verify_ok(two_cell_file, capsys):
    assert main(["verify", two_cell_file, "--atoms", "Z2,Z3"]) == 0
    out = capsys.readouterr().out
    assert out.count("pass") == 3 and "FAIL" not in out


def test_verify_json(two_cell_file, capsys):
    assert main(["verify", two_cell_file, "--atoms", "1,1",
                 "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True
    assert [c["name"] for c in data["checks"]] == [
        "wreath-axioms-exactness", "index-lattice-exactness", "kernel-size"]


def test_verify_wrong_atom_count(two_cell_file, capsys):
    assert main(["verify", two_cell_file, "--atoms", "Z2"]) == 1
    assert "bad-request" in capsys.readouterr().err


def test_snf_text(capsys):
    assert main(["snf", "--matrix", "2,2;0,4"]) == 0
    assert capsys.readouterr().out == "D=diag(2,4)\n"


def test_snf_json(capsys):
    assert main(["snf", "--matrix", "2,2;0,4", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["diagonal"] == [2, 4]
    u, d, v = data["u"], data["d"], data["v"]
    assert d == [[2, 0], [0, 4]]
    assert u is not None and v is not None


def test_snf_bad_matrix(capsys):
    assert main(["snf", "--matrix", "1,2;three,4"]) == 1
    assert "bad-request" in capsys.readouterr().err


def test_gen_then_analyze(tmp_path, capsys):
    field = tmp_path / "z2.tf"
    assert main(["gen", "--preset", "z2-sym", "--out", str(field)]) == 0
    capsys.readouterr()
    assert main(["analyze", str(field)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["group"]["expr"] == "(A_1 x A_2) wr[Z_1 x Z_2] Z^2"
    assert data["symmetry"]["m"] == 2


def test_gen_grid_size(tmp_path, capsys):
    field = tmp_path / "big.tf"
    assert main(["gen", "--preset", "two-cell", "--grid", "8",
                 "--out", str(field)]) == 0
    capsys.readouterr()
    assert main(["validate", str(field)]) == 0
    assert "vertices=64" in capsys.readouterr().out


def test_gen_rejects_unknown_preset(capsys):
    assert main(["gen", "--preset", "nonsense"]) == 1
    assert "bad-request" in capsys.readouterr().err


def test_usage_errors_exit_one(capsys):
    assert main(["frobnicate"]) == 1
    assert main([]) == 1
    assert main(["analyze"]) == 1
    capsys.readouterr()


def test_sphere_input_rejected(tmp_path, capsys):
    text = ("torus-field v1\n4 4\n0\n1\n2\n3\n"
            "0 1 2\n0 3 1\n1 3 2\n2 3 0\n")
    path = tmp_path / "sphere.tf"
    path.write_text(text)
    assert main(["analyze", str(path), "--format", "json"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["code"] == "not-a-torus"
    assert err["error"]["chi"] == 2
