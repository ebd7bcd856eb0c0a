import json

import pytest
from click.testing import CliRunner

from main import cli
from utils.serialization import serialize_arrangement


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def a1_file(tmp_path, a1):
    path = tmp_path / "a1.json"
    path.write_text(serialize_arrangement(a1), encoding="utf-8")
    return path


def test_validate(runner, a1_file):
    result = runner.invoke(cli, ["validate", str(a1_file)])
    assert result.exit_code == 0
    assert result.stdout.strip() == "valid"


def test_validate_reports_json(runner):
    result = runner.invoke(cli, ["--json", "validate", "catalog:N4-A1"])
    assert result.exit_code == 0
    assert json.loads(result.stdout) == {"issues": []}


def test_audit_passes(runner):
    result = runner.invoke(cli, ["audit", "--arr", "catalog:N4-A1", "--deficits", "1.2,1.6,1.5,1.983185307179586"])
    assert result.exit_code == 0, result.output
    assert result.stdout.strip().endswith("pass")


def test_audit_rejects_bad_deficits(runner):
    result = runner.invoke(cli, ["audit", "--arr", "catalog:N4-A1", "--deficits", "1,1,1,1"])
    assert result.exit_code == 2


def test_compare_sides(runner):
    result = runner.invoke(cli, ["compare-sides", "--a", "catalog:N4-A1", "--b", "catalog:N4-A2", "--loop", "a"])
    assert result.exit_code == 0, result.output
    assert result.stdout.strip() == "different"


def test_not_adjacent_exits_one(runner):
    result = runner.invoke(cli, ["--json", "compare-sides", "--a", "catalog:N4-A1", "--b", "catalog:N4-A2",
                                 "--loop", "b"])
    assert result.exit_code == 1
    assert json.loads(result.stderr)["error"] == "not_adjacent"


def test_area_form(runner):
    result = runner.invoke(cli, ["--json", "area-form", "--arr", "catalog:N4-A1"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["labels"] == ["a", "b", "c", "d", "e", "f"]
    assert (report["signature"]["positives"], report["signature"]["negatives"]) == (1, 5)


def test_orbit(runner, tmp_path):
    lengths = tmp_path / "l.json"
    lengths.write_text(json.dumps([2, 1, 1, 1, 1, 1]), encoding="utf-8")
    result = runner.invoke(cli, ["--json", "orbit", "--lengths", str(lengths)])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["orbit_size"] == 6


def test_catalog_list(runner):
    result = runner.invoke(cli, ["--json", "catalog", "list"])
    assert result.exit_code == 0
    names = [row["name"] for row in json.loads(result.stdout)]
    assert "N4-A1" in names and "N5-T1" in names


def test_unfold_writes_files(runner, tmp_path):
    svg, obj = tmp_path / "net.svg", tmp_path / "net.obj"
    result = runner.invoke(cli, ["unfold", "--arr", "catalog:N4-A1", "--svg", str(svg), "--obj", str(obj)])
    assert result.exit_code == 0, result.output
    assert svg.read_text(encoding="utf-8").startswith("<svg")
    assert sum(1 for line in obj.read_text(encoding="utf-8").splitlines() if line.startswith("f ")) == 30


def test_unknown_command(runner):
    assert runner.invoke(cli, ["fold"]).exit_code == 2


def test_missing_file(runner, tmp_path):
    result = runner.invoke(cli, ["validate", str(tmp_path / "absent.json")])
    assert result.exit_code == 2


def test_unknown_catalog_entry(runner):
    assert runner.invoke(cli, ["validate", "catalog:N7"]).exit_code == 2


def test_parse_error_as_json(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "n_pairs": 4,\n  oops\n}', encoding="utf-8")
    result = runner.invoke(cli, ["--json", "validate", str(bad)])
    assert result.exit_code == 2
    error = json.loads(result.stderr)
    assert error["error"] == "parse_error"
    assert (error["line"], error["column"]) == (3, 3)


def test_bad_tolerance(runner):
    assert runner.invoke(cli, ["--tolerance", "0", "catalog", "list"]).exit_code == 2


def test_build_from_surface_file(runner, tmp_path, a1_file):
    surface = tmp_path / "surface.json"
    lengths = {label: 1.0 + 0.1 * i for i, label in enumerate("abcdef")}
    surface.write_text(json.dumps({"arrangement": a1_file.name, "lengths": lengths}), encoding="utf-8")
    result = runner.invoke(cli, ["--json", "build", "--surface", str(surface)])
    assert result.exit_code == 0, result.output
    summary = json.loads(result.stdout)
    assert summary["quads"] == 30
    assert summary["euler_characteristic"] == 2


def test_audit_from_surface_with_catalog_arrangement(runner, tmp_path):
    surface = tmp_path / "surface.json"
    surface.write_text(json.dumps({"arrangement": "catalog:N4-A1", "lengths": dict.fromkeys("abcdef", 2.0)}),
                       encoding="utf-8")
    result = runner.invoke(cli, ["audit", "--surface", str(surface)])
    assert result.exit_code == 0, result.output
    assert result.stdout.strip().endswith("pass")


def test_surface_input_errors(runner, tmp_path):
    surface = tmp_path / "surface.json"
    surface.write_text(json.dumps({"arrangement": "catalog:N4-A1", "lengths": {"a": 1.0}}), encoding="utf-8")
    assert runner.invoke(cli, ["build", "--surface", str(surface)]).exit_code == 2
    assert runner.invoke(cli, ["build", "--surface", str(surface), "--arr", "catalog:N4-A1"]).exit_code == 2
    assert runner.invoke(cli, ["unfold"]).exit_code == 2
