from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from orbitweave.cli import main
from orbitweave.models import fixture, fixture_dir, fixture_names, flag_case, group_case, sl2_atom
from orbitweave.serialize import SchemaError, export_dot, parse_graph_json, write_graph_json
from orbitweave.models import point

FIX = fixture_dir()


def run(argv, capsys, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin.encode())))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# --- serialization -----------------------------------------------------------

@pytest.mark.parametrize("name", fixture_names())
def test_roundtrip_fixtures(name):
    g = fixture(name)
    assert parse_graph_json(write_graph_json(g)) == g


@pytest.mark.parametrize("g", [flag_case("B2"), group_case("A2"), sl2_atom("T")])
def test_roundtrip_builders(g):
    assert parse_graph_json(write_graph_json(g)) == g
    assert write_graph_json(g) == write_graph_json(parse_graph_json(write_graph_json(g)))


def test_writer_key_order_and_normalized_edges():
    raw = json.loads((FIX / "pgl3_gl2.json").read_text())
    raw["edges"].reverse()
    raw["vertices"].reverse()
    g = parse_graph_json(json.dumps(raw))
    out = json.loads(write_graph_json(g))
    assert list(out) == ["cartan", "rank_of_top", "vertices", "edges"]
    assert [(e["src"], e["dst"], e["label"]) for e in out["edges"]] == sorted(
        (e["src"], e["dst"], e["label"]) for e in out["edges"]
    )
    assert [(v["dim"], v["id"]) for v in out["vertices"]] == sorted((v["dim"], v["id"]) for v in out["vertices"])


@pytest.mark.parametrize("mutate,pointer", [
    (lambda d: d["vertices"][0].update(color=1), "/vertices/0/color"),
    (lambda d: d.update(extra=True), "/extra"),
    (lambda d: d["edges"][1].update(type="X"), "/edges/1/type"),
    (lambda d: d["edges"][0].update(label="0"), "/edges/0/label"),
    (lambda d: d.pop("cartan"), "/cartan"),
    (lambda d: d.update(cartan="Z9"), "/cartan"),
    (lambda d: d["vertices"][2].update(dim=-1), "/vertices/2/dim"),
])
def test_schema_errors_carry_pointer(mutate, pointer):
    d = json.loads((FIX / "example1.json").read_text())
    mutate(d)
    with pytest.raises(SchemaError) as err:
        parse_graph_json(json.dumps(d))
    assert err.value.pointer == pointer


def test_dot_export():
    dot = export_dot(fixture("example1"))
    assert dot.count('color="black:black"') == 2
    assert dot.count("penwidth=2") == 2
    assert "α0" in dot and "α1" in dot
    assert dot == export_dot(fixture("example1"))
    single = export_dot(point("A1"))
    assert single.count("rank=same") == 1 and "->" not in single
    po3 = export_dot(fixture("pgl3_po3"))
    assert po3.count("rank=same") == 3 and po3.count("tooltip") == 4


# --- commands ------------------------------------------------------------------

def test_validate_fixture(capsys):
    code, out, _ = run(["validate", str(FIX / "example1.json")], capsys)
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_validate_accepts_fixture_name(capsys):
    code, _, _ = run(["validate", "pgl3_gl2"], capsys)
    assert code == 0


def test_validate_failure_exit_1(tmp_path, capsys):
    d = json.loads((FIX / "example1.json").read_text())
    d["vertices"][-1]["dim"] = 9
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    code, out, _ = run(["validate", str(p)], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["structure"]["passed"] is False and rep["paths"] is None


def test_validate_truncated_flag(tmp_path, capsys):
    d = {"cartan": "A1", "rank_of_top": 1,
         "vertices": [{"id": "y", "dim": 1, "rank": 0}, {"id": "x", "dim": 2, "rank": 1}],
         "edges": [{"src": "y", "dst": "x", "label": 0, "type": "T"}]}
    p = tmp_path / "t.json"
    p.write_text(json.dumps(d))
    assert run(["validate", str(p)], capsys)[0] == 1
    code, out, _ = run(["validate", str(p), "--allow-truncated"], capsys)
    assert code == 0
    assert json.loads(out)["structure"]["warnings"]


def test_schema_error_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    d = json.loads((FIX / "example1.json").read_text())
    d["color"] = "red"
    p.write_text(json.dumps(d))
    code, _, err = run(["validate", str(p)], capsys)
    assert code == 2
    assert json.loads(err)["pointer"] == "/color"


def test_usage_errors_exit_2(capsys):
    assert run(["validate", "/no/such/file.json"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2
    assert run([], capsys)[0] == 2
    assert run(["analyze", "example1", "--vertex", "nope"], capsys)[0] == 2
    assert run(["model", "flag", "--type", "A2", "--parabolic", "7"], capsys)[0] == 2
    assert run(["model", "group", "--type", "Q2"], capsys)[0] == 2
    assert run(["fixtures", "get", "nope"], capsys)[0] == 2
    assert run(["fixtures", "get"], capsys)[0] == 2
    assert run(["knop", "pgl2sq_diag", "--lattice", "1,1,1"], capsys)[0] == 2


def test_analyze_bottom(capsys):
    code, out, _ = run(["analyze", str(FIX / "example1.json"), "--vertex", "bottom"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["multiplicity_free"] is False
    assert rep["terms"] == [{"word": [], "coeff_log2": 1}]
    assert rep["v0_codim1_connected"] is True


def test_analyze_pretty(capsys):
    code, out, _ = run(["--pretty", "analyze", "pgl3_gl2", "--vertex", "B2"], capsys)
    assert code == 0 and "multiplicity free: True" in out


def test_model_pipes_into_validate(capsys, monkeypatch):
    code, out, _ = run(["model", "group", "--type", "A1"], capsys)
    assert code == 0
    code, res, _ = run(["validate", "-"], capsys, stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(res)["passed"]


def test_model_flag_parabolic(capsys):
    code, out, _ = run(["model", "flag", "--type", "A2", "--parabolic", "0"], capsys)
    assert code == 0
    assert [v["id"] for v in json.loads(out)["vertices"]] == ["e", "s1", "s0s1"]


def test_induce(tmp_path, capsys):
    base = tmp_path / "n.json"
    base.write_bytes(write_graph_json(sl2_atom("N")))
    code, out, _ = run(["induce", "--type", "A2", "--subset", "0", "--base", str(base)], capsys)
    assert code == 0
    g = parse_graph_json(out)
    assert len(g.vertices) == 6
    code, _, _ = run(["induce", "--type", "A2", "--subset", "0", "--base", "pgl2sq_diag"], capsys)
    assert code == 2


def test_knop(capsys):
    code, out, _ = run(["knop", "pgl2sq_diag", "--lattice", "1,1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["stabilizer"]["stabilizer"] == [[], [0, 1]]
    assert rep["prop_minimal"]["passed"] is True
    assert rep["generators"]["generators"][0]["tags"] == ["α+β ∈ X(X)"]
    code, out, _ = run(["--pretty", "knop", "example1"], capsys)
    assert code == 0 and "max-rank orbit" in out


def test_knop_on_broken_action(tmp_path, capsys):
    d = json.loads((FIX / "example1.json").read_text())
    for e in d["edges"]:
        if e["type"] == "U":
            e["type"] = "T"
            break
    p = tmp_path / "m.json"
    p.write_text(json.dumps(d))
    assert run(["knop", str(p)], capsys)[0] == 1


def test_fixtures_commands(capsys):
    code, out, _ = run(["fixtures", "list"], capsys)
    assert code == 0 and json.loads(out) == fixture_names()
    code, out, _ = run(["fixtures", "get", "example1"], capsys)
    assert code == 0 and parse_graph_json(out) == fixture("example1")


def test_export_dot(tmp_path, capsys):
    code, out, _ = run(["export-dot", "example1"], capsys)
    assert code == 0 and out == export_dot(fixture("example1"))
    target = tmp_path / "g.dot"
    assert run(["export-dot", "example1", "-o", str(target)], capsys)[0] == 0
    assert target.read_text() == out


def test_outputs_are_deterministic(capsys):
    for argv in (["knop", "example3_full"], ["analyze", "example1", "--vertex", "L1"], ["model", "group", "--type", "B2"]):
        first = run(argv, capsys)
        assert run(argv, capsys) == first


def test_console_script_pipeline():
    model = subprocess.run([sys.executable, "-m", "orbitweave.cli", "model", "group", "--type", "A1"],
                           capture_output=True, check=True)
    res = subprocess.run([sys.executable, "-m", "orbitweave.cli", "validate", "-"], input=model.stdout,
                         capture_output=True)
    assert res.returncode == 0
