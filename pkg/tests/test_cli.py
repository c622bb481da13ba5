import json

import pytest

from toricq import serialize
from toricq.cli import main

PYRAMID_JSON = {
    "field": {"minpoly": [0, 1], "root_interval": ["0", "0"],
              "irreducibility_checked": True},
    "n": 3,
    "normals": [[["-1"], ["0"], ["-1"]], [["1"], ["0"], ["-1"]],
                [["0"], ["-1"], ["-1"]], [["0"], ["1"], ["-1"]],
                [["0"], ["0"], ["1"]]],
    "offsets": [["-1"], ["-1"], ["-1"], ["-1"], ["0"]],
    "quasilattice": [[["1"], ["0"], ["0"]], [["0"], ["1"], ["0"]],
                     [["0"], ["0"], ["1"]]],
    "solver": {"tolerance": 1e-9, "max_iterations": 100,
               "line_search_shrink": 0.5, "precision_bits": 53},
    "seed": 7,
}

INTERVAL_JSON = {
    "field": {"minpoly": [0, 1], "root_interval": ["0", "0"],
              "irreducibility_checked": True},
    "n": 1,
    "normals": [[["1"]], [["-1"]]],
    "offsets": [["0"], ["-1"]],
    "quasilattice": [[["1"]]],
    "solver": {"tolerance": 1e-9, "max_iterations": 100,
               "line_search_shrink": 0.5, "precision_bits": 53},
    "seed": 3,
}


@pytest.fixture()
def pyramid_file(tmp_path):
    path = tmp_path / "pyramid.json"
    path.write_text(json.dumps(PYRAMID_JSON))
    return str(path)


@pytest.fixture()
def interval_file(tmp_path):
    path = tmp_path / "interval.json"
    path.write_text(json.dumps(INTERVAL_JSON))
    return str(path)


def test_instance_roundtrip_bit_exact():
    inst = serialize.instance_from_json(PYRAMID_JSON)
    blob = serialize.dumps(serialize.instance_to_json(inst))
    inst2 = serialize.instance_from_json(json.loads(blob))
    assert serialize.dumps(serialize.instance_to_json(inst2)) == blob


def test_sqrt2_field_roundtrip(q_sqrt2):
    blob = serialize.dumps(serialize.field_to_json(q_sqrt2))
    back = serialize.field_from_json(json.loads(blob))
    assert back == q_sqrt2
    s = q_sqrt2.scalar([1, -2])
    arr = serialize.scalar_to_json(s)
    assert serialize.scalar_from_json(back, arr) == s


def test_cmd_analyze(pyramid_file, capsys):
    assert main(["analyze", pyramid_file]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["singular_faces"] == 1
    assert report["depth"] == 1
    assert report["is_lattice"] is True
    assert report["quasilattice_rank"] == 3
    # base-vertex charts are unimodular; apex charts carry the Z/2 cone group
    orders = sorted(entry["order"] for entry in report["gamma_table"])
    assert set(orders) == {1, 2}


def test_cmd_faces_with_outputs(pyramid_file, tmp_path, capsys):
    out_json = tmp_path / "faces.json"
    out_dot = tmp_path / "faces.gv"
    assert main(["faces", pyramid_file, "--json", str(out_json),
                 "--dot", str(out_dot)]) == 0
    data = json.loads(out_json.read_text())
    assert data["polytope_depth"] == 1
    assert "[1, 2, 3, 4]" in data["faces"]
    dot = out_dot.read_text()
    assert dot.startswith("digraph face_lattice")
    assert '"[1, 2, 3, 4]"' in dot


def test_cmd_strata_dot(pyramid_file, tmp_path, capsys):
    out_dot = tmp_path / "strata.gv"
    assert main(["strata", pyramid_file, "--dot", str(out_dot)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["strata"]) == 1
    entry = report["strata"][0]
    assert entry["link"]["N_F_dim"] == 1
    assert entry["link"]["N_F0_dim"] == 2
    assert entry["link"]["delta_F"]["n"] == 2
    dot = out_dot.read_text()
    assert dot.count("->") == 1  # apex stratum -> max


def test_strata_link_feeds_back(pyramid_file, tmp_path, capsys):
    assert main(["strata", pyramid_file]) == 0
    report = json.loads(capsys.readouterr().out)
    link_polytope = report["strata"][0]["link"]["delta_F"]
    # the link polytope JSON is a valid instance by itself
    path = tmp_path / "link.json"
    path.write_text(json.dumps(link_polytope))
    assert main(["analyze", str(path)]) == 0
    nested = json.loads(capsys.readouterr().out)
    assert nested["d"] == 4 and nested["n"] == 2


def test_cmd_retract(interval_file, capsys):
    assert main(["retract", interval_file, "--point", "[[1,0],[1,0]]"]) == 0
    out = json.loads(capsys.readouterr().out)
    x = out["retraction"]["x"]
    assert abs(x[0][0] - 0.7071067811865476) < 1e-8
    assert abs(out["retraction"]["xi"][0] - 0.5) < 1e-8
    assert out["closed"] is True


def test_cmd_retract_outside_domain(pyramid_file, capsys):
    code = main(["retract", pyramid_file,
                 "--point", "[[0,0],[0,0],[0,0],[0,0],[0,0]]"])
    assert code == 2
    err = json.loads(capsys.readouterr().out)
    assert err["error"]["type"] == "DomainError"


def test_cmd_equiv(interval_file, capsys):
    assert main(["equiv", interval_file,
                 "--points", "[[[1,0],[1,0]], [[2,0],[2,0]]]"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["equivalent"] is True
    assert out["exactness"] == "approximate"
    assert main(["equiv", interval_file,
                 "--points", "[[[1,0],[0,0]], [[0,0],[1,0]]]"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["equivalent"] is False


def test_cmd_gamma(pyramid_file, capsys):
    assert main(["gamma", pyramid_file, "--chart", "1,2,3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["order"] == 2  # |det| of three slant normals
    assert out["invariant_factors"] == [2]
    code = main(["gamma", pyramid_file, "--chart", "1,2,5"])
    assert code == 2  # those three normals are linearly dependent


def test_cmd_gamma_table(pyramid_file, capsys):
    assert main(["gamma", pyramid_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["charts"]) > 0
    orders = {tuple(c["I"]): c["order"] for c in out["charts"]}
    assert orders[(1, 3, 5)] == 1


def test_cmd_verify_small(interval_file, capsys):
    assert main(["verify", interval_file, "--samples", "20", "--seed", "5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] is True
    names = {r["name"] for r in out["results"]}
    assert "moment.retraction_unique" in names
    assert "orbits.equivalence_axioms" in names


def test_cmd_verify_deterministic(interval_file, capsys):
    main(["verify", interval_file, "--samples", "15", "--seed", "9"])
    first = capsys.readouterr().out
    main(["verify", interval_file, "--samples", "15", "--seed", "9"])
    second = capsys.readouterr().out
    assert first == second


def test_validation_error_exit_code(tmp_path, capsys):
    bad = dict(INTERVAL_JSON)
    bad["offsets"] = [["1"], ["0"]]  # x >= 1 and x <= 0: empty
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    assert main(["analyze", str(path)]) == 2
    err = json.loads(capsys.readouterr().out)
    assert err["error"]["type"] == "ValidationError"


def test_malformed_json_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["analyze", str(path)]) == 2


def test_solver_nonconvergence_exit_code(interval_file, capsys):
    # a tolerance below float resolution cannot be met
    code = main(["retract", interval_file, "--point", "[[1,0],[1,0]]",
                 "--tol", "1e-18"])
    assert code == 3
    err = json.loads(capsys.readouterr().out)
    assert err["error"]["type"] == "SolverError"


def test_nested_strata_json_depth_two(tmp_path, capsys):
    normals = [[["-1"], ["0"], ["-1"], ["-1"]], [["1"], ["0"], ["-1"], ["-1"]],
               [["0"], ["-1"], ["-1"], ["-1"]], [["0"], ["1"], ["-1"], ["-1"]],
               [["0"], ["0"], ["1"], ["0"]], [["0"], ["0"], ["0"], ["1"]]]
    inst = {
        "field": {"minpoly": [0, 1], "root_interval": ["0", "0"],
                  "irreducibility_checked": True},
        "n": 4, "normals": normals,
        "offsets": [["-1"], ["-1"], ["-1"], ["-1"], ["0"], ["0"]],
        "quasilattice": [[["1"], ["0"], ["0"], ["0"]], [["0"], ["1"], ["0"], ["0"]],
                         [["0"], ["0"], ["1"], ["0"]], [["0"], ["0"], ["0"], ["1"]]],
        "seed": 1,
    }
    path = tmp_path / "pyr4.json"
    path.write_text(json.dumps(inst))
    assert main(["strata", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["polytope_depth"] == 2
    apex = next(s for s in report["strata"] if s["face"] == [1, 2, 3, 4, 5])
    level2 = apex["link"]["report"]
    assert len(level2["strata"]) == 1
    assert level2["strata"][0]["link"]["report"]["strata"] == []
