import io
import json

import numpy as np
import pytest

from zakfiber.cli import run
from zakfiber.scenario import fixture_path


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def invoke_json(argv):
    code, text, err = invoke(argv)
    assert code == 0, err
    return json.loads(text)


def test_validate_fixture():
    rep = invoke_json(["validate", "--scenario", "s1"])
    assert rep["ok"] is True
    assert rep["violations"] == []
    assert rep["command"] == "validate"
    assert rep["scenario"] == "s1"
    assert rep["schema_version"] == 1


def test_validate_translation_fixture():
    rep = invoke_json(["validate", "--scenario", "s3"])
    assert rep["ok"] is True
    assert rep["group_order"] == 12
    assert rep["subgroup_order"] == 4
    assert rep["annihilator_order"] == 3
    assert rep["normalization"]["nu_Omega"] == pytest.approx(0.25)


def test_validate_rejects_broken_action(tmp_path):
    doc = {
        "schema_version": 1,
        "name": "broken",
        "group": {"invariant_factors": [2]},
        "space": {"size": 4, "weights": [1.0, 1.0, 1.0, 1.0]},
        # a valid permutation table that is not a homomorphism image
        "action": {"table": [[0, 1, 2, 3], [1, 2, 3, 0]]},
        "generators": [[[1, 0], [0, 0], [0, 0], [0, 0]]],
    }
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(doc))
    code, out, err = invoke(["validate", "--scenario", str(p)])
    assert code == 2
    rep = json.loads(out)
    assert rep["ok"] is False
    assert rep["violations"]


def test_validate_reports_non_free_action(tmp_path):
    doc = {
        "schema_version": 1,
        "name": "notfree",
        "group": {"invariant_factors": [2]},
        "space": {"size": 1, "weights": [1.0]},
        "action": {"table": [[0], [0]]},
        "generators": [[[1, 0]]],
    }
    p = tmp_path / "notfree.json"
    p.write_text(json.dumps(doc))
    code, out, err = invoke(["validate", "--scenario", str(p)])
    assert code == 2
    rep = json.loads(out)
    assert rep["ok"] is False
    assert any("free" in v for v in rep["violations"])


def test_zak_command():
    rep = invoke_json(["zak", "--scenario", "s1"])
    recs = rep["generators"]
    assert len(recs) == 2
    for r in recs:
        assert r["isometry_deviation"] <= 1e-12
        assert r["roundtrip_deviation"] <= 1e-12
        assert len(r["fiber_norms_sq"]) == 4


def test_range_and_length_commands():
    # the two s1 generators hit the same fiber line, so every dim is 1
    rep = invoke_json(["range", "--scenario", "s1"])
    assert rep["length"] == 1
    assert [f["dim"] for f in rep["fibers"]] == [1, 1, 1, 1]
    rep = invoke_json(["range", "--scenario", "s1-parseval"])
    assert rep["length"] == 2
    assert [f["dim"] for f in rep["fibers"]] == [2, 2, 2, 2]
    rep = invoke_json(["length", "--scenario", "s1-parseval"])
    assert rep["length"] == 2


def test_member_command():
    rep = invoke_json(["member", "--scenario", "s2"])
    recs = rep["candidates"]
    assert len(recs) == 2
    assert [r["member"] for r in recs] == [True, False]


def test_member_requires_candidates(tmp_path):
    doc = {
        "schema_version": 1,
        "name": "nocand",
        "group": {"invariant_factors": [2]},
        "space": {"size": 4, "weights": [1.0, 2.0, 3.0, 4.0]},
        "action": {"table": [[0, 1, 2, 3], [3, 2, 1, 0]]},
        "generators": [[[1, 0], [0, 0], [0, 0], [0, 0]]],
    }
    p = tmp_path / "nocand.json"
    p.write_text(json.dumps(doc))
    code, out, err = invoke(["member", "--scenario", str(p)])
    assert code == 2
    assert "candidates" in err


def test_frame_command_values():
    rep = invoke_json(["frame", "--scenario", "s1"])
    s = rep["summary"]
    assert s["lower"] == pytest.approx(1.0, abs=1e-12)
    assert s["upper"] == pytest.approx(5.0, abs=1e-12)
    assert s["frame"] is True and s["parseval"] is False
    assert rep["fibers"][0]["dim"] == 1
    rep = invoke_json(["frame", "--scenario", "s1-parseval"])
    s = rep["summary"]
    assert s["lower"] == pytest.approx(1.0, abs=1e-12)
    assert s["upper"] == pytest.approx(1.0, abs=1e-12)
    assert s["parseval"] is True and s["riesz"] is True


def test_riesz_command_flags_dependence():
    rep = invoke_json(["riesz", "--scenario", "s1"])
    s = rep["summary"]
    assert s["riesz"] is False
    assert s["frame"] is True
    assert s["lower"] == pytest.approx(0.0, abs=1e-12)
    assert s["upper"] == pytest.approx(5.0, abs=1e-12)


def test_bracket_command():
    rep = invoke_json(["bracket", "--scenario", "s1-parseval"])
    pairs = {(p["i"], p["j"]): p for p in rep["pairs"]}
    assert set(pairs) == {(0, 0), (0, 1), (1, 1)}
    # orthogonal generators: the cross bracket vanishes identically
    assert np.max(np.abs(np.asarray(pairs[(0, 1)]["values"]))) < 1e-12
    # each diagonal bracket is the constant 1 for a delta generator
    assert np.allclose(np.asarray(pairs[(0, 0)]["values"]),
                       np.tile([1.0, 0.0], (4, 1)), atol=1e-12)


def test_decompose_command():
    # the dependent s1 pair collapses to one Parseval generator, the
    # orthonormal pair stays two
    rep = invoke_json(["decompose", "--scenario", "s1"])
    assert rep["ok"] is True
    assert len(rep["parts"]) == 1
    rep = invoke_json(["decompose", "--scenario", "s1-parseval"])
    assert rep["ok"] is True
    assert len(rep["parts"]) == 2
    assert rep["audit"]["dims_match"] is True
    assert rep["union_bounds"]["lower"] == pytest.approx(1.0, abs=1e-10)
    assert rep["union_bounds"]["upper"] == pytest.approx(1.0, abs=1e-10)
    rep = invoke_json(["decompose", "--scenario", "star"])
    assert rep["ok"] is True
    assert len(rep["parts"]) == 1


def test_verify_all_fixtures():
    for name in ("s1", "s1-parseval", "s2", "s3", "star"):
        code, out, err = invoke(["verify", "--scenario", name])
        assert code == 0, (name, out, err)
        rep = json.loads(out)
        assert rep["ok"] is True
        assert all(c["ok"] for c in rep["checks"])


def test_verify_check_names():
    rep = invoke_json(["verify", "--scenario", "s1"])
    names = [c["name"] for c in rep["checks"]]
    assert "frame_bounds_vs_dense" in names
    assert "riesz_bounds_vs_dense" in names
    assert "zak_roundtrip_gen0" in names
    assert "membership_vs_dense_cand0" in names
    rep = invoke_json(["verify", "--scenario", "s3"])
    names = [c["name"] for c in rep["checks"]]
    assert "weil_gen0" in names
    assert "duality_gen0" in names


def test_translation_commands():
    rep = invoke_json(["translation", "weil", "--scenario", "s3"])
    assert all(r["deviation"] <= 1e-12 for r in rep["generators"])
    rep = invoke_json(["translation", "zak", "--scenario", "s3"])
    assert rep["command"] == "translation zak"
    assert all(r["roundtrip_deviation"] <= 1e-12 for r in rep["generators"])
    rep = invoke_json(["translation", "duality", "--scenario", "s3"])
    assert all(r["transform_deviation"] <= 1e-12 for r in rep["generators"])
    rep = invoke_json(["translation", "fiberize", "--scenario", "s3"])
    assert all(r["plancherel_deviation"] <= 1e-10 for r in rep["generators"])
    rep = invoke_json(["translation", "analyze", "--scenario", "s3"])
    assert "length" in rep and "summary" in rep


def test_translation_commands_reject_action_scenarios():
    code, out, err = invoke(["translation", "weil", "--scenario", "s1"])
    assert code == 2
    assert "translation" in err


def test_tolerance_validation():
    code, out, err = invoke(["frame", "--scenario", "s1",
                             "--tolerance", "0"])
    assert code == 2
    assert "tolerance must be in (0, 1)" in err
    code, out, err = invoke(["frame", "--scenario", "s1",
                             "--tolerance", "1.5"])
    assert code == 2


def test_parallel_validation():
    code, out, err = invoke(["frame", "--scenario", "s1", "--parallel", "0"])
    assert code == 2
    assert "--parallel" in err


def test_missing_scenario_is_io_error():
    code, out, err = invoke(["frame", "--scenario", "does-not-exist"])
    assert code == 4
    assert "not a shipped fixture" in err


def test_parse_error_is_io_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    code, out, err = invoke(["frame", "--scenario", str(p)])
    assert code == 4
    assert "not valid JSON" in err
    p2 = tmp_path / "bad2.json"
    p2.write_text(json.dumps({"schema_version": 1}))
    code, out, err = invoke(["frame", "--scenario", str(p2)])
    assert code == 4
    assert "exactly one of the action/translation blocks" in err


def test_csv_fibers_format():
    code, out, err = invoke(["frame", "--scenario", "s2",
                             "--format", "csv-fibers"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "fiber_id,dim,smin2,smax2"
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "0" and first[1] == "1"


def test_csv_fibers_rejected_elsewhere():
    code, out, err = invoke(["zak", "--scenario", "s1",
                             "--format", "csv-fibers"])
    assert code == 2
    assert "csv-fibers" in err


def test_deterministic_output():
    a = invoke(["verify", "--scenario", "s1"])
    b = invoke(["verify", "--scenario", "s1"])
    assert a == b
    p1 = invoke(["frame", "--scenario", "s1-parseval", "--parallel", "1"])
    p4 = invoke(["frame", "--scenario", "s1-parseval", "--parallel", "4"])
    assert p1 == p4


def test_scenario_path_and_fixture_name_agree():
    by_name = invoke(["length", "--scenario", "s1"])
    by_path = invoke(["length", "--scenario", str(fixture_path("s1"))])
    assert by_name == by_path


def test_verify_detects_disagreement(monkeypatch, tmp_path):
    # force the dense oracle to lie so the disagreement path is exercised
    import zakfiber.cli as cli

    def wrong_bounds(a, gens, rel_tol=1e-9):
        return 0.5, 0.5

    monkeypatch.setattr(cli.oracle, "dense_frame_bounds", wrong_bounds)
    code, out, err = invoke(["verify", "--scenario", "s1"])
    assert code == 3
    rep = json.loads(out)
    assert rep["ok"] is False
    bad = [c for c in rep["checks"] if not c["ok"]]
    assert [c["name"] for c in bad] == ["frame_bounds_vs_dense"]
