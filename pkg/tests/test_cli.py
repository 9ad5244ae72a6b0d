"""Tests for the latticelp command line."""

import json
from fractions import Fraction

import pytest

from latticelp.cli import main, render_human


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


# ---------------------------------------------------------------------------
# lattice / lp
# ---------------------------------------------------------------------------


class TestLatticeCommands:
    def test_catalog(self, capsys):
        code, payload = run(capsys, "lattice", "catalog", "m3")
        assert code == 0
        assert payload["status"] == "success"
        assert payload["command"] == "lattice catalog"
        assert payload["result"]["report"]["is_distributive"] is False

    def test_check_file(self, capsys, tmp_path):
        path = tmp_path / "n5.json"
        path.write_text(json.dumps({
            "elements": ["0", "a", "b", "c", "1"],
            "order": [["0", "a"], ["0", "b"], ["b", "c"], ["a", "1"], ["c", "1"]],
        }))
        code, payload = run(capsys, "lattice", "check", str(path))
        assert code == 0
        assert payload["result"]["report"]["is_modular"] is False

    def test_not_a_lattice(self, capsys, tmp_path):
        path = tmp_path / "cycle.json"
        path.write_text(json.dumps({"elements": ["0", "a", "1"], "order": [["0", "a"], ["a", "0"], ["a", "1"]]}))
        code, payload = run(capsys, "lattice", "check", str(path))
        assert code == 1
        assert payload["error"] == "NotAPartialOrder"


class TestLpCommands:
    def test_norm(self, capsys):
        code, payload = run(capsys, "lp", "norm", "case:n5", "--vector", "1*A + 1*B")
        assert code == 0
        assert payload["result"]["norm"]["value"] == "3/4"

    def test_norm_p2(self, capsys):
        code, payload = run(capsys, "lp", "norm", "case:m3", "--vector", "1*A", "--p", "2")
        assert code == 0
        norm = payload["result"]["norm"]
        assert norm["value"] == pytest.approx(0.4082482904, rel=1e-6)
        assert norm["bracket"][0] <= norm["value"] <= norm["bracket"][1]

    def test_basis(self, capsys):
        _, payload = run(capsys, "lp", "basis", "case:m3")
        assert payload["result"]["x_dim"] == 1
        q = payload["result"]["q"]
        assert q["A"] == q["B"] == q["C"]
        assert Fraction(q["1"][0]) == 2 * Fraction(q["A"][0])

    def test_kernel(self, capsys):
        _, payload = run(capsys, "lp", "kernel", "case:example1")
        assert payload["result"]["dimension"] == 0

    def test_phistar_from_file(self, capsys, tmp_path):
        path = tmp_path / "chain.json"
        path.write_text(json.dumps({
            "elements": ["0", "c", "1"],
            "order": [["0", "c"], ["c", "1"]],
            "phi": {"0": "0", "c": "1/2", "1": "1"},
        }))
        code, payload = run(capsys, "lp", "phistar", str(path))
        assert code == 0
        assert payload["result"]["phistar"] == {"0": "0/1", "c": "1/2", "1": "1/1"}
        assert payload["result"]["idempotent"] is True
        invariance = payload["result"]["invariance"]
        assert invariance["p1"]["agree"] is True
        assert invariance["p1"]["top_is_one"] is True
        assert invariance["p2"]["p"] == "2/1"

    def test_phistar_top_below_one(self, capsys):
        _, payload = run(capsys, "lp", "phistar", "case:n5")
        invariance = payload["result"]["invariance"]
        assert invariance["p1"]["phistar_top"] == "3/4"
        assert invariance["p1_any"]["agree"] is True

    def test_chain_triangle_violations(self, capsys):
        code, payload = run(capsys, "lp", "probe", "case:chain_3")
        assert code == 0
        triangle = payload["result"]["triangle"]
        assert triangle["disjoint"]["violations"]
        assert triangle["any"]["violations"] == []

    def test_pythagoras_hypothesis_unmet(self, capsys):
        code, payload = run(capsys, "lp", "pythagoras", "case:mo2", "--m", "a")
        assert code == 1
        assert payload["status"] == "failure"
        assert payload["result"]["report"]["hypothesis_holds"] is False

    def test_unknown_case(self, capsys):
        code, payload = run(capsys, "lp", "norm", "case:nope", "--vector", "1*A")
        assert code == 1
        assert payload["error"] == "UnknownName"

    def test_parse_error(self, capsys):
        code, payload = run(capsys, "lp", "norm", "case:n5", "--vector", "1*Q")
        assert code == 1
        assert payload["error"] == "ParseError"
        assert payload["details"]["position"] == 2

    def test_missing_file(self, capsys, tmp_path):
        code, payload = run(capsys, "lp", "basis", str(tmp_path / "absent.json"))
        assert code == 1
        assert payload["error"] == "InvalidInput"

    def test_malformed_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"elements": []}))
        code, payload = run(capsys, "lp", "basis", str(path))
        assert code == 1
        assert payload["error"] == "InvalidInput"

    def test_file_without_phi(self, capsys, tmp_path):
        path = tmp_path / "bare.json"
        path.write_text(json.dumps({"elements": ["0", "1"], "order": [["0", "1"]]}))
        code, payload = run(capsys, "lp", "basis", str(path))
        assert code == 1
        assert "phi" in payload["message"]


# ---------------------------------------------------------------------------
# embed / algebrify
# ---------------------------------------------------------------------------


class TestMorphismCommands:
    def test_mo2_embedding_fails(self, capsys):
        code, payload = run(capsys, "embed", "check", "case:boolean2-mo2")
        assert code == 1
        assert payload["result"]["passed"] is False
        assert payload["result"]["report"]["violations"]

    def test_algebrify(self, capsys):
        code, payload = run(capsys, "--seed", "2", "algebrify", "case:example1")
        assert code == 0
        assert payload["seed"] == 2
        assert payload["result"]["count"] == 2
        assert payload["result"]["uniqueness"]["isomorphic"] is True


# ---------------------------------------------------------------------------
# density / framework
# ---------------------------------------------------------------------------


class TestDensityCommands:
    def test_of(self, capsys):
        _, payload = run(capsys, "density", "of", "AP(2,0) & AP(3,0)", "--horizon", "600")
        assert payload["result"]["density"] == "1/6"
        assert payload["result"]["horizon_counts"] == [[600, 100]]

    def test_algebra(self, capsys):
        _, payload = run(capsys, "density", "algebra", "AP(2,0)", "AP(3,0)")
        assert payload["result"]["members"] == 16
        assert payload["result"]["additive"] is True

    def test_dsystem_failure(self, capsys):
        code, payload = run(capsys, "density", "dsystem", "AP(2,0)")
        assert code == 1
        assert payload["result"]["report"]["violations"]

    def test_chain_join(self, capsys):
        _, payload = run(capsys, "density", "chain-join", "dyadic", "--depth", "4", "--horizon", "10000")
        assert payload["result"]["cutoffs"] == [8, 32, 128, 512]

    def test_indicator_rejected(self, capsys):
        code, payload = run(capsys, "density", "of", "BLOCKS_OF_DOUBLING")
        assert code == 1
        assert payload["error"] == "UnsupportedCombination"


class TestFrameworkCommands:
    def test_axioms(self, capsys):
        code, payload = run(capsys, "framework", "axioms", "--i-max", "6", "--fragment-size", "4")
        assert code == 0
        assert payload["result"]["passed"] is True

    def test_broken_control(self, capsys):
        code, _ = run(
            capsys, "framework", "axioms", "--control", "broken_evaluator", "--i-max", "6", "--fragment-size", "4"
        )
        assert code == 1

    def test_descriptor(self, capsys, tmp_path):
        path = tmp_path / "instance.json"
        path.write_text(json.dumps({"group": "multiplicative", "i_max": 5, "fragment_size": 3}))
        code, payload = run(capsys, "framework", "axioms", "--descriptor", str(path))
        assert code == 0
        assert payload["result"]["report"]["group"] == "multiplicative"

    def test_limit_diverges(self, capsys):
        _, payload = run(capsys, "framework", "limit", "BLOCKS_OF_DOUBLING", "--horizon", "65536")
        assert payload["result"]["divergent"] is True


# ---------------------------------------------------------------------------
# Output and usage
# ---------------------------------------------------------------------------


class TestOutput:
    def test_human(self, capsys):
        code = main(["--output", "human", "density", "of", "AP(2,0)", "--horizon", "10"])
        out = capsys.readouterr().out
        assert code == 0
        assert "status: success" in out
        assert "density: 1/2" in out

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main(["lp"])
        assert info.value.code == 2

    def test_render_nested(self):
        text = render_human({"a": {"b": [1, 2]}, "c": []})
        assert text.splitlines() == ["a:", "  b:", "    1, 2", "c: []"]
