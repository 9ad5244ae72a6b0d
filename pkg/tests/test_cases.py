"""Tests for the catalog cases and the worked-example checks."""

from fractions import Fraction as F

import pytest

from latticelp.cases import (
    case_names,
    catalog_case,
    catalog_embedding,
    check_boolean_consistency,
    check_example_boolean_pair,
    check_example_m3,
    check_example_n5,
    embedding_names,
    uniform_boolean,
    verify_examples,
)
from latticelp.errors import UnknownName

# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


class TestCatalog:
    def test_names(self):
        assert {"example1", "m3", "n5", "mo2", "o6", "nonmonotone"} <= set(case_names())
        assert embedding_names() == ["boolean2-mo2", "boolean2-boolean3"]

    @pytest.mark.parametrize("name", case_names())
    def test_every_case_loads(self, name):
        ctx = catalog_case(name)
        assert ctx.phi(ctx.lattice.top) == 1
        assert ctx.phi(ctx.lattice.bottom) == 0

    def test_unknown_case(self):
        with pytest.raises(UnknownName):
            catalog_case("n7")

    def test_uniform_boolean(self):
        ctx = uniform_boolean(3)
        assert ctx.phi("AB") == F(2, 3)
        assert ctx.phi.orthoadditive

    def test_embedding_measure_is_pulled_back(self):
        model = catalog_embedding("boolean2-boolean3")
        assert model.mu == {"0": "0/1", "A": "1/3", "B": "2/3", "1": "1/1"}

    def test_unknown_embedding(self):
        with pytest.raises(UnknownName):
            catalog_embedding("mo2-boolean2")


# ---------------------------------------------------------------------------
# Worked examples
# ---------------------------------------------------------------------------


class TestWorkedExamples:
    def test_boolean_pair(self):
        check = check_example_boolean_pair(seed=3, count=5)
        assert check.passed, check.detail
        assert check.checked == 5

    def test_m3(self):
        check = check_example_m3()
        assert check.passed, check.detail

    def test_n5(self):
        check = check_example_n5(seed=1, count=10)
        assert check.passed, check.detail

    def test_boolean_consistency(self):
        check = check_boolean_consistency(seed=0, count=3, sizes=(2,))
        assert check.passed, check.detail
        assert check.checked == 8 + 3

    @pytest.mark.slow
    def test_verify_examples(self):
        report = verify_examples(seed=0)
        assert report.passed
        assert len(report.checks) == 4
