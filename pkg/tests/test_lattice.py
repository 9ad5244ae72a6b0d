"""Tests for lattice validation, the catalog and the law scans."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latticelp.errors import (
    BadOrtho,
    LatticeTooLarge,
    MissingOrtho,
    NoBounds,
    NotALattice,
    NotAPartialOrder,
    UnknownElement,
    UnknownName,
)
from latticelp.lattice import (
    catalog,
    check_laws,
    check_orthomodular,
    from_file,
    is_boolean,
    is_orthomodular,
    join_primes,
    law_holds,
    serialize,
    validate,
)

CATALOG = ["chain_2", "chain_4", "boolean_1", "boolean_2", "boolean_3", "m3", "n5", "mo2", "o6"]

# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


class TestValidate:
    """Closing a generating order into meet/join tables."""

    def test_transitive_closure(self):
        lattice = validate(["0", "a", "1"], [("0", "a"), ("a", "1")])
        assert lattice.leq(lattice.index("0"), lattice.index("1"))
        assert lattice.bottom == 0 and lattice.top == 2

    def test_meet_and_join_tables(self):
        lattice = catalog("boolean_2")
        a, b = lattice.index("A"), lattice.index("B")
        assert lattice.label(lattice.join(a, b)) == "1"
        assert lattice.label(lattice.meet(a, b)) == "0"

    def test_cycle_is_not_a_partial_order(self):
        with pytest.raises(NotAPartialOrder, match="mutually below"):
            validate(["0", "a", "b", "1"], [("0", "a"), ("a", "b"), ("b", "a"), ("b", "1")])

    def test_missing_bounds(self):
        with pytest.raises(NoBounds):
            validate(["a", "b"], [])

    def test_two_minimal_upper_bounds(self):
        with pytest.raises(NotALattice, match="no join"):
            validate(
                ["0", "a", "b", "c", "d", "1"],
                [
                    ("0", "a"), ("0", "b"),
                    ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
                    ("c", "1"), ("d", "1"),
                ],
            )

    def test_unknown_element_in_order(self):
        with pytest.raises(UnknownElement):
            validate(["0", "1"], [("0", "x")])

    def test_ortho_must_complement(self):
        with pytest.raises(BadOrtho, match="meets its complement"):
            validate(
                ["0", "A", "B", "1"],
                [("0", "A"), ("0", "B"), ("A", "1"), ("B", "1")],
                {"0": "1", "1": "0", "A": "A", "B": "B"},
            )

    def test_ortho_must_be_total(self):
        with pytest.raises(BadOrtho, match="undefined"):
            validate(["0", "1"], [("0", "1")], {"0": "1"})

    def test_size_cap(self):
        with pytest.raises(LatticeTooLarge):
            catalog("chain_65")

    def test_serialize_round_trip_keeps_order(self):
        for name in ("n5", "mo2", "boolean_3"):
            lattice = catalog(name)
            again = from_file(serialize(lattice))
            assert lattice.same_order(again)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


class TestCatalog:
    """Named lattices."""

    def test_sizes(self):
        assert catalog("chain_5").size == 5
        assert catalog("boolean_3").size == 8
        assert catalog("m3").size == 5
        assert catalog("mo2").size == 6
        assert catalog("o6").size == 6

    def test_boolean_labels(self):
        assert catalog("boolean_3").elements == ("0", "A", "B", "C", "AB", "AC", "BC", "1")

    def test_unknown_name(self):
        with pytest.raises(UnknownName):
            catalog("pentagon")

    def test_atoms(self):
        lattice = catalog("mo2")
        assert [lattice.label(a) for a in lattice.atoms()] == ["a", "a'", "b", "b'"]


# ---------------------------------------------------------------------------
# Law scans
# ---------------------------------------------------------------------------


class TestLaws:
    """Exhaustive modular / distributive / orthomodular scans."""

    def test_boolean_is_distributive(self):
        report = check_laws(catalog("boolean_3"))
        assert report.is_distributive and report.is_modular and report.is_orthomodular
        assert report.counterexample is None

    def test_m3_modular_not_distributive(self):
        report = check_laws(catalog("m3"))
        assert report.is_modular and not report.is_distributive
        assert report.counterexample_law == "distributive"
        assert not law_holds(catalog("m3"), "distributive", report.counterexample)

    def test_n5_not_modular(self):
        lattice = catalog("n5")
        report = check_laws(lattice)
        assert not report.is_modular
        assert report.counterexample_law == "modular"
        assert not law_holds(lattice, "modular", report.counterexample)

    def test_mo2_orthomodular_not_distributive(self):
        report = check_laws(catalog("mo2"))
        assert report.is_orthomodular and report.is_modular and not report.is_distributive

    def test_o6_ortholattice_not_orthomodular(self):
        lattice = catalog("o6")
        report = check_orthomodular(lattice)
        assert report.is_ortholattice is True
        assert report.is_orthomodular is False
        assert report.counterexample == ["a", "b"]
        assert not is_orthomodular(lattice)

    def test_orthomodular_scan_needs_ortho(self):
        with pytest.raises(MissingOrtho):
            check_orthomodular(catalog("n5"))

    def test_is_boolean(self):
        assert is_boolean(catalog("boolean_2"))
        assert not is_boolean(catalog("mo2"))
        assert not is_boolean(catalog("chain_3"))


# ---------------------------------------------------------------------------
# Join-primes
# ---------------------------------------------------------------------------


class TestJoinPrimes:
    def test_boolean_atoms(self):
        lattice = catalog("boolean_3")
        assert [lattice.label(a) for a in join_primes(lattice)] == ["A", "B", "C"]

    def test_m3_has_none(self):
        assert join_primes(catalog("m3")) == []

    def test_chain_every_nonzero(self):
        lattice = catalog("chain_4")
        assert join_primes(lattice) == lattice.nonzero()

    def test_n5(self):
        lattice = catalog("n5")
        assert sorted(lattice.label(a) for a in join_primes(lattice)) == ["A", "B"]


# ---------------------------------------------------------------------------
# Lattice identities (property-based)
# ---------------------------------------------------------------------------


@given(st.sampled_from(CATALOG), st.data())
def test_absorption_and_commutativity(name, data):
    lattice = catalog(name)
    index = st.integers(min_value=0, max_value=lattice.size - 1)
    x, y = data.draw(index), data.draw(index)
    assert lattice.meet(x, y) == lattice.meet(y, x)
    assert lattice.join(x, y) == lattice.join(y, x)
    assert lattice.meet(x, lattice.join(x, y)) == x
    assert lattice.join(x, lattice.meet(x, y)) == x
    assert lattice.leq(x, y) == (lattice.meet(x, y) == x)
