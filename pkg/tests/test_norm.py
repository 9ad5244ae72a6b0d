"""Tests for the L^p semi-norm, its kernel and φ*."""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticelp import linalg
from latticelp.cases import case_names, catalog_case
from latticelp.errors import DimensionMismatch, FamilyExplosion, InvalidExponent, SemanticsUnsupported
from latticelp.lattice import catalog
from latticelp.norm import (
    derive_phistar,
    family_norm,
    kernel_basis,
    make_context,
    _families,
    meet_zero_families,
    norm,
    phistar_invariance,
    semantics_probe,
    triangle_check,
)
from latticelp.quotient import build
from latticelp.sampling import sample_vectors
from latticelp.submeasure import check_submeasure

coefficient = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def _context(name, values, p=1, semantics="disjoint"):
    lattice = catalog(name)
    return make_context(build(lattice), check_submeasure(lattice, values), p, semantics)


# ---------------------------------------------------------------------------
# Context validation
# ---------------------------------------------------------------------------


class TestContext:
    def test_exponent_range(self, example1):
        with pytest.raises(InvalidExponent):
            example1.with_p("1/2")
        with pytest.raises(InvalidExponent):
            example1.with_p(17)

    def test_any_requires_p_one(self, example1):
        with pytest.raises(SemanticsUnsupported, match="p > 1"):
            example1.with_p(2, "any")

    def test_unknown_semantics(self, example1):
        with pytest.raises(SemanticsUnsupported):
            example1.with_p(1, "overlapping")

    def test_exact_flag(self, example1):
        assert example1.exact
        assert not example1.with_p("3/2").exact


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


class TestFamilies:
    def test_boolean_pair(self):
        assert meet_zero_families(catalog("boolean_2")) == ((1, 2), (3,))

    def test_m3(self):
        lattice = catalog("m3")
        families = {tuple(lattice.label(i) for i in f) for f in meet_zero_families(lattice)}
        assert families == {("A", "B", "C"), ("1",)}

    def test_cap(self):
        with pytest.raises(FamilyExplosion):
            meet_zero_families(catalog("boolean_3"), cap=0)

    def test_single_family_value(self, n5):
        lattice = n5.lattice
        family = (lattice.index("A"), lattice.index("B"))
        result = family_norm(n5, family, n5.space.unit("1"))
        assert result.value == F(3, 4)


# ---------------------------------------------------------------------------
# Worked values
# ---------------------------------------------------------------------------


class TestWorkedValues:
    """Closed forms on the catalog pairs."""

    @settings(max_examples=25, deadline=None)
    @given(coefficient, coefficient)
    def test_boolean_pair_p1(self, a, b):
        ctx = catalog_case("example1")
        x = ctx.space.vector([(a, "A"), (b, "B")])
        assert norm(ctx, x).value == (abs(a) + abs(b)) / 2

    @settings(max_examples=10, deadline=None)
    @given(coefficient, coefficient)
    def test_boolean_pair_p2(self, a, b):
        ctx = catalog_case("example1", 2)
        x = ctx.space.vector([(a, "A"), (b, "B")])
        expected = math.sqrt((float(a) ** 2 + float(b) ** 2) / 2)
        assert float(norm(ctx, x)) == pytest.approx(expected, rel=1e-6, abs=1e-9)

    @settings(max_examples=25, deadline=None)
    @given(coefficient, coefficient)
    def test_n5_weighted_l1(self, a, b):
        ctx = catalog_case("n5")
        result = norm(ctx, ctx.space.vector([(a, "A"), (b, "B")]))
        assert result.value == abs(a) / 2 + abs(b) / 4
        assert all(label != "C" for _, label in result.witness)

    def test_m3_unit(self, m3):
        assert norm(m3, m3.space.unit("A")).value == F(1, 2)

    def test_m3_unit_p2(self, m3):
        value = float(norm(m3.with_p(2), m3.space.unit("A")))
        assert value == pytest.approx(1 / math.sqrt(6), rel=1e-6)

    def test_mo2_complements_collapse(self, mo2):
        x = mo2.space.unit("a") - mo2.space.unit("a'")
        assert norm(mo2, x).value == 0

    def test_zero_vector(self, example1):
        assert norm(example1, example1.space.zero()).value == 0
        assert float(norm(example1.with_p(3), example1.space.zero())) == 0.0

    def test_witness_dominates(self, n5):
        x = n5.space.vector([(F(3, 2), "A"), (F(-1), "C")])
        result = norm(n5, x)
        assert sum(b * n5.phi(label) for b, label in result.witness) == result.value

    def test_bracket(self, boolean3):
        ctx = boolean3.with_p("3/2")
        result = norm(ctx, ctx.space.vector([(1, "A"), (-2, "BC")]))
        assert not result.exact
        assert result.lower <= float(result) <= result.upper
        assert result.upper - result.lower <= 1e-6
        model = result.to_model()
        assert model.bracket is not None and model.semantics == "disjoint"

    def test_dimension_mismatch(self, example1, m3):
        with pytest.raises(DimensionMismatch):
            norm(example1, m3.space.unit("A"))


# ---------------------------------------------------------------------------
# Semi-norm laws (property-based)
# ---------------------------------------------------------------------------


class TestSemiNormLaws:
    @settings(max_examples=20, deadline=None)
    @given(st.lists(coefficient, min_size=2, max_size=2), st.lists(coefficient, min_size=2, max_size=2))
    def test_triangle_under_any_semantics(self, u, v):
        ctx = catalog_case("n5", 1, "any")
        x, y = ctx.space.from_coords(u), ctx.space.from_coords(v)
        assert norm(ctx, x + y).value <= norm(ctx, x).value + norm(ctx, y).value

    @settings(max_examples=20, deadline=None)
    @given(st.lists(coefficient, min_size=3, max_size=3), st.fractions(min_value=-3, max_value=3, max_denominator=3))
    def test_homogeneity(self, u, c):
        ctx = catalog_case("boolean_3")
        x = ctx.space.from_coords(u)
        assert norm(ctx, x.scale(c)).value == abs(c) * norm(ctx, x).value

    def test_symmetric(self, n5):
        x = n5.space.vector([(2, "A"), (-1, "B")])
        assert norm(n5, x).value == norm(n5, -x).value


# ---------------------------------------------------------------------------
# Kernel and φ*
# ---------------------------------------------------------------------------


class TestKernel:
    def test_trivial_kernel(self, example1):
        assert kernel_basis(example1) == []

    def test_null_element_spans_kernel(self):
        ctx = _context("chain_3", {"0": 0, "c1": 0, "1": 1})
        basis = kernel_basis(ctx)
        assert len(basis) == 1
        assert norm(ctx, ctx.space.unit("c1")).value == 0
        assert norm(ctx, basis[0]).value == 0

    def test_kernel_independent_of_p(self):
        ctx = _context("chain_3", {"0": 0, "c1": 0, "1": 1})
        assert len(kernel_basis(ctx.with_p(2))) == len(kernel_basis(ctx))

    def test_null_atom_kernel_same_span_at_every_p(self):
        ctx = _context("boolean_2", {"0": 0, "A": 0, "B": 1, "1": 1})
        one = [z.coords for z in kernel_basis(ctx)]
        two = [z.coords for z in kernel_basis(ctx.with_p(2))]
        assert len(one) == 1
        assert linalg.span_equal(one, two, ctx.space.x_dim)
        assert linalg.span_equal(one, [ctx.space.q("A")], ctx.space.x_dim)

    @pytest.mark.parametrize(
        "name, values, semantics",
        [
            ("boolean_2", {"0": 0, "A": 0, "B": 1, "1": 1}, "disjoint"),
            ("boolean_2", {"0": 0, "A": 0, "B": 1, "1": 1}, "any"),
            ("chain_3", {"0": 0, "c1": 0, "1": 1}, "any"),
        ],
    )
    def test_norm_constant_on_kernel_cosets(self, name, values, semantics):
        ctx = _context(name, values, semantics=semantics)
        for z in kernel_basis(ctx):
            for x in sample_vectors(ctx.space, 0, 5):
                for c in (F(1), F(-5, 2)):
                    assert norm(ctx, x + z.scale(c)).value == norm(ctx, x).value

    def test_disjoint_norm_moves_along_chain_kernel(self):
        ctx = _context("chain_3", {"0": 0, "c1": 0, "1": 1})
        x = ctx.space.unit("1")
        z = ctx.space.unit("c1")
        assert kernel_basis(ctx) != []
        assert norm(ctx, x).value == 1
        assert norm(ctx, x + z).value == 2


class TestPhiStar:
    def test_measure_is_fixed(self, example1):
        assert derive_phistar(example1).same_values(example1.phi)

    def test_n5(self, n5):
        phistar = derive_phistar(n5)
        assert phistar("C") == F(1, 4)
        assert phistar("1") == F(3, 4)

    def test_nonmonotone_input(self):
        ctx = catalog_case("nonmonotone")
        assert not ctx.phi.order_preserving
        phistar = derive_phistar(ctx)
        assert phistar.order_preserving
        assert all(s <= f for s, f in zip(phistar.values, ctx.phi.values))
        assert derive_phistar(ctx.with_phi(phistar)).same_values(phistar)

    def test_requires_p_one(self, example1):
        with pytest.raises(InvalidExponent):
            derive_phistar(example1.with_p(2))


class TestSemanticsProbe:
    def test_boolean_agrees(self, example1):
        report = semantics_probe(example1, sample_vectors(example1.space, 0, 10))
        assert report.agree
        assert report.samples == 8 + 10

    @pytest.mark.parametrize("name", case_names())
    def test_every_catalog_case(self, name):
        ctx = catalog_case(name)
        samples = sample_vectors(ctx.space, 0, 5)
        report = semantics_probe(ctx, samples)
        assert report.samples == len(samples)
        assert report.agree == (report.discrepancies == [])

    def test_chain_disagrees(self):
        ctx = catalog_case("chain_3")
        x = ctx.space.unit("1") + ctx.space.unit("c1")
        report = semantics_probe(ctx, [x])
        assert not report.agree
        assert report.discrepancies[0].detail == "any=3/2 disjoint=2/1"

    def test_nonmonotone_disagrees(self):
        ctx = catalog_case("nonmonotone")
        x = ctx.space.from_coords([F(-3, 4), F(-2), F(-2)])
        report = semantics_probe(ctx, [x])
        assert not report.agree
        assert len(report.discrepancies) == 1


# ---------------------------------------------------------------------------
# φ* leaves the norm unchanged
# ---------------------------------------------------------------------------

TOP_BELOW_ONE = {"n5", "nonmonotone"}


class TestPhiStarInvariance:
    @pytest.mark.parametrize("name", case_names())
    def test_any_semantics_p1(self, name):
        ctx = catalog_case(name, 1, "any")
        report = phistar_invariance(ctx, sample_vectors(ctx.space, 0, 5))
        assert report.agree, report.discrepancies

    @pytest.mark.parametrize("name", case_names())
    def test_disjoint_semantics_p1(self, name):
        ctx = catalog_case(name)
        samples = sample_vectors(ctx.space, 0, 5)
        report = phistar_invariance(ctx, samples)
        assert report.semantics == "disjoint"
        assert report.samples == len(samples)
        if name != "nonmonotone":
            assert report.agree, report.discrepancies

    @pytest.mark.parametrize("name", case_names())
    def test_disjoint_semantics_p2(self, name):
        ctx = catalog_case(name, 2)
        report = phistar_invariance(ctx, sample_vectors(ctx.space, 0, 3))
        assert report.p == "2/1"
        assert report.phistar_top == ("3/4" if name in TOP_BELOW_ONE else "1/1")
        if name not in TOP_BELOW_ONE:
            assert report.agree, report.discrepancies

    @pytest.mark.parametrize("name", case_names())
    def test_value_at_top(self, name):
        report = phistar_invariance(catalog_case(name), [])
        if name in TOP_BELOW_ONE:
            assert report.phistar_top == "3/4"
            assert not report.top_is_one
        else:
            assert report.phistar_top == "1/1"
            assert report.top_is_one

    def test_nonmonotone_discrepancy_is_reported(self):
        ctx = catalog_case("nonmonotone")
        x = ctx.space.from_coords([F(-3, 4), F(-2), F(-2)])
        report = phistar_invariance(ctx, [x])
        assert not report.agree
        assert report.discrepancies[0].detail == "φ=3/2 φ*=11/8"


# ---------------------------------------------------------------------------
# Triangle inequality and the element upper bound
# ---------------------------------------------------------------------------


class TestTriangle:
    @pytest.mark.parametrize("name", case_names())
    def test_any_semantics_holds(self, name):
        ctx = catalog_case(name, 1, "any")
        report = triangle_check(ctx, sample_vectors(ctx.space, 0, 5))
        assert report.pairs > 0
        assert report.ok, report.violations

    @pytest.mark.parametrize("name", case_names())
    def test_disjoint_semantics_is_reported(self, name):
        ctx = catalog_case(name)
        report = triangle_check(ctx, sample_vectors(ctx.space, 0, 5))
        assert report.semantics == "disjoint"
        assert report.ok == (report.violations == [])

    def test_chain_violation_surfaces(self):
        ctx = catalog_case("chain_3")
        report = triangle_check(ctx, [])
        assert not report.ok
        assert any(v.detail.startswith("‖x+y‖=2/1 >") for v in report.violations)

    @settings(max_examples=10, deadline=None)
    @given(st.data())
    @pytest.mark.parametrize("name", case_names())
    def test_element_upper_bound(self, name, data):
        ctx = catalog_case(name, 1, "any")
        elements = ctx.lattice.nonzero()
        coeffs = data.draw(st.lists(coefficient, min_size=len(elements), max_size=len(elements)))
        x = ctx.space.vector([(a, ctx.lattice.label(i)) for a, i in zip(coeffs, elements)])
        bound = sum(abs(a) * ctx.phi.values[i] for a, i in zip(coeffs, elements))
        assert norm(ctx, x).value <= bound

    def test_disjoint_can_exceed_element_bound(self):
        ctx = catalog_case("chain_3")
        x = ctx.space.vector([(1, "1"), (1, "c1")])
        assert norm(ctx, x).value == 2
        assert norm(ctx.with_p(1, "any"), x).value == F(3, 2)


# ---------------------------------------------------------------------------
# Family cache
# ---------------------------------------------------------------------------


class TestFamilyCache:
    def test_rebuilt_lattice_hits_cache(self):
        _families.cache_clear()
        first = meet_zero_families(catalog("m3"))
        second = meet_zero_families(catalog("m3"))
        info = _families.cache_info()
        assert first == second
        assert info.misses == 1
        assert info.hits == 1
