"""Tests for the limit framework on finite truncations."""

from fractions import Fraction as F

import pytest

from latticelp import upset
from latticelp.density import BLOCKS_OF_DOUBLING, IndicatorSet, parse_set
from latticelp.errors import HorizonTooSmall, PremiseFailed
from latticelp.framework import (
    GroupModel,
    PowerOfTwo,
    PowersetFragment,
    broken_evaluator,
    broken_support,
    build_instance,
    check_counting_bullets,
    check_framework,
    check_group_model,
    check_mi_axioms,
    check_supports,
    counting_instance,
    filter_limit,
    lemma_premises_check,
)
from latticelp.models import FrameworkDescriptor

SMALL = {"i_max": 10, "fragment_size": 5}

# ---------------------------------------------------------------------------
# Group models
# ---------------------------------------------------------------------------


class TestGroupModel:
    @pytest.mark.parametrize("kind", ["additive", "multiplicative"])
    def test_axioms_hold(self, kind):
        lines = check_group_model(GroupModel(kind))
        assert [line.holds for line in lines] == [True, True, True]
        assert all(line.checked > 0 for line in lines)

    def test_power_of_two(self):
        half = PowerOfTwo(F(1, 2))
        assert half * half == PowerOfTwo(F(1))
        assert str(half) == "2^(1/2)"
        assert PowerOfTwo(F(-1)) < half

    def test_neighbourhoods(self):
        g = GroupModel("multiplicative")
        assert g.in_neighbourhood(g.embed(F(1, 8)), g.neutral, 3)
        assert not g.in_neighbourhood(g.embed(F(1, 8)), g.neutral, 4)


# ---------------------------------------------------------------------------
# Fragment
# ---------------------------------------------------------------------------


class TestFragment:
    def test_restrict_and_show(self):
        fragment = PowersetFragment(4)
        mask = fragment.restrict(upset.ap(2, 0))
        assert mask == 0b1010
        assert fragment.show(mask) == "{2,4}"
        assert fragment.to_upset(mask).count(10) == 2

    def test_ortho_and_order(self):
        fragment = PowersetFragment(3)
        assert fragment.ortho(0b001) == 0b110
        assert fragment.leq(0b001, 0b011)
        assert not fragment.leq(0b100, 0b011)


# ---------------------------------------------------------------------------
# Axiom scans
# ---------------------------------------------------------------------------


class TestAxioms:
    @pytest.mark.parametrize("group", ["additive", "multiplicative"])
    def test_counting_instance_passes(self, group):
        report = check_framework(counting_instance(group, **SMALL))
        assert report.violations == []
        assert report.group == group
        assert report.metadata["instance"] == "counting"

    def test_broken_evaluator_fails_additivity(self):
        lines = check_mi_axioms(broken_evaluator(**SMALL))
        failed = [line.name for line in lines if not line.holds]
        assert len(failed) == 1 and failed[0].startswith("(iv)")

    def test_broken_support_fails_identity(self):
        lines = check_supports(broken_support(**SMALL))
        assert not lines[0].holds
        assert lines[0].witness is not None
        assert lines[1].holds and lines[2].holds

    def test_counting_bullets(self):
        lines = check_counting_bullets()
        assert all(line.holds for line in lines)
        assert lines[0].checked > 0

    def test_descriptor(self):
        inst = build_instance(FrameworkDescriptor(group="multiplicative", i_max=4, fragment_size=3))
        assert inst.group.kind == "multiplicative"
        assert len(inst.values) == 4
        assert inst.values[1][0b011] == PowerOfTwo(F(1))


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------


class TestFilterLimit:
    def test_exact_on_density_sets(self):
        report = filter_limit(counting_instance(**SMALL), parse_set("AP(2,0)"))
        assert report.exact
        assert report.value == "1/2"

    def test_multiplicative_value(self):
        report = filter_limit(counting_instance("multiplicative", **SMALL), parse_set("AP(3,0)"))
        assert report.value == "2^(1/3)"

    def test_fragment_mask_is_finite(self):
        assert filter_limit(counting_instance(**SMALL), 0b101).value == "0/1"

    def test_blocks_of_doubling_diverge(self):
        report = filter_limit(counting_instance(**SMALL), BLOCKS_OF_DOUBLING, horizon=2**16)
        assert report.divergent
        low, high = report.witness
        assert high[1] - low[1] > 0.3

    def test_converging_indicator(self):
        evens = IndicatorSet("evens", lambda n: n % 2 == 0)
        report = filter_limit(counting_instance(**SMALL), evens, horizon=2**12)
        assert not report.divergent
        assert float(report.value) == pytest.approx(0.5)

    def test_horizon_too_small(self):
        with pytest.raises(HorizonTooSmall):
            filter_limit(counting_instance(**SMALL), BLOCKS_OF_DOUBLING, horizon=100)


# ---------------------------------------------------------------------------
# Countable additivity premises
# ---------------------------------------------------------------------------


class TestLemma:
    def test_dyadic_chain_attains_supremum(self):
        report = lemma_premises_check(counting_instance(**SMALL), "dyadic", depth=8, horizon=10**5)
        assert report.attained
        assert report.target == "1/1"
        assert len(report.gamma_cutoffs) == 8
        assert report.gamma_cutoffs == sorted(report.gamma_cutoffs)
        assert report.join.cutoffs == report.gamma_cutoffs

    def test_gamma_cutoffs_bound_the_join_blocks(self):
        report = lemma_premises_check(counting_instance(**SMALL), "AP(2,0); ALL", depth=3, horizon=10**4)
        assert report.join.cutoffs == report.gamma_cutoffs
        assert all(k >= n for n, k in enumerate(report.gamma_cutoffs, start=1))
        assert report.attained

    def test_member_without_limit(self):
        with pytest.raises(PremiseFailed, match="Λ membership"):
            lemma_premises_check(counting_instance(**SMALL), "AP(2,0); BLOCKS_OF_DOUBLING", depth=2)

    def test_not_increasing(self):
        with pytest.raises(PremiseFailed, match="increasing") as info:
            lemma_premises_check(counting_instance(**SMALL), "AP(2,0); AP(3,0)", depth=2)
        assert info.value.details["index"] == 1
