"""Tests for exact linear algebra, the simplex solver and cone routines."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticelp import cone, linalg
from latticelp.simplex import solve_lp

# ---------------------------------------------------------------------------
# linalg
# ---------------------------------------------------------------------------


class TestLinalg:
    """Row spaces, inverses and primitive scaling."""

    def test_row_space_rejects_dependent_rows(self):
        space = linalg.RowSpace(3)
        assert space.add((F(1), F(2), F(0)))
        assert space.add((F(0), F(1), F(1)))
        assert not space.add((F(1), F(3), F(1)))
        assert len(space) == 2

    def test_inverse(self):
        m = ((F(2), F(1)), (F(1), F(1)))
        assert linalg.mat_mul(m, linalg.inverse(m)) == linalg.identity(2)

    def test_solve(self):
        assert linalg.solve(((F(1), F(1)), (F(1), F(-1))), (F(3), F(1))) == (F(2), F(1))

    def test_rank(self):
        assert linalg.rank(((F(1), F(2)), (F(2), F(4)))) == 1
        assert linalg.rank(()) == 0

    def test_primitive(self):
        assert linalg.primitive((F(1, 2), F(-3, 4))) == (F(2), F(-3))

    def test_span_equal(self):
        a = ((F(1), F(0)), (F(0), F(1)))
        b = ((F(1), F(1)), (F(1), F(-1)))
        assert linalg.span_equal(a, b, 2)


# ---------------------------------------------------------------------------
# simplex
# ---------------------------------------------------------------------------


class TestSimplex:
    """Exact two-phase simplex with Bland's rule."""

    def test_optimal(self):
        # min x + 2y  s.t.  x + y = 1
        result = solve_lp([[F(1), F(1)]], [F(1)], [F(1), F(2)])
        assert result.status == "optimal"
        assert result.value == 1
        assert result.x == (F(1), F(0))

    def test_infeasible(self):
        result = solve_lp([[F(1), F(1)]], [F(-1)], [F(1), F(1)])
        assert result.status == "infeasible"

    def test_unbounded(self):
        # min -x  s.t.  x - y = 0
        result = solve_lp([[F(1), F(-1)]], [F(0)], [F(-1), F(0)])
        assert result.status == "unbounded"

    def test_feasibility_only(self):
        result = solve_lp([[F(2), F(0)], [F(0), F(3)]], [F(1), F(1)])
        assert result.status == "optimal"
        assert result.x == (F(1, 2), F(1, 3))

    def test_redundant_rows(self):
        result = solve_lp([[F(1), F(1)], [F(2), F(2)]], [F(1), F(2)], [F(3), F(1)])
        assert result.value == 1

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.integers(min_value=0, max_value=5), min_size=3, max_size=3),
        st.integers(min_value=1, max_value=6),
    )
    def test_simplex_picks_cheapest_coordinate(self, costs, total):
        result = solve_lp([[F(1)] * 3], [F(total)], [F(c) for c in costs])
        assert result.status == "optimal"
        assert result.value == min(costs) * total


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------


class TestCone:
    """Membership, lineality and double-description facets."""

    GENERATORS = [(F(1), F(0)), (F(0), F(1)), (F(1), F(1))]

    def test_membership(self):
        assert cone.contains(self.GENERATORS, (F(2), F(3)))
        assert not cone.contains(self.GENERATORS, (F(-1), F(3)))
        assert cone.contains(self.GENERATORS, (F(0), F(0)))

    def test_combination_is_nonnegative(self):
        coefficients = cone.combination(self.GENERATORS, (F(1, 2), F(5)))
        assert coefficients is not None
        assert all(c >= 0 for c in coefficients)

    def test_empty_generators(self):
        assert not cone.contains([], (F(1),))

    def test_facets_of_quadrant(self):
        assert set(cone.facets(self.GENERATORS, 2)) == {(F(1), F(0)), (F(0), F(1))}

    def test_facets_describe_the_cone(self):
        generators = [(F(1), F(0), F(0)), (F(1), F(1), F(0)), (F(1), F(1), F(1)), (F(0), F(0), F(1))]
        normals = cone.facets(generators, 3)
        for point in [(F(3), F(2), F(1)), (F(1), F(0), F(5)), (F(0), F(1), F(0)), (F(2), F(3), F(0))]:
            inside = all(linalg.dot(h, point) >= 0 for h in normals)
            assert inside == cone.contains(generators, point)

    def test_lineality_of_halfplane(self):
        generators = [(F(1), F(0)), (F(-1), F(0)), (F(0), F(1))]
        basis = cone.lineality_basis(generators, 2)
        assert len(basis) == 1
        assert linalg.span_equal(basis, [(F(1), F(0))], 2)

    def test_pointed_cone_has_trivial_lineality(self):
        assert cone.lineality_basis(self.GENERATORS, 2) == ()

    def test_spanning_required(self):
        with pytest.raises(ValueError, match="span"):
            cone.extreme_rays([(F(1), F(0))], 2)
