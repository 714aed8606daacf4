"""Tests for truncated simplicial chain complexes and totalization."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extlin.core.chaincx import direct_sum_cc, disk, generators, homology, identity_cc, sphere, zero_cc_map
from extlin.core.errors import SimplicialIdentityError
from extlin.core.simplicial import (
    TruncatedSimplicialComplex,
    const_map,
    const_simplicial,
    is_levelwise_quasi_iso,
    is_total_quasi_iso,
    simplex_map_tensoring,
    simplex_tensoring,
    totalize,
    totalize_map,
    zero_simplicial,
)

cells = st.lists(st.tuples(st.sampled_from("SD"), st.integers(-1, 2)), max_size=3)


class TestValidation:
    """Tests for the simplicial identities."""

    def test_missing_face(self):
        s = sphere(0)
        with pytest.raises(SimplicialIdentityError) as info:
            TruncatedSimplicialComplex([s, s], {}, {(0, 0): identity_cc(s)})
        assert info.value.location == ("face", 1, 0)

    def test_degeneracy_must_split_faces(self):
        s = sphere(0)
        ident = identity_cc(s)
        with pytest.raises(SimplicialIdentityError) as info:
            TruncatedSimplicialComplex([s, s], {(1, 0): ident, (1, 1): ident}, {(0, 0): zero_cc_map(s, s)})
        assert info.value.location == ("mixed", 0, 0, 0)

    def test_constant_object(self):
        x = const_simplicial(disk(1), 3)
        assert x.truncation == 3
        assert x.face(2, 1) == identity_cc(disk(1))

    def test_zero(self):
        assert totalize(zero_simplicial(2)).dims() == {}


class TestSimplexTensoring:
    """Tests for copies of a complex indexed by simplices."""

    def test_level_sizes(self):
        x = simplex_tensoring(1, sphere(0), 2)
        assert [level.dims() for level in x.levels] == [{0: 2}, {0: 3}, {0: 4}]

    def test_point_matches_constant(self):
        v = sphere(0)
        assert totalize(simplex_tensoring(0, v, 2)).dims() == totalize(const_simplicial(v, 2)).dims()

    def test_interval_homology(self):
        # The top level is never hit by a differential from above.
        total = totalize(simplex_tensoring(1, sphere(0), 2))
        assert homology(total).dims() == {0: 1, 2: 2}

    def test_coface_map(self):
        f = simplex_map_tensoring([1], 0, 1, sphere(0), 2)
        total = totalize_map(f)
        assert total.domain == totalize(f.source)
        assert total.codomain == totalize(f.target)

    def test_non_monotone_rejected(self):
        with pytest.raises(SimplicialIdentityError) as info:
            simplex_map_tensoring([1, 0], 1, 1, sphere(0), 1)
        assert info.value.location == ("delta",)


class TestTotalization:
    """Tests for the total complex and its quasi-isomorphisms."""

    def test_constant_even_truncation(self):
        assert homology(totalize(const_simplicial(sphere(0), 2))).dims() == {0: 1}

    def test_constant_odd_truncation_keeps_top(self):
        assert homology(totalize(const_simplicial(sphere(0), 1))).dims() == {0: 1, 1: 1}

    def test_constant_disk_is_acyclic(self):
        assert homology(totalize(const_simplicial(disk(1), 2))).is_zero()

    @settings(max_examples=30, deadline=None)
    @given(cells, st.sampled_from([0, 2]))
    def test_constant_recovers_homology(self, layout, truncation):
        v = direct_sum_cc([sphere(n) if kind == "S" else disk(n) for kind, n in layout]).complex
        total = totalize(const_simplicial(v, truncation))
        assert homology(total).dims() == homology(v).dims()

    def test_levelwise_quasi_iso_is_total(self):
        f = const_map(generators(1).j, 2)
        assert is_levelwise_quasi_iso(f)
        assert is_total_quasi_iso(f)

    def test_boundary_inclusion_is_neither(self):
        f = const_map(generators(1).i, 2)
        assert not is_levelwise_quasi_iso(f)
        assert not is_total_quasi_iso(f)
