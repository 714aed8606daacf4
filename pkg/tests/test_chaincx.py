"""Tests for chain complexes, homology and the projective model structure."""

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extlin.core.chaincx import (
    ChainComplex,
    ChainMap,
    chain_map_space,
    compose_cc,
    direct_sum_cc,
    disk,
    generators,
    hom_cc,
    homology,
    identity_cc,
    is_cofibration_cc,
    is_fibration_cc,
    is_iso_cc,
    is_quasi_iso,
    pushout_cc,
    pushout_product_cc,
    solve_lifting,
    sphere,
    tensor_cc,
    tensor_unitor,
    unsigned_sign,
    zero_cc_map,
)
from extlin.core.errors import ChainComplexError, LiftingInputError
from extlin.core.finvect import LinearMap, VectorSpace

ONE = ((Fraction(1),),)

cells = st.lists(st.tuples(st.sampled_from("SD"), st.integers(-2, 2)), max_size=3)


def cell_complex(layout):
    """Direct sum of spheres and disks; its homology is one class per sphere."""
    pieces = [sphere(n) if kind == "S" else disk(n) for kind, n in layout]
    return direct_sum_cc(pieces).complex


def sphere_degrees(layout):
    return Counter(n for kind, n in layout if kind == "S")


class TestChainComplex:
    """Tests for construction and validation."""

    def test_zero_components_dropped(self):
        c = ChainComplex({0: VectorSpace.of_dim(2), 1: VectorSpace.zero()})
        assert c.support == [0]
        assert c.dims() == {0: 2}

    def test_square_zero_enforced(self):
        a, b, c = VectorSpace(("a",)), VectorSpace(("b",)), VectorSpace(("c",))
        with pytest.raises(ChainComplexError) as info:
            ChainComplex({2: a, 1: b, 0: c}, {2: LinearMap(a, b, ONE), 1: LinearMap(b, c, ONE)})
        assert info.value.location == ("differential", 2)

    def test_differential_shape(self):
        a, b = VectorSpace(("a",)), VectorSpace(("b",))
        with pytest.raises(ChainComplexError) as info:
            ChainComplex({1: a, 0: b}, {1: LinearMap(b, a, ONE)})
        assert info.value.location == ("differential", 1)

    def test_disk_and_sphere(self):
        assert disk(2).dims() == {1: 1, 2: 1}
        assert sphere(-1).dims() == {-1: 1}
        assert ChainComplex.unit().dims() == {0: 1}


class TestChainMap:
    """Tests for chain map validation."""

    def test_commutation_enforced(self):
        d, s = disk(1), sphere(0)
        with pytest.raises(ChainComplexError) as info:
            ChainMap(d, s, {0: LinearMap(d.component(0), s.component(0), ONE)})
        assert info.value.location == ("map", 1)

    def test_generator_types(self):
        gen = generators(1)
        assert is_cofibration_cc(gen.i)
        assert is_cofibration_cc(gen.j)
        assert not is_quasi_iso(gen.i)
        assert is_quasi_iso(gen.j)

    def test_chain_map_space(self):
        assert chain_map_space(sphere(1), disk(1))[0].dim == 0
        assert chain_map_space(sphere(0), disk(1))[0].dim == 1


class TestHomology:
    """Tests for homology and the Künneth formula."""

    def test_sphere(self):
        assert homology(sphere(2)).dims() == {2: 1}

    def test_disk_is_acyclic(self):
        assert homology(disk(3)).is_zero()

    @given(cells)
    def test_cell_complexes(self, layout):
        assert homology(cell_complex(layout)).dims() == dict(sphere_degrees(layout))

    @settings(max_examples=40, deadline=None)
    @given(cells, cells)
    def test_kunneth(self, left, right):
        expected = Counter()
        for p, a in sphere_degrees(left).items():
            for q, b in sphere_degrees(right).items():
                expected[p + q] += a * b
        product = tensor_cc(cell_complex(left), cell_complex(right))
        assert homology(product).dims() == dict(expected)

    def test_sign_rule_matters(self):
        with pytest.raises(ChainComplexError):
            tensor_cc(disk(1), disk(1), unsigned_sign)

    def test_tensor_unitor(self):
        assert is_iso_cc(tensor_unitor(disk(2)))

    def test_hom_complex(self):
        assert homology(hom_cc(sphere(0), sphere(2))).dims() == {2: 1}
        assert homology(hom_cc(disk(1), sphere(3))).is_zero()


class TestPushouts:
    """Tests for pushouts and pushout-products."""

    def test_pushout_of_disks_over_zero(self):
        j = generators(1).j
        square = pushout_cc(j, j)
        assert square.complex.dims() == {0: 2, 1: 2}

    def test_pushout_product_of_boundary_inclusions(self):
        i = generators(1).i
        pp = pushout_product_cc(i, i)
        assert is_cofibration_cc(pp.map)
        assert homology(pp.map.codomain).is_zero()

    @pytest.mark.parametrize("m,k", [(0, 1), (1, 1), (-1, 2), (2, -1)])
    def test_pushout_product_with_acyclic_is_acyclic(self, m, k):
        pp = pushout_product_cc(generators(m).i, generators(k).j)
        assert is_cofibration_cc(pp.map)
        assert is_quasi_iso(pp.map)


class TestLifting:
    """Tests for solve_lifting."""

    def test_boundary_lifts_against_acyclic_fibration(self):
        gen = generators(1)
        p = zero_cc_map(gen.disk, ChainComplex.zero())
        assert is_fibration_cc(p)
        h = solve_lifting(gen.i, p, gen.i, zero_cc_map(gen.disk, ChainComplex.zero()))
        assert h is not None
        assert compose_cc(h, gen.i) == gen.i

    def test_no_retraction_of_disk_onto_boundary(self):
        gen = generators(1)
        s = gen.sphere
        p = zero_cc_map(s, ChainComplex.zero())
        bottom = zero_cc_map(gen.disk, ChainComplex.zero())
        assert solve_lifting(gen.i, p, identity_cc(s), bottom) is None

    def test_square_must_commute(self):
        gen = generators(1)
        s = gen.sphere
        with pytest.raises(LiftingInputError):
            solve_lifting(gen.i, identity_cc(s), identity_cc(s), zero_cc_map(gen.disk, s))
